#include "bilinop/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bilinop {

namespace {

void writeHeaderAndRows(const char* tag, const GridSpec& grid,
                        const std::function<void(std::ostream&)>& rows,
                        const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Io, "cannot open " + path + " for writing");
  char header[128];
  std::snprintf(header, sizeof(header), "# %s N=%" PRId64 " L=%.17g", tag, grid.n, grid.scaleL);
  out << header << "\n";
  rows(out);
  require(out.good(), ErrorCode::Io, "write to " + path + " failed");
}

GridSpec parseHeader(const char* tag, std::istream& in, const std::string& path) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::Io,
          path + " is empty");
  char parsedTag[32];
  std::int64_t n = 0;
  double l = 0.0;
  const int fields =
      std::sscanf(line.c_str(), "# %31s N=%" SCNd64 " L=%lg", parsedTag, &n, &l);
  require(fields == 3 && std::string(parsedTag) == tag, ErrorCode::Io,
          path + ": malformed header, expected \"# " + std::string(tag) + " N=... L=...\"");
  return GridSpec(n, l);
}

void parseRow(const std::string& line, const std::string& path, std::int64_t& index,
              double& re, double& im) {
  const int fields = std::sscanf(line.c_str(), "%" SCNd64 ",%lg,%lg", &index, &re, &im);
  require(fields == 3, ErrorCode::Io, path + ": malformed row \"" + line + "\"");
}

void writeComplexRow(std::ostream& out, std::int64_t index, Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%" PRId64 ",%.17g,%.17g", index, v.real(), v.imag());
  out << buf << "\n";
}

}  // namespace

void writeSampledFunction(const SampledFunction& f, const std::string& path) {
  writeHeaderAndRows(
      "bilinop-grid", f.grid(),
      [&](std::ostream& out) {
        for (std::int64_t i = 0; i < f.size(); ++i) writeComplexRow(out, i, f.value(i));
      },
      path);
}

SampledFunction readSampledFunction(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open " + path);
  const GridSpec grid = parseHeader("bilinop-grid", in, path);
  std::vector<Complex> values(static_cast<std::size_t>(grid.n), Complex{0.0, 0.0});
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::int64_t index = 0;
    double re = 0.0, im = 0.0;
    parseRow(line, path, index, re, im);
    require(index >= 0 && index < grid.n, ErrorCode::Io,
            path + ": sample index " + std::to_string(index) + " out of range");
    values[static_cast<std::size_t>(index)] = {re, im};
  }
  return SampledFunction(grid, std::move(values));
}

void writeSpectralCoefficients(const SpectralCoefficients& coeffs, const std::string& path) {
  writeHeaderAndRows(
      "bilinop-spec", coeffs.grid(),
      [&](std::ostream& out) {
        coeffs.forEachNonzero(
            [&](std::int64_t m, Complex v) { writeComplexRow(out, m, v); });
      },
      path);
}

SpectralCoefficients readSpectralCoefficients(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open " + path);
  const GridSpec grid = parseHeader("bilinop-spec", in, path);
  std::map<std::int64_t, Complex> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::int64_t index = 0;
    double re = 0.0, im = 0.0;
    parseRow(line, path, index, re, im);
    require(grid.containsIndex(index), ErrorCode::IndexOutOfRange,
            path + ": lattice index " + std::to_string(index) + " out of range");
    entries[index] = {re, im};
  }
  return SpectralCoefficients::sparse(grid, std::move(entries));
}

}  // namespace bilinop
