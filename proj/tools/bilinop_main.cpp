// Command-line front end. Talks to the library exclusively through the
// C API in bilinop.h; argument parsing and config assembly happen here.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bilinop.h"
#include "json.hpp"

namespace {

using Json = nlohmann::json;

struct CommonFlags {
  std::string configPath;
  std::string outPath;
  std::string format = "json";
  std::optional<std::int64_t> n;
  std::optional<double> scaleL;
  std::optional<int> jmax;
  std::optional<double> s;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> t;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

void addCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.configPath, "JSON config file");
  cmd->add_option("--out", flags.outPath, "output path (default stdout)");
  cmd->add_option("--format", flags.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--n", flags.n, "grid size override");
  cmd->add_option("--scale-l", flags.scaleL, "grid scale L override");
  cmd->add_option("--jmax", flags.jmax, "top dyadic level override");
  cmd->add_option("--s", flags.s, "smoothness override");
  cmd->add_option("--p", flags.p, "first exponent override");
  cmd->add_option("--q", flags.q, "second exponent override");
  cmd->add_option("--t", flags.t, "target exponent override");
  cmd->add_option("--trials", flags.trials, "trial count override");
  cmd->add_option("--seed", flags.seed, "RNG seed override");
}

int failWith(bilinop_status status) {
  std::cerr << "error: " << bilinop_last_error() << "\n";
  if (status == BILINOP_ERROR_PRECONDITION || status == BILINOP_ERROR_NYQUIST_VIOLATION ||
      status == BILINOP_ERROR_INVALID_EXPONENT || status == BILINOP_ERROR_BAD_CUTOFF_SPEC ||
      status == BILINOP_ERROR_GRID_TOO_SMALL) {
    return 2;
  }
  return 1;
}

int runCommand(const std::string& name, const CommonFlags& flags) {
  Json config = Json::object();
  if (!flags.configPath.empty()) {
    std::ifstream in(flags.configPath);
    if (!in.good()) {
      std::cerr << "error: cannot open config " << flags.configPath << "\n";
      return 2;
    }
    config = Json::parse(in, nullptr, false);
    if (config.is_discarded()) {
      std::cerr << "error: " << flags.configPath << " is not valid JSON\n";
      return 2;
    }
  }
  if (flags.n) config["n"] = *flags.n;
  if (flags.scaleL) config["scaleL"] = *flags.scaleL;
  if (flags.jmax) config["jMax"] = *flags.jmax;
  if (flags.s) config["s"] = *flags.s;
  if (flags.p) config["p"] = *flags.p;
  if (flags.q) config["q"] = *flags.q;
  if (flags.t) config["t"] = *flags.t;
  if (flags.trials) config["trials"] = *flags.trials;
  if (flags.seed) config["seed"] = *flags.seed;

  char* report = nullptr;
  const std::string configStr = config.dump();
  const bilinop_status status =
      bilinop_run_experiment(name.c_str(), configStr.c_str(), &report);
  if (status != BILINOP_OK) return failWith(status);

  std::string payload;
  if (flags.format == "csv") {
    char* csv = nullptr;
    const bilinop_status cs = bilinop_report_to_csv(report, &csv);
    if (cs != BILINOP_OK) {
      bilinop_string_free(report);
      return failWith(cs);
    }
    payload = csv;
    bilinop_string_free(csv);
  } else {
    payload = report;
    payload += "\n";
  }
  bilinop_string_free(report);

  if (flags.outPath.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(flags.outPath);
    if (!out.good()) {
      std::cerr << "error: cannot open " << flags.outPath << " for writing\n";
      return 1;
    }
    out << payload;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral experiments for bilinear frequency-domain operators"};
  app.set_version_flag("--version", std::string(bilinop_version()));
  app.require_subcommand(1);

  const char* names[] = {"lp-check", "counterexample", "norm-probe", "paraproduct", "bench"};
  const char* descriptions[] = {
      "dyadic partition-of-unity diagnostics",
      "lacunary-symbol identity and ratio growth",
      "Sobolev norm ratio probe over grids and scales",
      "classical vs improved paramultiplication study",
      "evaluation strategy timing and agreement",
  };
  CommonFlags flags[5];
  for (int i = 0; i < 5; ++i) {
    CLI::App* cmd = app.add_subcommand(names[i], descriptions[i]);
    addCommonFlags(cmd, flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 5; ++i) {
    if (app.get_subcommand(names[i])->parsed()) return runCommand(names[i], flags[i]);
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
