#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sheetcas/errors.hpp"
#include "sheetcas/sweep.hpp"

using namespace sheetcas;

namespace {

constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Flags that map one-to-one onto config keys, in the order they are applied.
const std::vector<std::pair<std::string, std::string>> kFlagKeys = {
    {"--method", "method"},       {"--radius", "radius"},
    {"--gap", "gap"},             {"--gap-min", "gap_min"},
    {"--gap-max", "gap_max"},     {"--count", "count"},
    {"--spacing", "spacing"},     {"--omega-sphere", "omega_sphere"},
    {"--omega-plane", "omega_plane"}, {"--lmax", "l_max"},
    {"--mmax", "m_max"},          {"--kappa-nodes", "kappa_nodes"},
    {"--theta-nodes", "theta_nodes"}, {"--rel-tol", "rel_tol"},
    {"--abs-tol", "abs_tol"},     {"--threads", "threads"},
    {"--out", "out"},
};

struct FlagValues {
  std::vector<std::optional<std::string>> values = std::vector<std::optional<std::string>>(kFlagKeys.size());
  std::optional<std::string> config;
};

void add_flags(CLI::App* cmd, FlagValues& fv) {
  for (std::size_t i = 0; i < kFlagKeys.size(); ++i)
    cmd->add_option(kFlagKeys[i].first, fv.values[i], "sets " + kFlagKeys[i].second);
  cmd->add_option("--config", fv.config, "key=value file; flags override its entries");
}

std::vector<Setting> overrides(const FlagValues& fv) {
  std::vector<Setting> out;
  for (std::size_t i = 0; i < kFlagKeys.size(); ++i)
    if (fv.values[i]) out.push_back({kFlagKeys[i].second, *fv.values[i], "flag " + kFlagKeys[i].first});
  return out;
}

int emit(const std::vector<SweepConfig>& configs, const std::string& out, int threads) {
  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::out | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return kExitIo;
    }
  }
  std::ostream& csv = out.empty() ? std::cout : file;
  const SweepSummary s = run_sweep(configs, csv, threads);
  if (!csv) {
    std::cerr << "error: write to '" << (out.empty() ? "stdout" : out) << "' failed\n";
    return kExitIo;
  }
  std::ostream& log = out.empty() ? std::cerr : std::cout;
  log << s.rows << " rows, " << s.failures << " failed";
  if (!out.empty()) log << ", written to " << out;
  log << "\n";
  return s.failures == 0 ? 0 : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir energy of a spherical and a planar plasma sheet"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "print version and constants");

  FlagValues point_flags, sweep_flags;
  auto* point = app.add_subcommand("point", "one sphere-plane configuration");
  add_flags(point, point_flags);
  auto* sweep = app.add_subcommand("sweep", "a range of gaps");
  add_flags(sweep, sweep_flags);
  int figure_number = 0;
  std::string figure_out;
  int figure_threads = 1;
  auto* figure = app.add_subcommand("figure", "parameter grid for figure 1..6");
  figure->add_option("number", figure_number, "figure number")->required()->check(CLI::Range(1, 6));
  figure->add_option("--out", figure_out, "CSV path (default: stdout)");
  figure->add_option("--threads", figure_threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (version) {
    std::printf("sheetcas 1.0.0\nhbar*c = %.8g J m\n", kHbarC);
    return 0;
  }

  try {
    if (*figure) return emit(figure_configs(figure_number), figure_out, figure_threads);
    if (*point || *sweep) {
      const FlagValues& fv = *point ? point_flags : sweep_flags;
      if (fv.config && !std::ifstream(*fv.config)) {
        std::cerr << "error: cannot read config file '" << *fv.config << "'\n";
        return kExitIo;
      }
      const SweepConfig config = parse_config(fv.config, overrides(fv));
      config.validate();
      if (*point && config.count != 1) throw UsageError("point takes a single gap");
      return emit({config}, config.out, config.numerics.threads);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << app.help();
  return kExitUsage;
}
