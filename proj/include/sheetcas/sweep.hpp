#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sheetcas/numerics.hpp"
#include "sheetcas/scattering.hpp"

namespace sheetcas {

/// hbar * c in J m.
inline constexpr double kHbarC = 3.1615268e-26;

enum class Method { Exact, Pfa, Asympt };

std::string method_name(Method m);

enum class Spacing { Log, Linear };

struct SweepConfig {
  std::vector<Method> methods{Method::Asympt};
  std::optional<double> radius;  // m
  std::optional<double> gap_min, gap_max;  // m
  int count = 1;
  Spacing spacing = Spacing::Log;
  std::optional<Plasma> omega_sphere, omega_plane;  // 1/m
  NumericsSpec numerics;
  std::string out;  // empty: standard output

  /// Throws UsageError for missing or inconsistent settings.
  void validate() const;
  /// Gap values in input order.
  std::vector<double> gaps() const;
};

/// Ordered key/value settings, each with a label used in error messages
/// (for example "line 3" or "flag --lmax").
struct Setting {
  std::string key;
  std::string value;
  std::string where;
};

/// Parses flat key=value text; '#' starts a comment.
std::vector<Setting> read_settings(std::string_view text);

/// Applies one setting; unknown keys and malformed values raise UsageError
/// naming the key and location.
void apply_setting(SweepConfig& config, const Setting& setting);

/// File settings (if a path is given) first, then the overrides.
SweepConfig parse_config(const std::optional<std::string>& path,
                         const std::vector<Setting>& overrides);

/// Plasma parameter from text: a non-negative number or "inf".
Plasma parse_plasma(std::string_view text);

struct SweepRow {
  Method method = Method::Pfa;
  double radius = 0.0, gap = 0.0;
  Plasma omega_sphere, omega_plane;
  std::optional<double> energy_j, energy_dimensionless, ratio_to_pfa_pc, theta, error_estimate;
  std::optional<int> l_max_used, m_max_used;
  std::string status = "ok";
};

/// Evaluates one method at one point; failures are recorded in status.
SweepRow evaluate_point(Method method, double radius, double gap, const Plasma& omega_sphere,
                        const Plasma& omega_plane, const NumericsSpec& numerics);

inline constexpr const char* kCsvHeader =
    "method,R_m,d_m,L_m,omega_s_per_m,omega_p_per_m,energy_J,energy_dimensionless,"
    "ratio_to_PFA_PC,theta,error_estimate,l_max_used,m_max_used,status";

std::string format_row(const SweepRow& row);

struct SweepSummary {
  int rows = 0;
  int failures = 0;
};

/// Runs every (config, gap, method) combination on `threads` workers and
/// writes the header and rows in input order.
SweepSummary run_sweep(const std::vector<SweepConfig>& configs, std::ostream& csv, int threads);

/// Parameter grids behind the figures (1..6).
std::vector<SweepConfig> figure_configs(int figure);

}  // namespace sheetcas
