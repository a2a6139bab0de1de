#pragma once

#include "sheetcas/scattering.hpp"

namespace sheetcas {

struct PolarizationPair {
  double te = 0.0;
  double tm = 0.0;
};

/// Every coefficient entering the next-to-leading small-gap integrand at one
/// point (s, t, tau) for couplings varpi_s = Omega_s d, varpi_p = Omega_p d.
struct NtlCoefficients {
  PolarizationPair t0;        // sphere factors T0
  PolarizationPair t0_tilde;  // plane factors
  double script_a = 0.0;
  double script_b = 0.0;
  PolarizationPair script_c;
  PolarizationPair script_d;
  double c_v = 0.0, c_j = 0.0;
  double d_vv = 0.0, d_jj = 0.0, d_vj = 0.0, d_v = 0.0, d_j = 0.0;
  PolarizationPair k1, k2, w1, w2, y2;
};

/// Throws DomainError unless s >= 0, t > 0 and 0 < tau < 1.
NtlCoefficients ntl_coefficients(int s, double t, double tau, const Plasma& varpi_s,
                                 const Plasma& varpi_p);

/// e^{-2t(s+1)} times the braced integrand of the first correction. When
/// both couplings are perfect the reduced perfect-conductor form is used.
double ntl_integrand(int s, double t, double tau, const Plasma& varpi_s, const Plasma& varpi_p);

/// sum_{j=0}^{k} a^j b^{k-j} by direct summation (0 for k < 0).
double power_sum_explicit(double a, double b, int k);
/// The same quantity as (a^{k+1} - b^{k+1})/(a - b), evaluated without the
/// cancellation at a ~ b. Requires 0 <= a, b.
double power_sum(double a, double b, int k);

/// The mixing term script_b from explicit power sums; for cross-checks.
double script_b_explicit(int s, double t, double tau, const Plasma& varpi_s,
                         const Plasma& varpi_p);

struct AsymptoticOptions {
  int panel_nodes = 12;
  /// 0 selects max(200, 30 / min(varpi)) capped at 5000.
  int s_max = 0;
  double rel_tol = 1e-10;
};

struct SeriesResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int s_terms = 0;
};

/// Leading small-gap energy divided by hbar*c (1/length).
double e0(double radius_R, double gap_d, const Plasma& varpi_s, const Plasma& varpi_p);

/// int_0^inf dt t int_0^1 dtau tau/sqrt(1-tau^2) ntl_integrand(s, ...).
double ntl_s_integral(int s, const Plasma& varpi_s, const Plasma& varpi_p,
                      const AsymptoticOptions& options = {});

/// First correction divided by hbar*c (1/length). The s-series decays like
/// 1/s^2; its remainder is estimated from a fit in 1/(s+1).
SeriesResult e1(double radius_R, double gap_d, const Plasma& varpi_s, const Plasma& varpi_p,
                const AsymptoticOptions& options = {});

/// (E1 / E0) (R / d) for couplings Omega_s, Omega_p in 1/length.
double theta(double gap_d, double radius_R, const Plasma& omega_s, const Plasma& omega_p,
             const AsymptoticOptions& options = {});

/// Splits the tau integral of ntl_s_integral at tau = 1e-3 and integrates the
/// small piece at two resolutions. Reports both totals and the change of the
/// small piece between resolutions.
struct SmallTauSplit {
  double whole = 0.0;
  double split = 0.0;
  double small_piece_change = 0.0;
};
SmallTauSplit ntl_small_tau_split(int s, const Plasma& varpi_s, const Plasma& varpi_p);

}  // namespace sheetcas
