#include "sheetcas/pfa.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sheetcas/errors.hpp"
#include "sheetcas/quadrature.hpp"
#include "sheetcas/specfun.hpp"

namespace sheetcas {

namespace {

constexpr double kPi = std::numbers::pi;

struct Grid {
  GaussRule t, phi;
};

// tau = sin(phi) removes the 1/sqrt(1 - tau^2) endpoint; the phi panels are
// refined towards tau = 1 where the TM coefficient varies on the scale
// sqrt(varpi / t), and the t panels towards 0 for the t^2 ln t behaviour.
Grid make_grid(int panel_nodes) {
  Grid g;
  g.t = decaying_half_line_rule(0.5, 30, panel_nodes, 4 * panel_nodes);
  g.phi = gauss_legendre(2 * panel_nodes, 0.0, 0.25 * kPi);
  const auto upper = graded_rule(0.25 * kPi, 0.5 * kPi, 0.5 * kPi, 14, panel_nodes);
  g.phi.nodes.insert(g.phi.nodes.end(), upper.nodes.begin(), upper.nodes.end());
  g.phi.weights.insert(g.phi.weights.end(), upper.weights.begin(), upper.weights.end());
  return g;
}

// int_0^inf dt t^power int_0^{pi/2} dphi sin(phi) f(t, tau, kappa/q, k_perp/q)
template <class F>
double integrate(const Grid& g, int power, F&& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.t.nodes.size(); ++i) {
    const double t = g.t.nodes[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < g.phi.nodes.size(); ++j) {
      const double tau = std::sin(g.phi.nodes[j]);
      inner += g.phi.weights[j] * tau * f(t, std::cos(g.phi.nodes[j]), tau);
    }
    total += g.t.weights[i] * std::pow(t, power) * inner;
  }
  return total;
}

// Value at two resolutions; fails loudly if they disagree.
template <class F>
double integrate_checked(const char* who, int power, F&& f) {
  static const Grid coarse = make_grid(16), fine = make_grid(24);
  const double a = integrate(coarse, power, f);
  const double b = integrate(fine, power, f);
  const double err = std::abs(a - b);
  if (!(err <= 1e-9 * std::abs(b) + 1e-300) || !std::isfinite(b))
    throw NumericsError(std::string(who) + ": quadrature did not settle", err);
  return b;
}

double checked_dilog(double x) {
  if (!(std::abs(x) <= 1.0)) throw NumericsError("pfa: dilog argument outside [-1, 1]");
  return dilog(x);
}

}  // namespace

double lifshitz_plane_plane(double d, const Plasma& omega_1, const Plasma& omega_2) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("lifshitz_plane_plane: d must be > 0");
  if (omega_1.is_transparent() || omega_2.is_transparent()) return 0.0;
  // Work in units of d: q = t, kappa = t cos(phi), k_perp = t sin(phi).
  const PlaneSheet s1{omega_1.scaled(d), 1.0}, s2{omega_2.scaled(d), 1.0};
  auto f = [&](double t, double c, double tau) {
    const double kappa = t * c, k = t * tau, e = std::exp(-2.0 * t);
    const double te = plane_r(Polarization::TE, kappa, k, s1) * plane_r(Polarization::TE, kappa, k, s2);
    const double tm = plane_r(Polarization::TM, kappa, k, s1) * plane_r(Polarization::TM, kappa, k, s2);
    return std::log1p(-te * e) + std::log1p(-tm * e);
  };
  return integrate_checked("lifshitz_plane_plane", 2, f) / (4.0 * kPi * kPi * d * d * d);
}

double pfa_energy(const PfaParams& p) {
  if (!(p.gap_d > 0.0) || !(p.radius_R > 0.0) || !std::isfinite(p.gap_d) || !std::isfinite(p.radius_R))
    throw DomainError("pfa_energy: radius and gap must be > 0");
  if (p.varpi_1.is_transparent() || p.varpi_2.is_transparent()) return 0.0;
  const PlaneSheet s1{p.varpi_1, 1.0}, s2{p.varpi_2, 1.0};
  auto f = [&](double t, double c, double tau) {
    const double kappa = t * c, k = t * tau, e = std::exp(-2.0 * t);
    const double te = plane_r(Polarization::TE, kappa, k, s1) * plane_r(Polarization::TE, kappa, k, s2);
    const double tm = plane_r(Polarization::TM, kappa, k, s1) * plane_r(Polarization::TM, kappa, k, s2);
    return checked_dilog(te * e) + checked_dilog(tm * e);
  };
  const double integral = integrate_checked("pfa_energy", 1, f);
  return -p.radius_R / (4.0 * kPi * p.gap_d * p.gap_d) * integral;
}

double pfa_energy_perfect(double radius_R, double gap_d) {
  return -std::pow(kPi, 3) * radius_R / (720.0 * gap_d * gap_d);
}

}  // namespace sheetcas
