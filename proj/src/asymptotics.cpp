#include "sheetcas/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "sheetcas/errors.hpp"
#include "sheetcas/quadrature.hpp"
#include "sheetcas/specfun.hpp"

namespace sheetcas {

namespace {

constexpr double kPi = std::numbers::pi;

// w/(w + x) and 1/(w + x), with w = inf allowed.
double ratio(const Plasma& w, double x) { return w.is_perfect() ? 1.0 : w.value() / (w.value() + x); }
double inverse(const Plasma& w, double x) { return w.is_perfect() ? 0.0 : 1.0 / (w.value() + x); }

void check_point(int s, double t, double tau) {
  if (s < 0) throw DomainError("ntl: s must be >= 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("ntl: t must be > 0");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("ntl: tau must lie in (0, 1)");
}

double script_a(double n, double t, double tau) {
  const double t2 = tau * tau, u = 1.0 - t2;
  return t * t2 / 3.0 * (n * n * n + 2.0 * n) +
         ((t2 - 2.0) * n * n - 3.0 * tau * n + 2.0 * t2 - 1.0) / 3.0 +
         (t2 * t2 + t2 - 12.0) / (12.0 * t * t2) * n + (1.0 + tau) * u / (2.0 * t * t2) -
         u / (3.0 * t) / n;
}

template <class PowerSum>
double script_b_with(int s, double t, double tau, const PolarizationPair& t0,
                     const PolarizationPair& tt, PowerSum&& psum) {
  const double a = t0.te * tt.te, b = t0.tm * tt.tm;
  const double u = 1.0 - tau * tau;
  return u / (2.0 * t * tau * tau) *
         ((t0.te * tt.tm + t0.tm * tt.te) * psum(a, b, s) + 2.0 * a * b * psum(a, b, s - 1));
}

double ipow(double x, int n) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(x));
}

}  // namespace

double power_sum_explicit(double a, double b, int k) {
  if (k < 0) return 0.0;
  double sum = 0.0, ap = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += ap * std::pow(b, k - j);
    ap *= a;
  }
  return sum;
}

double power_sum(double a, double b, int k) {
  if (k < 0) return 0.0;
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("power_sum: arguments must be >= 0");
  if (k <= 32) return power_sum_explicit(a, b, k);
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (hi == 0.0) return 0.0;
  // hi^k * (1 - r^{k+1}) / (1 - r) with r = lo/hi in [0, 1]
  const double delta = (hi - lo) / hi;  // 1 - r
  if (delta == 0.0) return (k + 1.0) * ipow(hi, k);
  return ipow(hi, k) * -std::expm1((k + 1.0) * std::log1p(-delta)) / delta;
}

NtlCoefficients ntl_coefficients(int s, double t, double tau, const Plasma& vs, const Plasma& vp) {
  check_point(s, t, tau);
  const double n = s + 1.0;
  const double t2 = tau * tau, u = 1.0 - t2, tu = t * u;
  NtlCoefficients c;
  c.t0 = {ratio(vs, t), ratio(vs, tu)};
  c.t0_tilde = {ratio(vp, t), ratio(vp, tu)};

  const double ip = inverse(vp, t), ipu = inverse(vp, tu);
  const double is = inverse(vs, t), isu = inverse(vs, tu);
  c.k1 = {-t * tau * ip, tu * ipu};
  c.k2 = {-0.5 * t * ip * (1.0 - 2.0 * t * t2 * ip),
          0.5 * tu * ipu * (1.0 - 2.0 * t2 * c.t0_tilde.tm)};
  c.w1 = {-tau * is, tau * u * isu};
  c.w2 = {-0.5 * is / t * (1.0 - t2 * (1.0 + 2.0 * t * is)),
          0.5 * u / t * isu * (u - 2.0 * t2 * c.t0.tm)};
  c.y2 = {-0.5 * tau * is + (0.25 - 5.0 * t2 / 12.0) / t,
          0.5 * tau * u * isu + (0.25 + 7.0 * t2 / 12.0) / t};

  const double n2 = n * n, n3 = n2 * n;
  c.c_v = -tau / 3.0 * (n3 + 2.0 * n) + u / (6.0 * t * tau) * n2 + n / (2.0 * t) +
          (1.0 - 4.0 * t2) / (12.0 * t * tau);
  c.c_j = -t * tau / 3.0 * (n3 - n) + (n2 - 1.0) / (6.0 * tau);
  c.d_vv = (n3 - 2.0 * n2 + 2.0 * n - 1.0) / (12.0 * t);
  c.d_jj = t / 12.0 * (n3 - 2.0 * n2 - n + 2.0);
  c.d_vj = (n3 - n) / 6.0;
  c.d_v = (2.0 * n2 + 1.0) / (6.0 * t);
  c.d_j = t / 3.0 * (n2 - 1.0);

  c.script_a = script_a(n, t, tau);
  c.script_b = script_b_with(s, t, tau, c.t0, c.t0_tilde, power_sum);
  auto cd = [&](double k1, double k2, double w1, double w2, double y2, double& sc, double& sd) {
    sc = c.c_v * k1 + c.c_j * w1;
    sd = c.d_vv * k1 * k1 + c.d_vj * k1 * w1 + c.d_jj * w1 * w1 + c.d_v * k2 + c.d_j * w2 + n * y2;
  };
  cd(c.k1.te, c.k2.te, c.w1.te, c.w2.te, c.y2.te, c.script_c.te, c.script_d.te);
  cd(c.k1.tm, c.k2.tm, c.w1.tm, c.w2.tm, c.y2.tm, c.script_c.tm, c.script_d.tm);
  return c;
}

double script_b_explicit(int s, double t, double tau, const Plasma& vs, const Plasma& vp) {
  check_point(s, t, tau);
  const double u = 1.0 - tau * tau;
  const PolarizationPair t0{ratio(vs, t), ratio(vs, t * u)}, tt{ratio(vp, t), ratio(vp, t * u)};
  return script_b_with(s, t, tau, t0, tt, power_sum_explicit);
}

double ntl_integrand(int s, double t, double tau, const Plasma& vs, const Plasma& vp) {
  check_point(s, t, tau);
  const double n = s + 1.0;
  const double envelope = std::exp(-2.0 * t * n);
  if (vs.is_transparent() || vp.is_transparent()) return 0.0;
  if (vs.is_perfect() && vp.is_perfect()) {
    const double t2 = tau * tau, u = 1.0 - t2;
    const double b = u * (4.0 * s + 2.0) / (2.0 * t * t2);
    const double y_te = (0.25 - 5.0 * t2 / 12.0) / t, y_tm = (0.25 + 7.0 * t2 / 12.0) / t;
    return envelope * (2.0 * script_a(n, t, tau) + b + n * (y_te + y_tm));
  }
  const NtlCoefficients c = ntl_coefficients(s, t, tau, vs, vp);
  const double pte = ipow(c.t0.te * c.t0_tilde.te, s + 1);
  const double ptm = ipow(c.t0.tm * c.t0_tilde.tm, s + 1);
  return envelope * (pte * (c.script_a + c.script_c.te + c.script_d.te) +
                     ptm * (c.script_a + c.script_c.tm + c.script_d.tm) + c.script_b);
}

namespace {


// phi in [0, pi/2] with tau = sin(phi), refined towards tau = 1.
GaussRule phi_rule(int panel_nodes, int levels) {
  GaussRule g = gauss_legendre(2 * panel_nodes, 0.0, 0.25 * kPi);
  const auto upper = graded_rule(0.25 * kPi, 0.5 * kPi, 0.5 * kPi, levels, panel_nodes);
  g.nodes.insert(g.nodes.end(), upper.nodes.begin(), upper.nodes.end());
  g.weights.insert(g.weights.end(), upper.weights.begin(), upper.weights.end());
  return g;
}

double min_scale(const Plasma& vs, const Plasma& vp) {
  double m = 1e300;
  if (!vs.is_perfect()) m = std::min(m, vs.value());
  if (!vp.is_perfect()) m = std::min(m, vp.value());
  return m;
}

int levels_for(double lambda, double scale) {
  const double ratio = lambda / std::min(lambda, scale);
  return std::clamp(static_cast<int>(std::ceil(std::log2(ratio))) + 4, 4, 40);
}

double integrate_s(int s, const Plasma& vs, const Plasma& vp, const GaussRule& phi,
                   const AsymptoticOptions& opt) {
  const double n = s + 1.0;
  const double lambda = 0.5 / n;
  const auto trule = decaying_half_line_rule(lambda, levels_for(lambda, min_scale(vs, vp)),
                                             opt.panel_nodes, 3 * opt.panel_nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < trule.nodes.size(); ++i) {
    const double t = trule.nodes[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < phi.nodes.size(); ++j) {
      const double tau = std::sin(phi.nodes[j]);
      inner += phi.weights[j] * tau * ntl_integrand(s, t, tau, vs, vp);
    }
    total += trule.weights[i] * t * inner;
  }
  return total;
}

// sum_{n > N} n^{-k}, Euler-Maclaurin at N (N large).
double zeta_tail(int k, double big_n) {
  const double f = std::pow(big_n, -k);
  return big_n * f / (k - 1.0) - 0.5 * f + k * f / (12.0 * big_n) -
         k * (k + 1.0) * (k + 2.0) * f / (720.0 * big_n * big_n * big_n);
}

}  // namespace

double ntl_s_integral(int s, const Plasma& vs, const Plasma& vp, const AsymptoticOptions& opt) {
  if (s < 0) throw DomainError("ntl_s_integral: s must be >= 0");
  if (vs.is_transparent() || vp.is_transparent()) return 0.0;
  return integrate_s(s, vs, vp, phi_rule(opt.panel_nodes, 14), opt);
}

double e0(double radius_R, double gap_d, const Plasma& vs, const Plasma& vp) {
  if (!(radius_R > 0.0) || !(gap_d > 0.0) || !std::isfinite(radius_R) || !std::isfinite(gap_d))
    throw DomainError("e0: radius and gap must be > 0");
  if (vs.is_transparent() || vp.is_transparent()) return 0.0;
  // With 1 - tau^2 = v^2, tau dtau / sqrt(1 - tau^2) = -dv.
  auto integral = [&](int nodes) {
    const auto trule = decaying_half_line_rule(0.5, 32, nodes, 4 * nodes);
    const auto vrule = graded_rule(0.0, 1.0, 0.0, 16, nodes);
    double total = 0.0;
    for (std::size_t i = 0; i < trule.nodes.size(); ++i) {
      const double t = trule.nodes[i], e = std::exp(-2.0 * t);
      const double te = ratio(vs, t) * ratio(vp, t);
      double inner = 0.0;
      for (std::size_t j = 0; j < vrule.nodes.size(); ++j) {
        const double tv = t * vrule.nodes[j] * vrule.nodes[j];
        inner += vrule.weights[j] * (dilog(te * e) + dilog(ratio(vs, tv) * ratio(vp, tv) * e));
      }
      total += trule.weights[i] * t * inner;
    }
    return total;
  };
  const double a = integral(14), b = integral(20);
  if (!(std::abs(a - b) <= 1e-9 * std::abs(b)))
    throw NumericsError("e0: quadrature did not settle", std::abs(a - b));
  return -radius_R / (4.0 * kPi * gap_d * gap_d) * b;
}

SeriesResult e1(double radius_R, double gap_d, const Plasma& vs, const Plasma& vp,
                const AsymptoticOptions& opt) {
  if (!(radius_R > 0.0) || !(gap_d > 0.0) || !std::isfinite(radius_R) || !std::isfinite(gap_d))
    throw DomainError("e1: radius and gap must be > 0");
  if (opt.panel_nodes < 4) throw DomainError("e1: panel_nodes must be >= 4");
  SeriesResult res;
  if (vs.is_transparent() || vp.is_transparent()) return res;

  int s_max = opt.s_max;
  if (s_max <= 0) {
    const double m = min_scale(vs, vp);
    s_max = m >= 1e300 ? 200 : static_cast<int>(std::clamp(std::ceil(30.0 / m), 200.0, 5000.0));
  }
  if (s_max < 8) throw DomainError("e1: s_max must be >= 8");
  const GaussRule phi = phi_rule(opt.panel_nodes, 14);

  std::vector<double> j_s;
  double sum = 0.0;
  bool converged = false;
  for (int s = 0; s <= s_max; ++s) {
    const double js = integrate_s(s, vs, vp, phi, opt);
    if (!std::isfinite(js))
      throw NumericsError("e1: non-finite integral at s = " + std::to_string(s));
    j_s.push_back(js);
    const double term = js / ((s + 1.0) * (s + 1.0));
    sum += term;
    if (s >= 8 && std::abs(term) < opt.rel_tol * std::abs(sum)) {
      converged = true;
      break;
    }
  }
  res.s_terms = static_cast<int>(j_s.size());

  double tail = 0.0, tail_err = 0.0;
  if (!converged) {
    // J_s ~ c0 + c1/n + c2/n^2 with n = s + 1, fitted at n = N/2, 3N/4, N.
    const int big_n = res.s_terms;
    const std::array<int, 3> ns{big_n / 2, (3 * big_n) / 4, big_n};
    Eigen::Matrix3d m;
    Eigen::Vector3d y;
    for (int i = 0; i < 3; ++i) {
      const double x = 1.0 / ns[i];
      m.row(i) << 1.0, x, x * x;
      y(i) = j_s[ns[i] - 1];
    }
    const Eigen::Vector3d c = m.partialPivLu().solve(y);
    const double z2 = zeta_tail(2, big_n), z3 = zeta_tail(3, big_n), z4 = zeta_tail(4, big_n);
    tail = c(0) * z2 + c(1) * z3 + c(2) * z4;
    // two-term fit through the last two points
    const double x1 = 1.0 / ns[1], x2 = 1.0 / ns[2];
    const double c1 = (y(2) - y(1)) / (x2 - x1), c0 = y(2) - c1 * x2;
    tail_err = std::abs(tail - (c0 * z2 + c1 * z3));
  }
  const double front = -1.0 / (4.0 * kPi * gap_d);
  res.value = front * (sum + tail);
  res.error_estimate = std::abs(front) * tail_err;
  return res;
}

double theta(double gap_d, double radius_R, const Plasma& omega_s, const Plasma& omega_p,
             const AsymptoticOptions& opt) {
  if (!(radius_R > 0.0) || !(gap_d > 0.0)) throw DomainError("theta: radius and gap must be > 0");
  const Plasma vs = omega_s.scaled(gap_d), vp = omega_p.scaled(gap_d);
  const double lead = e0(radius_R, gap_d, vs, vp);
  if (lead == 0.0) throw DomainError("theta: leading term vanishes");
  return e1(radius_R, gap_d, vs, vp, opt).value / lead * (radius_R / gap_d);
}

SmallTauSplit ntl_small_tau_split(int s, const Plasma& vs, const Plasma& vp) {
  const AsymptoticOptions opt;
  SmallTauSplit out;
  out.whole = ntl_s_integral(s, vs, vp, opt);
  const double phi_cut = std::asin(1e-3);
  auto piece = [&](const GaussRule& phi) { return integrate_s(s, vs, vp, phi, opt); };
  GaussRule upper = gauss_legendre(2 * opt.panel_nodes, phi_cut, 0.25 * kPi);
  const auto graded = graded_rule(0.25 * kPi, 0.5 * kPi, 0.5 * kPi, 14, opt.panel_nodes);
  upper.nodes.insert(upper.nodes.end(), graded.nodes.begin(), graded.nodes.end());
  upper.weights.insert(upper.weights.end(), graded.weights.begin(), graded.weights.end());
  const double small_a = piece(gauss_legendre(6, 0.0, phi_cut));
  const double small_b = piece(gauss_legendre(12, 0.0, phi_cut));
  out.split = piece(upper) + small_b;
  out.small_piece_change = std::abs(small_b - small_a);
  return out;
}

}  // namespace sheetcas
