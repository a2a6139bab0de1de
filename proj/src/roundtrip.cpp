#include "sheetcas/roundtrip.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sheetcas/errors.hpp"
#include "sheetcas/quadrature.hpp"
#include "sheetcas/specfun.hpp"

namespace sheetcas {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxThetaNodes = 4096;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// ln sqrt((2l+1)/(l(l+1)))
double log_norm(int l) { return 0.5 * std::log((2.0 * l + 1.0) / (double(l) * (l + 1.0))); }

// Quadrature data in the variable u with cosh(theta) = 1 + u/(2 kappa L):
// the theta integral becomes e^{-2 kappa L}/(2 kappa L) * int du e^{-u} (...).
struct ThetaNodes {
  std::vector<double> x, log_x, log_s;
  std::vector<double> log_w;                // includes pi/2 and e^{-2 kappa L}/(2 kappa L)
  std::vector<double> log_rte, log_rtm;     // ln of diag(r_TE, -r_TM) of the plane
};

ThetaNodes make_theta_nodes(int count, double kappa, const PlaneSheet& plane) {
  const auto& rule = gauss_laguerre(count);
  const double a = 2.0 * kappa * plane.distance;
  const double log_front = std::log(0.5 * std::numbers::pi) - a - std::log(a);
  ThetaNodes nd;
  nd.x.resize(count);
  nd.log_x.resize(count);
  nd.log_s.resize(count);
  nd.log_w.resize(count);
  nd.log_rte.resize(count);
  nd.log_rtm.resize(count);
  for (int k = 0; k < count; ++k) {
    const double v = rule.nodes[k] / a;  // cosh(theta) - 1
    const double x = 1.0 + v;
    nd.x[k] = x;
    nd.log_x[k] = std::log1p(v);
    nd.log_s[k] = 0.5 * (std::log(v) + std::log(2.0 + v));
    nd.log_w[k] = rule.log_weights[k] + log_front;
    if (plane.omega.is_perfect()) {
      nd.log_rte[k] = nd.log_rtm[k] = 0.0;
    } else {
      // Omega/(Omega + kappa x) and Omega x/(Omega x + kappa)
      const double w = plane.omega.value();
      nd.log_rte[k] = -std::log1p(kappa * x / w);
      nd.log_rtm[k] = -std::log1p(kappa / (w * x));
    }
  }
  return nd;
}

// ln A_l and ln|B_l| at one node for l = l_min..l_max, where
//   A_l = sinh(theta) dP_l^m/dx,  B_l = m P_l^m / sinh(theta),
// both in the normalization sqrt((l-|m|)!/(l+|m|)!) carried by the prefactor.
struct AngularLogs {
  std::vector<double> log_a, log_b;
};

void angular_logs(int m_abs, int l_min, int l_max, double x, double log_x, double log_s,
                  std::vector<double>& p, std::vector<double>& p1, AngularLogs& out) {
  const int n = l_max - l_min + 1;
  out.log_a.assign(n, kNegInf);
  out.log_b.assign(n, kNegInf);
  const double s = std::exp(log_s);
  p.resize(l_max - m_abs + 1);
  legendre_log_normalized(l_max, m_abs, x, s, p);
  if (m_abs + 1 <= l_max) {
    p1.resize(l_max - m_abs);
    legendre_log_normalized(l_max, m_abs + 1, x, s, p1);
  }
  const double log_m = m_abs > 0 ? std::log(double(m_abs)) : kNegInf;
  for (int l = l_min; l <= l_max; ++l) {
    const double lp = p[l - m_abs];
    // sinh P' = m x P^m / sinh + P^{m+1}; both terms are positive for x > 1
    const double t1 = m_abs > 0 ? log_m + log_x - log_s + lp : kNegInf;
    const double t2 = l > m_abs ? p1[l - m_abs - 1] +
                                      0.5 * std::log((l - m_abs) * (l + m_abs + 1.0))
                                : kNegInf;
    out.log_a[l - l_min] = log_add(t1, t2);
    out.log_b[l - l_min] = m_abs > 0 ? log_m + lp - log_s : kNegInf;
  }
}

}  // namespace

void NumericsSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("NumericsSpec: tolerances must be > 0");
  if (kappa_nodes < 8 || theta_nodes < 8) throw DomainError("NumericsSpec: node counts must be >= 8");
  if (l_max && (*l_max < 1 || *l_max > kMaxMultipole))
    throw DomainError("NumericsSpec: l_max out of range [1, " + std::to_string(kMaxMultipole) + "]");
  if (m_max && *m_max < 0) throw DomainError("NumericsSpec: m_max must be >= 0");
  if (threads < 1) throw DomainError("NumericsSpec: threads must be >= 1");
}

double RoundTripBlock::entry(int i, int j) const {
  const double si = log_scale[i], sj = log_scale[j];
  if (si == kNegInf) return 0.0;
  return std::exp(si - sj) * matrix(i, j);
}

struct RoundTripAssembler::NodeData {
  int count = 0;
  ThetaNodes theta;
};

RoundTripAssembler::RoundTripAssembler(double kappa, const SphereSheet& sphere,
                                       const PlaneSheet& plane, const NumericsSpec& numerics,
                                       int l_max)
    : kappa_(kappa), sphere_(sphere), plane_(plane), numerics_(numerics), l_max_(l_max) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("round trip: kappa must be > 0");
  if (!(sphere.radius > 0.0)) throw DomainError("round trip: radius must be > 0");
  if (!(plane.distance > 0.0)) throw DomainError("round trip: distance must be > 0");
  if (l_max < 1 || l_max > kMaxMultipole) throw DomainError("round trip: l_max out of range");
  zero_ = sphere.omega.is_transparent() || plane.omega.is_transparent();
  if (zero_) return;
  const auto bessel = bessel_half_sequence(l_max, kappa * sphere.radius);
  const Plasma omega_r = sphere.omega.scaled(sphere.radius);
  log_t_.resize(l_max + 1);
  for (int l = 1; l <= l_max; ++l) log_t_[l] = sphere_log_t(bessel[l], omega_r);
}

RoundTripAssembler::NodeData RoundTripAssembler::nodes(int count) const {
  return {count, make_theta_nodes(count, kappa_, plane_)};
}

// Factor G with D^{-1} M D = G G^T. Columns are (q, node) with q the
// polarization of the plane reflection, laid out q-major: column q*N + k.
Eigen::MatrixXd RoundTripAssembler::gram_factor(int m, const NodeData& nd) const {
  const int m_abs = std::abs(m);
  const int l_min = std::max(1, m_abs);
  const int n = l_max_ - l_min + 1;
  const int count = nd.count;
  const double sign_b = m < 0 ? -1.0 : 1.0;
  Eigen::MatrixXd g(2 * n, 2 * count);

  std::vector<double> row_te(n), row_tm(n);
  for (int l = l_min; l <= l_max_; ++l) {
    row_te[l - l_min] = 0.5 * log_t_[l].te + log_norm(l);
    row_tm[l - l_min] = 0.5 * log_t_[l].tm + log_norm(l);
  }

  std::vector<double> p, p1;
  AngularLogs ang;
  const auto& th = nd.theta;
  for (int k = 0; k < count; ++k) {
    angular_logs(m_abs, l_min, l_max_, th.x[k], th.log_x[k], th.log_s[k], p, p1, ang);
    const double col_te = 0.5 * (th.log_w[k] + th.log_rte[k]);
    const double col_tm = 0.5 * (th.log_w[k] + th.log_rtm[k]);
    for (int i = 0; i < n; ++i) {
      const double la = ang.log_a[i], lb = ang.log_b[i];
      g(2 * i, k) = std::exp(row_te[i] + col_te + la);
      g(2 * i + 1, count + k) = std::exp(row_tm[i] + col_tm + la);
      g(2 * i, count + k) = sign_b * std::exp(row_te[i] + col_tm + lb);
      g(2 * i + 1, k) = sign_b * std::exp(row_tm[i] + col_te + lb);
    }
  }
  return g;
}

RoundTripBlock RoundTripAssembler::block(int m) const {
  const int m_abs = std::abs(m);
  if (m_abs > l_max_) throw DomainError("round trip: |m| exceeds l_max");
  RoundTripBlock b;
  b.m = m;
  b.kappa = kappa_;
  b.l_min = std::max(1, m_abs);
  b.l_max = l_max_;
  const int n = l_max_ - b.l_min + 1;
  const int dim = 2 * n;
  b.matrix = Eigen::MatrixXd::Zero(dim, dim);
  b.log_scale.assign(dim, 0.0);
  if (zero_) return b;

  for (int l = b.l_min; l <= l_max_; ++l) {
    b.log_scale[2 * (l - b.l_min)] = 0.5 * log_t_[l].te;
    b.log_scale[2 * (l - b.l_min) + 1] = 0.5 * log_t_[l].tm;
  }

  // The integrand is e^{-u} times a polynomial of degree <= 2 l_max in u
  // times the plane coefficients, so l_max + 1 nodes are exact for a
  // perfectly reflecting plane.
  int count = std::max(numerics_.theta_nodes, l_max_ + 1);
  Eigen::MatrixXd g = gram_factor(m, nodes(count));
  if (!plane_.omega.is_perfect()) {
    const double tol = 0.1 * numerics_.rel_tol;
    for (;;) {
      if (2 * count > kMaxThetaNodes)
        throw NumericsError("round trip: theta quadrature did not converge for m = " +
                                std::to_string(m),
                            b.theta_error);
      Eigen::MatrixXd g2 = gram_factor(m, nodes(2 * count));
      const double tr = g.squaredNorm(), tr2 = g2.squaredNorm();
      b.theta_error = tr2 > 0.0 ? std::abs(tr - tr2) / tr2 : 0.0;
      if (b.theta_error <= tol) break;
      count *= 2;
      g = std::move(g2);
    }
  }
  b.theta_nodes_used = count;

  if (m == 0) {
    // TE and TM decouple: two half-size products.
    Eigen::MatrixXd gte(n, count), gtm(n, count);
    for (int i = 0; i < n; ++i) {
      gte.row(i) = g.row(2 * i).head(count);
      gtm.row(i) = g.row(2 * i + 1).tail(count);
    }
    const Eigen::MatrixXd mte = gte * gte.transpose();
    const Eigen::MatrixXd mtm = gtm * gtm.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        b.matrix(2 * i, 2 * j) = mte(i, j);
        b.matrix(2 * i + 1, 2 * j + 1) = mtm(i, j);
      }
  } else {
    b.matrix.selfadjointView<Eigen::Lower>().rankUpdate(g);
    b.matrix.triangularView<Eigen::StrictlyUpper>() = b.matrix.transpose();
  }
  return b;
}

RoundTripBlock assemble_block(int m, double kappa, const SphereSheet& sphere,
                              const PlaneSheet& plane, const NumericsSpec& numerics) {
  numerics.validate();
  if (!numerics.l_max) throw DomainError("assemble_block: l_max must be set");
  if (*numerics.l_max < std::max(1, std::abs(m)))
    throw DomainError("assemble_block: l_max < max(1, |m|)");
  RoundTripAssembler assembler(kappa, sphere, plane, numerics, *numerics.l_max);
  return assembler.block(m);
}

namespace {

// sum_i sign_i e^{t_i} returned as (ln|sum|, sign)
std::pair<double, double> signed_log_sum(const std::vector<double>& logs,
                                         const std::vector<double>& signs) {
  double hi = kNegInf;
  for (double t : logs) hi = std::max(hi, t);
  if (hi == kNegInf) return {kNegInf, 0.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) sum += signs[i] * std::exp(logs[i] - hi);
  if (sum == 0.0) return {kNegInf, 0.0};
  return {hi + std::log(std::abs(sum)), sum > 0.0 ? 1.0 : -1.0};
}

}  // namespace

Eigen::Matrix2d m_element(int l, int l_prime, int m, double kappa, const SphereSheet& sphere,
                          const PlaneSheet& plane, const NumericsSpec& numerics) {
  numerics.validate();
  const int m_abs = std::abs(m);
  const int l_min = std::max(1, m_abs);
  if (l < l_min || l_prime < l_min) throw DomainError("m_element: need l, l' >= max(1, |m|)");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("m_element: kappa must be > 0");
  if (!(plane.distance > 0.0) || !(sphere.radius > 0.0))
    throw DomainError("m_element: radius and distance must be > 0");
  if (std::max(l, l_prime) > kMaxMultipole) throw DomainError("m_element: l too large");
  if (sphere.omega.is_transparent() || plane.omega.is_transparent()) return Eigen::Matrix2d::Zero();

  const int l_top = std::max(l, l_prime);
  const auto bessel = bessel_half_sequence(l_top, kappa * sphere.radius);
  const Plasma omega_r = sphere.omega.scaled(sphere.radius);
  const SphereLogT t_row = sphere_log_t(bessel[l], omega_r);
  const double sign_b = m < 0 ? -1.0 : 1.0;

  auto evaluate = [&](int count) {
    const ThetaNodes th = make_theta_nodes(count, kappa, plane);
    std::array<std::vector<double>, 4> logs, signs;
    std::vector<double> p, p1;
    AngularLogs ang;
    for (int k = 0; k < count; ++k) {
      angular_logs(m_abs, l_min, l_top, th.x[k], th.log_x[k], th.log_s[k], p, p1, ang);
      const double a1 = ang.log_a[l - l_min], b1 = ang.log_b[l - l_min];
      const double a2 = ang.log_a[l_prime - l_min], b2 = ang.log_b[l_prime - l_min];
      const std::array<double, 2> log_r{th.log_rte[k], th.log_rtm[k]};
      // F'_l = [[A, B], [B, A]]; entry (p, p') = sum_q F'_l[p,q] R_q F'_l'[q,p']
      for (int pr = 0; pr < 2; ++pr)
        for (int pc = 0; pc < 2; ++pc)
          for (int q = 0; q < 2; ++q) {
            const bool diag_row = pr == q, diag_col = q == pc;
            const double f1 = diag_row ? a1 : b1, f2 = diag_col ? a2 : b2;
            const double sgn = (diag_row ? 1.0 : sign_b) * (diag_col ? 1.0 : sign_b);
            logs[2 * pr + pc].push_back(th.log_w[k] + log_r[q] + f1 + f2);
            signs[2 * pr + pc].push_back(sgn);
          }
    }
    Eigen::Matrix2d out;
    for (int pr = 0; pr < 2; ++pr) {
      const double log_t = pr == 0 ? t_row.te : t_row.tm;
      for (int pc = 0; pc < 2; ++pc) {
        const auto [ls, sg] = signed_log_sum(logs[2 * pr + pc], signs[2 * pr + pc]);
        out(pr, pc) = sg * std::exp(log_t + log_norm(l) + log_norm(l_prime) + ls);
      }
    }
    return out;
  };

  int count = std::max(numerics.theta_nodes, l_top + 1);
  Eigen::Matrix2d current = evaluate(count);
  for (;;) {
    if (2 * count > kMaxThetaNodes)
      throw NumericsError("m_element: theta quadrature did not converge for (l, l') = (" +
                          std::to_string(l) + ", " + std::to_string(l_prime) + ")");
    const Eigen::Matrix2d finer = evaluate(2 * count);
    const double err = (finer - current).cwiseAbs().maxCoeff();
    const double scale = finer.cwiseAbs().maxCoeff();
    if (err <= numerics.rel_tol * scale || scale == 0.0) return finer;
    current = finer;
    count *= 2;
  }
}

}  // namespace sheetcas
