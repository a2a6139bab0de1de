#include "sheetcas/energy.hpp"

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include "sheetcas/errors.hpp"
#include "sheetcas/quadrature.hpp"

namespace sheetcas {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Cholesky of I - M carrying c_j = 1 - L_jj^2, so that ln L_jj^2 = log1p(-c_j)
// keeps full relative accuracy when M is small.
std::vector<double> cholesky_log_pivots(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  RowMatrix l = RowMatrix::Zero(n, n);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double c = m(j, j) + l.row(j).head(j).squaredNorm();
    if (!(c < 1.0) || !std::isfinite(c))
      throw NumericsError("logdet: I - M is not positive definite at row " + std::to_string(j) +
                          " (spectral radius >= 1)");
    const double ljj = std::sqrt(1.0 - c);
    l(j, j) = ljj;
    out[j] = std::log1p(-c);
    for (int i = j + 1; i < n; ++i)
      l(i, j) = (-m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
  }
  return out;
}

void check_logdet(double v) {
  if (!std::isfinite(v)) throw NumericsError("logdet: non-finite result");
  if (v > 1e-12)
    throw NumericsError("logdet: positive ln det(I - M) = " + std::to_string(v) +
                        " (spectral anomaly)");
}

}  // namespace

std::vector<double> logdet_prefix(const RoundTripBlock& block) {
  if (!block.symmetric) throw DomainError("logdet_prefix: block must be symmetric");
  const int n = block.dimension();
  const auto piv = cholesky_log_pivots(block.matrix);
  std::vector<double> out(n / 2);
  double acc = 0.0;
  for (int k = 0; k < n / 2; ++k) {
    acc += piv[2 * k] + piv[2 * k + 1];
    out[k] = acc;
  }
  if (!out.empty()) check_logdet(out.back());
  return out;
}

double logdet_one_minus(const RoundTripBlock& block) {
  const int n = block.dimension();
  if (n == 0) return 0.0;
  double v = 0.0;
  if (block.symmetric) {
    for (double p : cholesky_log_pivots(block.matrix)) v += p;
  } else {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - block.matrix;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const auto& u = lu.matrixLU();
    double sign = lu.permutationP().determinant();
    for (int i = 0; i < n; ++i) {
      const double d = u(i, i);
      if (!(d != 0.0) || !std::isfinite(d)) throw NumericsError("logdet: singular I - M");
      if (d < 0.0) sign = -sign;
      v += std::log(std::abs(d));
    }
    if (sign < 0.0) throw NumericsError("logdet: det(I - M) < 0 (spectral anomaly)");
  }
  check_logdet(v);
  return v;
}

namespace {

constexpr int kMaxKappaNodes = 1536;

// Per-kappa sum over m of ln det(I - M_m), also at two shorter l truncations.
struct KappaSample {
  double full = 0.0;
  double short1 = 0.0;  // l_max - step
  double short2 = 0.0;  // l_max - 2 step
  double m_tail = 0.0;
  int m_used = 0;
};

struct Problem {
  SphereSheet sphere;  // radius 1
  PlaneSheet plane;    // distance L/R
  NumericsSpec numerics;
  double gap = 0.0;    // d/R
};

int l_step(int l_max) { return std::max(2, l_max / 8); }

KappaSample sample_kappa(const Problem& pb, double kappa, int l_max) {
  const int step = l_step(l_max);
  const int l1 = l_max - step, l2 = l_max - 2 * step;
  const double quarter = 0.25 * pb.numerics.rel_tol;
  RoundTripAssembler assembler(kappa, pb.sphere, pb.plane, pb.numerics, l_max);
  KappaSample out;
  const int m_top = pb.numerics.m_max ? std::min(*pb.numerics.m_max, l_max) : l_max;
  double prev = 0.0;
  for (int m = 0; m <= m_top; ++m) {
    const RoundTripBlock blk = assembler.block(m);
    std::vector<double> pre;
    try {
      pre = logdet_prefix(blk);
    } catch (const NumericsError& e) {
      throw NumericsError(std::string(e.what()) + " [kappa R = " + std::to_string(kappa) +
                          ", m = " + std::to_string(m) + ", l_max = " + std::to_string(l_max) + "]");
    }
    const double w = m == 0 ? 1.0 : 2.0;
    const double c = w * pre.back();
    out.full += c;
    if (l1 >= blk.l_min) out.short1 += w * pre[l1 - blk.l_min];
    if (l2 >= blk.l_min) out.short2 += w * pre[l2 - blk.l_min];
    out.m_used = m;
    if (!pb.numerics.m_max && m >= 2) {
      const double r = prev != 0.0 ? std::abs(c / prev) : 0.0;
      const double tail = r < 0.95 ? std::abs(c) * r / (1.0 - r) : 20.0 * std::abs(c);
      const double bound = quarter * std::abs(out.full);
      if ((std::abs(c) <= bound && tail <= bound) || out.full == 0.0) {
        out.m_tail = tail;
        break;
      }
    }
    prev = c;
  }
  return out;
}

struct Pass {
  double energy = 0.0, short1 = 0.0, short2 = 0.0, m_tail = 0.0;
  int m_used = 0;
};

Pass run_pass(const Problem& pb, int l_max, int nodes) {
  const auto& rule = gauss_laguerre(nodes);
  std::vector<KappaSample> samples(nodes);
  std::vector<std::exception_ptr> errors(nodes);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < nodes; k = next++) {
      try {
        samples[k] = sample_kappa(pb, rule.nodes[k] / (2.0 * pb.gap), l_max);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int nthreads = std::min(pb.numerics.threads, nodes);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // kappa = x/(2d): (1/2pi) int dkappa f = (1/(4 pi d)) sum w_k e^{x_k} f(kappa_k)
  Pass p;
  const double front = 1.0 / (4.0 * std::numbers::pi * pb.gap);
  for (int k = 0; k < nodes; ++k) {
    const double w = front * std::exp(rule.log_weights[k] + rule.nodes[k]);
    p.energy += w * samples[k].full;
    p.short1 += w * samples[k].short1;
    p.short2 += w * samples[k].short2;
    p.m_tail += w * samples[k].m_tail;
    p.m_used = std::max(p.m_used, samples[k].m_used);
  }
  return p;
}

// Truncation error of the l_max result from the two shorter truncations,
// assuming geometric convergence when the differences say so.
double l_error(const Pass& p) {
  const double d1 = p.energy - p.short1, d2 = p.short1 - p.short2;
  if (d2 != 0.0) {
    const double r = d1 / d2;
    if (r > 0.0 && r < 0.9) return std::abs(d1) * r / (1.0 - r);
  }
  return std::abs(d1);
}

}  // namespace

EnergyResult casimir_energy(const SphereSheet& sphere, const PlaneSheet& plane,
                            const NumericsSpec& numerics) {
  numerics.validate();
  const double radius = sphere.radius, distance = plane.distance;
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("casimir_energy: R must be > 0");
  if (!(distance > radius) || !std::isfinite(distance))
    throw DomainError("casimir_energy: need L > R");

  EnergyResult res;
  if (sphere.omega.is_transparent() || plane.omega.is_transparent()) return res;

  Problem pb;
  pb.sphere = {1.0, sphere.omega.scaled(radius)};
  pb.plane = {plane.omega.scaled(radius), distance / radius};
  pb.numerics = numerics;
  pb.gap = distance / radius - 1.0;
  const double tol_scale = 0.25 * numerics.rel_tol;
  const double abs_quarter = 0.25 * numerics.abs_tol * radius;

  int l_max = numerics.l_max.value_or(
      std::min(kMaxMultipole, static_cast<int>(std::ceil(6.0 / pb.gap)) + 10));
  int nodes = numerics.kappa_nodes;
  Pass pass = run_pass(pb, l_max, nodes);
  while (!numerics.l_max && l_error(pass) > tol_scale * std::abs(pass.energy) + abs_quarter) {
    if (l_max >= kMaxMultipole)
      throw NumericsError("casimir_energy: l truncation not converged at l_max = " +
                              std::to_string(l_max),
                          l_error(pass) / radius);
    l_max = std::min(kMaxMultipole, static_cast<int>(std::ceil(1.5 * l_max)));
    pass = run_pass(pb, l_max, nodes);
  }

  double kappa_err = 0.0;
  for (;;) {
    if (2 * nodes > kMaxKappaNodes)
      throw NumericsError("casimir_energy: kappa quadrature not converged", kappa_err / radius);
    const Pass finer = run_pass(pb, l_max, 2 * nodes);
    kappa_err = std::abs(finer.energy - pass.energy);
    pass = finer;
    nodes *= 2;
    if (kappa_err <= tol_scale * std::abs(pass.energy) + abs_quarter) break;
  }

  res.energy = pass.energy / radius;
  res.energy_dimensionless = pass.energy * pb.gap * pb.gap;
  res.error_estimate = (l_error(pass) + kappa_err + pass.m_tail) / radius;
  res.l_max_used = l_max;
  res.m_max_used = pass.m_used;
  res.kappa_nodes_used = nodes;
  return res;
}

}  // namespace sheetcas
