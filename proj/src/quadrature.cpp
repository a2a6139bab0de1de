#include "sheetcas/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "sheetcas/errors.hpp"

namespace sheetcas {

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

namespace {

// L_{n-1}, L_n, L_{n+1} at x, sharing one log scale factor.
struct LaguerreTriple {
  double prev, cur, next, log_scale;
};

LaguerreTriple laguerre_eval(int n, double alpha, double x) {
  double p0 = 1.0, p1 = 1.0 + alpha - x, log_scale = 0.0;
  if (n == 0) return {0.0, p0, p1, 0.0};
  for (int j = 2; j <= n + 1; ++j) {
    const double p2 = ((2.0 * j - 1.0 + alpha - x) * p1 - (j - 1.0 + alpha) * p0) / j;
    if (j == n + 1) return {p0, p1, p2, log_scale};
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e100) {
      p0 *= 1e-100;
      p1 *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    }
  }
  return {p0, p1, 0.0, log_scale};  // n == 1
}

LaguerreRule build_laguerre(int n, double alpha) {
  LaguerreRule rule;
  rule.alpha = alpha;
  rule.nodes.resize(n);
  rule.log_weights.resize(n);

  // Golub-Welsch eigenvalues as starting points, then Newton on L_n.
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) diag(i) = 2.0 * i + 1.0 + alpha;
  for (int i = 1; i < n; ++i) sub(i - 1) = std::sqrt(i * (i + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericsError("gauss_laguerre: eigen solve failed");

  const double log_norm = std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      const auto t = laguerre_eval(n, alpha, x);
      const double deriv = (n * t.cur - (n + alpha) * t.prev) / x;
      const double dx = t.cur / deriv;
      x -= dx;
      if (std::abs(dx) < 4e-16 * x) break;
    }
    const auto t = laguerre_eval(n, alpha, x);
    // w = Gamma(n+alpha+1) x / (n! (n+1)^2 L_{n+1}(x)^2)
    rule.nodes[i] = x;
    rule.log_weights[i] = log_norm + std::log(x) - 2.0 * std::log(n + 1.0) -
                          2.0 * (std::log(std::abs(t.next)) + t.log_scale);
  }
  return rule;
}

}  // namespace

const LaguerreRule& gauss_laguerre(int n, double alpha) {
  if (n < 1) throw DomainError("gauss_laguerre: n must be >= 1");
  if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: alpha must be > -1");
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<LaguerreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, alpha}];
  if (!slot) slot = std::make_unique<LaguerreRule>(build_laguerre(n, alpha));
  return *slot;
}

}  // namespace sheetcas

namespace sheetcas {

GaussRule graded_rule(double a, double b, double toward, int levels, int panel_nodes) {
  if (!(b > a)) throw DomainError("graded_rule: need b > a");
  if (toward != a && toward != b) throw DomainError("graded_rule: must refine towards an end");
  const double h = b - a;
  const double dir = toward == a ? 1.0 : -1.0;
  std::vector<double> edges{0.0};
  for (int k = levels; k >= 1; --k) edges.push_back(h * std::ldexp(1.0, -k));
  edges.push_back(h);
  GaussRule out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const auto panel = gauss_legendre(panel_nodes, edges[i], edges[i + 1]);
    for (int j = 0; j < panel_nodes; ++j) {
      out.nodes.push_back(toward + dir * panel.nodes[j]);
      out.weights.push_back(panel.weights[j]);
    }
  }
  return out;
}

GaussRule decaying_half_line_rule(double lambda, int levels, int panel_nodes, int tail_nodes) {
  if (!(lambda > 0.0)) throw DomainError("decaying_half_line_rule: lambda must be > 0");
  GaussRule out = graded_rule(0.0, lambda, 0.0, levels, panel_nodes);
  const auto& lag = gauss_laguerre(tail_nodes);
  for (int k = 0; k < tail_nodes; ++k) {
    const double y = lag.nodes[k];
    out.nodes.push_back(lambda * (1.0 + y));
    out.weights.push_back(lambda * std::exp(lag.log_weights[k] + y));
  }
  return out;
}

}  // namespace sheetcas
