#pragma once

#include <vector>

namespace sheetcas {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n-point generalized Gauss-Laguerre rule for the weight u^alpha e^{-u} on
/// [0, inf). Weights are stored as logarithms: for large n the outer weights
/// are far below the smallest double while the integrand there is not.
struct LaguerreRule {
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<double> log_weights;
};

/// Rules are computed once per (n, alpha) and cached; safe to call from
/// several threads.
const LaguerreRule& gauss_laguerre(int n, double alpha = 0.0);

}  // namespace sheetcas

namespace sheetcas {

/// Gauss-Legendre panels on [a, b] refined geometrically towards `toward`
/// (either a or b): panel edges at distances h/2, h/4, ..., h/2^levels from it.
GaussRule graded_rule(double a, double b, double toward, int levels, int panel_nodes);

/// Rule for int_0^inf g(t) dt where g decays roughly like e^{-t/lambda}:
/// graded panels on [0, lambda] and a Gauss-Laguerre tail on [lambda, inf).
GaussRule decaying_half_line_rule(double lambda, int levels, int panel_nodes, int tail_nodes);

}  // namespace sheetcas
