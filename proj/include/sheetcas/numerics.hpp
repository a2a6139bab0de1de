#pragma once

#include <optional>

namespace sheetcas {

/// Truncation orders, quadrature sizes and tolerances for the exact energy.
/// Unset l_max / m_max mean "choose automatically".
struct NumericsSpec {
  std::optional<int> l_max;
  std::optional<int> m_max;
  int kappa_nodes = 24;
  int theta_nodes = 40;
  double rel_tol = 1e-4;
  double abs_tol = 1e-12;
  int threads = 1;

  /// Throws DomainError on non-positive tolerances or node counts below 8.
  void validate() const;
};

/// Hard ceiling on the multipole order.
inline constexpr int kMaxMultipole = 2000;

}  // namespace sheetcas
