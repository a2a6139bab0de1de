#pragma once

#include <vector>

#include "sheetcas/numerics.hpp"
#include "sheetcas/roundtrip.hpp"
#include "sheetcas/scattering.hpp"

namespace sheetcas {

/// ln det(I - M) for one block. Throws NumericsError when I - M is not
/// positive definite or the result is positive (spectral radius >= 1, which
/// points at a truncation or scattering problem).
double logdet_one_minus(const RoundTripBlock& block);

/// ln det(I - M) of every leading l-truncation of a symmetric block:
/// entry k belongs to l_max' = l_min + k. The last entry equals
/// logdet_one_minus(block).
std::vector<double> logdet_prefix(const RoundTripBlock& block);

/// Exact sphere-plane energy in units of hbar*c (so 1/length).
struct EnergyResult {
  double energy = 0.0;
  /// E d^2 / (hbar c R)
  double energy_dimensionless = 0.0;
  double error_estimate = 0.0;
  int l_max_used = 0;
  int m_max_used = 0;
  int kappa_nodes_used = 0;
};

/// (1/2pi) int_0^inf dkappa sum_m ln det(I - M_m(kappa)) with automatic
/// truncation in l, m and the kappa quadrature unless fixed in `numerics`.
/// Requires L > R > 0.
EnergyResult casimir_energy(const SphereSheet& sphere, const PlaneSheet& plane,
                            const NumericsSpec& numerics = {});

}  // namespace sheetcas
