#pragma once

#include "sheetcas/scattering.hpp"

namespace sheetcas {

/// Dimensionless couplings varpi_i = Omega_i * d of the two surfaces, and the
/// sphere radius / gap they refer to.
struct PfaParams {
  Plasma varpi_1;
  Plasma varpi_2;
  double radius_R = 1.0;
  double gap_d = 1.0;
};

/// Plane-plane energy per unit area divided by hbar*c (units 1/length^3) for
/// two sheets with couplings omega_1, omega_2 (1/length) at distance d.
double lifshitz_plane_plane(double d, const Plasma& omega_1, const Plasma& omega_2);

/// Proximity-force energy of the sphere-plane pair divided by hbar*c
/// (units 1/length), from the dilogarithm form of the gap integral.
double pfa_energy(const PfaParams& params);

/// -pi^3 R / (720 d^2): the perfect-conductor value of pfa_energy.
double pfa_energy_perfect(double radius_R, double gap_d);

}  // namespace sheetcas
