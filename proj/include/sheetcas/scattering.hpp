#pragma once

#include <string>

#include "sheetcas/specfun.hpp"

namespace sheetcas {

/// Plasma-sheet coupling Omega (1/length), or the perfect-conductor limit.
/// The same type carries the dimensionless products Omega*d and Omega*R.
class Plasma {
 public:
  Plasma() = default;
  explicit Plasma(double omega);

  static Plasma perfect();
  static Plasma transparent() { return Plasma(); }

  bool is_perfect() const { return perfect_; }
  bool is_transparent() const { return !perfect_ && value_ == 0.0; }
  /// +inf for the perfect conductor.
  double value() const;

  /// Omega * factor; perfect stays perfect.
  Plasma scaled(double factor) const;

  std::string to_string() const;

  friend bool operator==(const Plasma&, const Plasma&) = default;

 private:
  double value_ = 0.0;
  bool perfect_ = false;
};

struct SphereSheet {
  double radius = 1.0;
  Plasma omega;
};

/// Plane sheet at distance `distance` from the sphere centre.
struct PlaneSheet {
  Plasma omega;
  double distance = 2.0;
};

enum class Polarization { TE, TM };

/// Diagonal sphere T-matrix element at imaginary wavenumber kappa.
/// TE is positive and below the perfect-conductor value I/K for finite Omega
/// (it grows like e^{2 kappa R} at large kappa R); TM carries its overall
/// minus sign and is <= 0.
double sphere_t(Polarization pol, int l, double kappa, const SphereSheet& sphere);

/// Plane reflection coefficient; TE in [0, 1], TM in [-1, 0].
double plane_r(Polarization pol, double kappa, double k_perp, const PlaneSheet& plane);

/// ln|T^TE| and ln|T^TM| of the sphere at order l from its Bessel data and the
/// dimensionless coupling Omega_s * R. -inf for a transparent sphere.
struct SphereLogT {
  double te;
  double tm;
};
SphereLogT sphere_log_t(const ScaledBessel& bessel, const Plasma& omega_r);

}  // namespace sheetcas
