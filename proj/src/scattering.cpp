#include "sheetcas/scattering.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sheetcas/errors.hpp"

namespace sheetcas {

Plasma::Plasma(double omega) {
  if (std::isnan(omega) || omega < 0.0) throw DomainError("plasma parameter must be >= 0");
  if (std::isinf(omega)) {
    perfect_ = true;
  } else {
    value_ = omega;
  }
}

Plasma Plasma::perfect() {
  Plasma p;
  p.perfect_ = true;
  return p;
}

double Plasma::value() const {
  return perfect_ ? std::numeric_limits<double>::infinity() : value_;
}

Plasma Plasma::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("Plasma::scaled: factor must be positive");
  return perfect_ ? perfect() : Plasma(value_ * factor);
}

std::string Plasma::to_string() const {
  if (perfect_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

SphereLogT sphere_log_t(const ScaledBessel& b, const Plasma& omega_r) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (omega_r.is_transparent()) return {kNegInf, kNegInf};

  const double z = b.argument;
  const double scale = 2.0 * (z - b.log_shift);  // I^2 = i^2 e^{2(z - shift)}
  // (1/2) I + z I' and (1/2) K + z K' on the scaled values; the second is < 0.
  const double xi = 0.5 * b.i_scaled + z * b.i_deriv_scaled;
  const double xk = 0.5 * b.k_scaled + z * b.k_deriv_scaled;

  SphereLogT out{};
  if (omega_r.is_perfect()) {
    out.te = std::log(b.i_scaled) - std::log(b.k_scaled) + scale;
    out.tm = std::log(xi) - std::log(-xk) + scale;
    return out;
  }
  const double w = omega_r.value();
  out.te = std::log(2.0 * w) + 2.0 * std::log(b.i_scaled) + scale -
           std::log1p(2.0 * w * b.i_scaled * b.k_scaled);
  const double denom = z * z - 2.0 * w * xi * xk;
  if (!(std::abs(denom) > 1e-300 * (z * z + std::abs(2.0 * w * xi * xk))))
    throw NumericsError("sphere_t: TM denominator vanished");
  out.tm = std::log(2.0 * w) + 2.0 * std::log(xi) + scale - std::log(denom);
  return out;
}

double sphere_t(Polarization pol, int l, double kappa, const SphereSheet& sphere) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("sphere_t: kappa must be > 0");
  if (l < 1) throw DomainError("sphere_t: l must be >= 1");
  if (!(sphere.radius > 0.0)) throw DomainError("sphere_t: radius must be > 0");
  if (sphere.omega.is_transparent()) return 0.0;
  const auto b = bessel_half(l, kappa * sphere.radius);
  const auto t = sphere_log_t(b, sphere.omega.scaled(sphere.radius));
  return pol == Polarization::TE ? std::exp(t.te) : -std::exp(t.tm);
}

double plane_r(Polarization pol, double kappa, double k_perp, const PlaneSheet& plane) {
  if (!(kappa >= 0.0) || !(k_perp >= 0.0)) throw DomainError("plane_r: kappa, k_perp must be >= 0");
  if (kappa == 0.0 && k_perp == 0.0) throw DomainError("plane_r: kappa = k_perp = 0 has no direction");
  if (plane.omega.is_perfect()) return pol == Polarization::TE ? 1.0 : -1.0;
  const double omega = plane.omega.value();
  if (omega == 0.0) return 0.0;
  const double q = std::hypot(kappa, k_perp);
  if (pol == Polarization::TE) return omega / (omega + q);
  return -omega * q / (omega * q + kappa * kappa);
}

}  // namespace sheetcas
