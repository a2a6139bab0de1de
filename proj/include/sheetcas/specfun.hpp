#pragma once

#include <span>
#include <vector>

namespace sheetcas {

/// Modified Bessel functions I, K of half-integer order nu = l + 1/2 and their
/// derivatives, exponentially scaled.
///
/// With s = log_shift the stored fields are
///   i_scaled       = e^{s-z} I_nu(z)     k_scaled       = e^{z-s} K_nu(z)
///   i_deriv_scaled = e^{s-z} I'_nu(z)    k_deriv_scaled = e^{z-s} K'_nu(z)
/// so that every product I*K is free of scale factors. log_shift is zero
/// unless e^{z} K_nu(z) would leave double range (large order, small z).
struct ScaledBessel {
  int order_l = 0;
  double argument = 0.0;
  double i_scaled = 0.0;
  double k_scaled = 0.0;
  double i_deriv_scaled = 0.0;
  double k_deriv_scaled = 0.0;
  double log_shift = 0.0;

  /// ln I_nu(z) and ln K_nu(z), unaffected by the shift.
  double log_i() const;
  double log_k() const;
};

ScaledBessel bessel_half(int order_l, double z);

/// Orders 0..l_max at one argument; O(l_max) work plus one continued fraction.
std::vector<ScaledBessel> bessel_half_sequence(int l_max, double z);

struct LegendreValue {
  double value;
  double derivative;
};

/// Associated Legendre function P_l^m(x) = (x^2-1)^{m/2} d^m P_l/dx^m for
/// x >= 1 (no Condon-Shortley phase) and its x-derivative. At x = 1 the
/// derivative is +inf for m = 1.
LegendreValue legendre_p(int l, int m, double x);

/// ln of the normalized functions sqrt((l-m)!/(l+m)!) P_l^m(x) for
/// l = m..l_max, written to out[l - m]. Requires x > 1 (or x = 1 with m = 0);
/// sinh_theta = sqrt(x^2 - 1) is passed in so the caller can supply it
/// without cancellation. out must hold l_max - m + 1 values.
void legendre_log_normalized(int l_max, int m, double x, double sinh_theta,
                             std::span<double> out);

/// Li_2(x) for |x| <= 1.
double dilog(double x);

}  // namespace sheetcas
