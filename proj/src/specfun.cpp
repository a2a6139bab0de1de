#include "sheetcas/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sheetcas/errors.hpp"

namespace sheetcas {

namespace {

// Above this, e^{z} K_nu(z) is carried with a nonzero log_shift.
constexpr double kMaxLogK = 600.0;

void check_bessel_args(int order_l, double z) {
  if (!std::isfinite(z) || z <= 0.0)
    throw DomainError("bessel_half: argument must be finite and positive, got " +
                      std::to_string(z));
  if (order_l < 0)
    throw DomainError("bessel_half: order must be >= 0");
}

// I_{nu+1}(z)/I_nu(z) for nu = l + 1/2 by modified Lentz.
double bessel_i_ratio(int l, double z) {
  const double nu = l + 0.5;
  const double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int j = 1; j < 1000000; ++j) {
    const double b = 2.0 * (nu + j) / z;
    d = b + d;
    if (d == 0.0) d = tiny;
    d = 1.0 / d;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return f;
  }
  throw NumericsError("bessel_half: continued fraction for I ratio did not converge");
}

}  // namespace

double ScaledBessel::log_i() const { return std::log(i_scaled) + argument - log_shift; }
double ScaledBessel::log_k() const { return std::log(k_scaled) - argument + log_shift; }

std::vector<ScaledBessel> bessel_half_sequence(int l_max, double z) {
  check_bessel_args(l_max, z);

  // rho[l] = K_{l+1/2}/K_{l-1/2}, upward (stable for K); K_{-1/2} = K_{1/2}.
  std::vector<double> rho(l_max + 2);
  rho[0] = 1.0;
  for (int l = 0; l <= l_max; ++l) {
    // K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
    rho[l + 1] = 1.0 / rho[l] + (2.0 * l + 1.0) / z;
  }

  // q[l] = I_{l+3/2}/I_{l+1/2}, seeded at the top and run downward.
  std::vector<double> q(l_max + 1);
  q[l_max] = bessel_i_ratio(l_max, z);
  for (int l = l_max; l > 0; --l) q[l - 1] = 1.0 / ((2.0 * l + 1.0) / z + q[l]);

  std::vector<ScaledBessel> out(l_max + 1);
  double log_k = 0.5 * std::log(std::numbers::pi / (2.0 * z));  // ln e^z K_{1/2}
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) log_k += std::log(rho[l]);
    const double nu = l + 0.5;
    const double shift = log_k > kMaxLogK ? log_k : 0.0;
    ScaledBessel& b = out[l];
    b.order_l = l;
    b.argument = z;
    b.log_shift = shift;
    b.k_scaled = std::exp(log_k - shift);
    // Wronskian I_nu K_{nu+1} + I_{nu+1} K_nu = 1/z fixes I from K and q.
    b.i_scaled = 1.0 / (z * b.k_scaled * (rho[l + 1] + q[l]));
    b.i_deriv_scaled = b.i_scaled * (q[l] + nu / z);
    b.k_deriv_scaled = -b.k_scaled * (1.0 / rho[l] + nu / z);
  }
  return out;
}

ScaledBessel bessel_half(int order_l, double z) {
  check_bessel_args(order_l, z);
  return bessel_half_sequence(order_l, z).back();
}

LegendreValue legendre_p(int l, int m, double x) {
  if (l < 0 || m < 0) throw DomainError("legendre_p: l and m must be >= 0");
  if (m > l) throw DomainError("legendre_p: m > l");
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("legendre_p: x must be >= 1");

  // d^k P_l / dx^k for k = m and k = m + 1 by the three-term recurrence in l.
  auto derivative_of_p = [l, x](int k) {
    if (k > l) return 0.0;
    double prev = 0.0, cur = 1.0;
    for (int j = 1; j <= k; ++j) cur *= 2.0 * j - 1.0;  // (2k-1)!!
    for (int j = k + 1; j <= l; ++j) {
      const double next = ((2.0 * j - 1.0) * x * cur - (j + k - 1.0) * prev) / (j - k);
      prev = cur;
      cur = next;
    }
    return cur;
  };

  const double dm = derivative_of_p(m);
  const double dm1 = derivative_of_p(m + 1);
  const double w = (x - 1.0) * (x + 1.0);

  LegendreValue r{};
  if (m == 0) {
    r.value = dm;
    r.derivative = dm1;
    return r;
  }
  r.value = std::pow(w, 0.5 * m) * dm;
  if (w == 0.0) {
    // Only the (x^2-1)^{m/2-1} term can survive at x = 1.
    if (m == 1)
      r.derivative = dm != 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    else
      r.derivative = m == 2 ? 2.0 * dm : 0.0;
    return r;
  }
  // d/dx [(x^2-1)^{m/2} D^m P_l] = m x (x^2-1)^{m/2-1} D^m P_l + (x^2-1)^{m/2} D^{m+1} P_l
  r.derivative = m * x * std::pow(w, 0.5 * m - 1.0) * dm + std::pow(w, 0.5 * m) * dm1;
  return r;
}

void legendre_log_normalized(int l_max, int m, double x, double sinh_theta,
                             std::span<double> out) {
  if (m < 0 || l_max < m) throw DomainError("legendre_log_normalized: need 0 <= m <= l_max");
  if (!(x >= 1.0)) throw DomainError("legendre_log_normalized: x must be >= 1");
  if (m > 0 && !(sinh_theta > 0.0))
    throw DomainError("legendre_log_normalized: x = 1 only allowed for m = 0");
  if (out.size() < static_cast<std::size_t>(l_max - m + 1))
    throw DomainError("legendre_log_normalized: output span too small");

  // sqrt((2m-1)!!/(2m)!!) sinh^m
  double offset = 0.0;
  for (int k = 1; k <= m; ++k) offset += 0.5 * std::log((2.0 * k - 1.0) / (2.0 * k));
  if (m > 0) offset += m * std::log(sinh_theta);

  constexpr double kBig = 1e200;
  const double log_big = std::log(kBig);
  double prev = 0.0, cur = 1.0;
  out[0] = offset;
  for (int l = m + 1; l <= l_max; ++l) {
    const double lm = l - m, lp = l + m;
    const double a = (2.0 * l - 1.0) / std::sqrt(lm * lp);
    const double b = std::sqrt((lp - 1.0) * (lm - 1.0) / (lm * lp));
    const double next = a * x * cur - b * prev;
    prev = cur;
    cur = next;
    if (cur > kBig) {
      cur /= kBig;
      prev /= kBig;
      offset += log_big;
    }
    out[l - m] = std::log(cur) + offset;
  }
}

double dilog(double x) {
  if (!(std::abs(x) <= 1.0)) throw DomainError("dilog: |x| must be <= 1");
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (x == 1.0) return pi2_6;
  if (x == 0.0) return 0.0;

  auto series = [](double y) {
    double term = y, sum = 0.0;
    for (int n = 1; n < 200; ++n) {
      const double add = term / (double(n) * n);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
      term *= y;
    }
    return sum;
  };

  if (x > 0.5) {
    // Euler reflection
    return pi2_6 - std::log(x) * std::log1p(-x) - series(1.0 - x);
  }
  if (x < -0.5) {
    // Landen: y = x/(x-1) lies in [1/3, 1/2)
    const double l = std::log1p(-x);
    return -series(x / (x - 1.0)) - 0.5 * l * l;
  }
  return series(x);
}

}  // namespace sheetcas
