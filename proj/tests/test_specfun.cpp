#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sheetcas/errors.hpp"
#include "sheetcas/specfun.hpp"

using namespace sheetcas;

namespace {

// Power series of I_{l+1/2} and the finite sum for K_{l+1/2}, long double.
long double series_i(int l, long double z) {
  const long double nu = l + 0.5L;
  long double term = std::pow(z / 2, nu) / std::tgamma(nu + 1), sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= (z * z / 4) / (k * (k + nu));
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return sum;
}

long double closed_k(int l, long double z) {
  long double sum = 0, c = 1;  // (l+k)! / (k! (l-k)!) (2z)^{-k}
  for (int k = 0; k <= l; ++k) {
    if (k > 0) c *= (long double)(l + k) * (l - k + 1) / k / (2 * z);
    sum += c;
  }
  return std::sqrt(std::numbers::pi_v<long double> / (2 * z)) * std::exp(-z) * sum;
}

// d^k/dx^k P_l(x) from the explicit polynomial coefficients.
long double legendre_poly_derivative(int l, int k, long double x) {
  long double sum = 0;
  for (int j = 0; 2 * j <= l; ++j) {
    const int p = l - 2 * j;
    if (p < k) continue;
    long double c = std::tgamma(2.0L * l - 2 * j + 1) /
                    (std::tgamma(j + 1.0L) * std::tgamma(l - j + 1.0L) * std::tgamma(p + 1.0L));
    c *= (j % 2 ? -1 : 1) / std::pow(2.0L, l);
    long double falling = 1;
    for (int i = 0; i < k; ++i) falling *= p - i;
    sum += c * falling * std::pow(x, p - k);
  }
  return sum;
}

long double legendre_oracle(int l, int m, long double x) {
  return std::pow(x * x - 1, m / 2.0L) * legendre_poly_derivative(l, m, x);
}

}  // namespace

TEST_CASE("scaled Bessel values match the series and the closed form") {
  for (double z : {0.05, 0.7, 3.0, 12.0, 30.0}) {
    const auto seq = bessel_half_sequence(25, z);
    for (int l = 0; l <= 25; ++l) {
      const long double i_ref = series_i(l, z), k_ref = closed_k(l, z);
      CHECK(seq[l].log_i() == doctest::Approx(double(std::log(i_ref))).epsilon(1e-12));
      CHECK(seq[l].log_k() == doctest::Approx(double(std::log(k_ref))).epsilon(1e-12));
    }
  }
}

TEST_CASE("i_scaled(0, 1) is e^{-1} sqrt(2/pi) sinh 1") {
  const auto b = bessel_half(0, 1.0);
  CHECK(b.i_scaled == doctest::Approx(std::exp(-1.0) * std::sqrt(2 / std::numbers::pi) * std::sinh(1.0)).epsilon(1e-14));
  CHECK(b.k_scaled == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-14));
}

TEST_CASE("Bessel Wronskian and K recurrence hold to 1e-10") {
  for (double z : {1e-3, 0.1, 1.0, 10.0, 200.0}) {
    const int l_max = 1200;
    const auto b = bessel_half_sequence(l_max, z);
    for (int l = 0; l < l_max; l += 7) {
      // I_nu K_{nu+1} + I_{nu+1} K_nu = 1/z
      const double w = std::exp(b[l].log_i() + b[l + 1].log_k() + std::log(z)) +
                       std::exp(b[l + 1].log_i() + b[l].log_k() + std::log(z));
      CHECK(w == doctest::Approx(1.0).epsilon(1e-10));
      if (l >= 1) {
        // K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
        const double lhs = 1.0;
        const double rhs = std::exp(b[l - 1].log_k() - b[l + 1].log_k()) +
                           (2 * l + 1) / z * std::exp(b[l].log_k() - b[l + 1].log_k());
        CHECK(rhs == doctest::Approx(lhs).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("Bessel derivatives match the recurrences") {
  const double z = 2.5;
  const auto b = bessel_half_sequence(10, z);
  for (int l = 1; l < 10; ++l) {
    // I'_nu = I_{nu-1} - (nu/z) I_nu and K'_nu = -K_{nu-1} - (nu/z) K_nu, at equal shifts
    const double nu = l + 0.5;
    CHECK(b[l].i_deriv_scaled == doctest::Approx(b[l - 1].i_scaled - nu / z * b[l].i_scaled).epsilon(1e-12));
    CHECK(b[l].k_deriv_scaled == doctest::Approx(-b[l - 1].k_scaled - nu / z * b[l].k_scaled).epsilon(1e-12));
  }
}

TEST_CASE("Bessel rejects bad arguments") {
  CHECK_THROWS_AS(bessel_half(1, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_half(1, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_half(-1, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_half(1, std::nan("")), DomainError);
}

TEST_CASE("large order Bessel values stay finite through the log shift") {
  const auto b = bessel_half(1500, 0.5);
  CHECK(b.log_shift > 0.0);
  CHECK(std::isfinite(b.log_i()));
  CHECK(std::isfinite(b.log_k()));
  CHECK(b.log_i() < -5000.0);
  CHECK(b.log_k() > 5000.0);
}

TEST_CASE("associated Legendre values match the polynomial oracle") {
  for (double x : {1.0, 1.001, 1.3, 2.5, 7.0})
    for (int l = 0; l <= 12; ++l)
      for (int m = 0; m <= l; ++m) {
        const auto v = legendre_p(l, m, x);
        CHECK(v.value == doctest::Approx(double(legendre_oracle(l, m, x))).epsilon(1e-11));
      }
}

TEST_CASE("Legendre derivative matches central differences") {
  for (double x : {1.05, 1.5, 3.0})
    for (int l = 0; l <= 15; ++l)
      for (int m = 0; m <= l; ++m) {
        const double h = 1e-5 * x;
        const double fd = (legendre_p(l, m, x + h).value - legendre_p(l, m, x - h).value) / (2 * h);
        CHECK(legendre_p(l, m, x).derivative == doctest::Approx(fd).epsilon(1e-6));
      }
}

TEST_CASE("Legendre at x = 1") {
  CHECK(legendre_p(5, 0, 1.0).value == doctest::Approx(1.0));
  CHECK(legendre_p(5, 0, 1.0).derivative == doctest::Approx(15.0));
  CHECK(legendre_p(5, 3, 1.0).value == 0.0);
  CHECK(std::isfinite(legendre_p(5, 2, 1.0).derivative));
  CHECK(std::isinf(legendre_p(5, 1, 1.0).derivative));
  CHECK_THROWS_AS(legendre_p(2, 3, 1.5), DomainError);
  CHECK_THROWS_AS(legendre_p(2, 1, 0.5), DomainError);
}

TEST_CASE("normalized log Legendre agrees with the direct values") {
  for (double x : {1.2, 1.7, 4.0})
    for (int m : {0, 1, 4, 9}) {
      const int l_max = 30;
      std::vector<double> out(l_max - m + 1);
      legendre_log_normalized(l_max, m, x, std::sqrt(x * x - 1), out);
      for (int l = m; l <= l_max; ++l) {
        const double norm = 0.5 * (std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
        const double ref = norm + std::log(double(legendre_oracle(l, m, x)));
        CHECK(std::abs(out[l - m] - ref) < 1e-11);
      }
    }
}

TEST_CASE("normalized log Legendre survives huge degrees") {
  std::vector<double> out(3001);
  legendre_log_normalized(3000, 0, 50.0, std::sqrt(2499.0), out);
  CHECK(std::isfinite(out.back()));
  CHECK(out.back() > 700.0);
}

TEST_CASE("dilogarithm special values and identities") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double ln2 = std::log(2.0);
  CHECK(dilog(1.0) == doctest::Approx(pi2 / 6).epsilon(1e-15));
  CHECK(dilog(-1.0) == doctest::Approx(-pi2 / 12).epsilon(1e-13));
  CHECK(dilog(0.5) == doctest::Approx(pi2 / 12 - ln2 * ln2 / 2).epsilon(1e-13));
  CHECK(dilog(0.0) == 0.0);
  for (double x = 0.01; x < 1.0; x += 0.0137) {
    // Euler reflection and the duplication formula
    CHECK(std::abs(dilog(x) + dilog(1 - x) - (pi2 / 6 - std::log(x) * std::log1p(-x))) < 1e-13);
    CHECK(std::abs(dilog(x) + dilog(-x) - 0.5 * dilog(x * x)) < 1e-13);
  }
  CHECK_THROWS_AS(dilog(1.5), DomainError);
}
