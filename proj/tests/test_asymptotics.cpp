#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sheetcas/asymptotics.hpp"
#include "sheetcas/errors.hpp"
#include "sheetcas/pfa.hpp"

using namespace sheetcas;

namespace {

const double kThetaPerfect = 1.0 / 3.0 - 20.0 / (std::numbers::pi * std::numbers::pi);

}  // namespace

TEST_CASE("power sums agree with explicit summation") {
  for (double a : {0.0, 0.3, 0.999999, 1.0, 2.5})
    for (double b : {0.0, 0.3, 1.0, 1.0000001, 4.0})
      for (int k : {-1, 0, 1, 5, 31, 33, 80}) {
        const double ref = power_sum_explicit(a, b, k);
        CHECK(std::abs(power_sum(a, b, k) - ref) <= 1e-12 * std::abs(ref));
      }
  CHECK(power_sum_explicit(2.0, 3.0, 2) == 4.0 + 6.0 + 9.0);
  CHECK(power_sum(1.0, 1.0, 99) == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("mixing term from closed-form power sums matches explicit sums") {
  for (int s : {0, 1, 7, 40, 120})
    for (double tau : {0.05, 0.5, 0.95}) {
      const Plasma vs(0.7), vp(3.0);
      const double t = 0.4;
      const auto c = ntl_coefficients(s, t, tau, vs, vp);
      CHECK(c.script_b == doctest::Approx(script_b_explicit(s, t, tau, vs, vp)).epsilon(1e-12));
    }
}

TEST_CASE("integrand reproduces independently computed values") {
  // 40-digit evaluations of the printed formulas
  CHECK(ntl_integrand(0, 1.0, 0.5, Plasma(1.0), Plasma(1.0)) ==
        doctest::Approx(-0.08418338309903429461905192).epsilon(1e-12));
  CHECK(ntl_integrand(3, 0.7, 0.3, Plasma(2.0), Plasma(0.5)) ==
        doctest::Approx(-0.0006819114951730089479364796).epsilon(1e-12));
}

TEST_CASE("general integrand tends to the perfect-conductor form") {
  for (int s : {0, 2, 9})
    for (double tau : {0.1, 0.6}) {
      const double pc = ntl_integrand(s, 0.8, tau, Plasma::perfect(), Plasma::perfect());
      const double big = ntl_integrand(s, 0.8, tau, Plasma(1e12), Plasma(1e12));
      CHECK(big == doctest::Approx(pc).epsilon(1e-8));
      const double mixed = ntl_integrand(s, 0.8, tau, Plasma::perfect(), Plasma(1e12));
      CHECK(mixed == doctest::Approx(pc).epsilon(1e-8));
    }
}

TEST_CASE("integrand domain checks") {
  CHECK_THROWS_AS(ntl_integrand(-1, 1.0, 0.5, Plasma(1.0), Plasma(1.0)), DomainError);
  CHECK_THROWS_AS(ntl_integrand(0, 0.0, 0.5, Plasma(1.0), Plasma(1.0)), DomainError);
  CHECK_THROWS_AS(ntl_integrand(0, 1.0, 1.0, Plasma(1.0), Plasma(1.0)), DomainError);
  CHECK_THROWS_AS(ntl_integrand(0, 1.0, 0.0, Plasma(1.0), Plasma(1.0)), DomainError);
}

TEST_CASE("perfect-conductor s terms have a closed form") {
  for (int s = 0; s <= 8; ++s) {
    const double n = s + 1.0;
    const double ref = 1.0 / (6.0 * n * n) - 2.0 / 3.0;
    CHECK(ntl_s_integral(s, Plasma::perfect(), Plasma::perfect()) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("leading term") {
  const double R = 1.0, d = 0.01;
  CHECK(e0(R, d, Plasma::perfect(), Plasma::perfect()) ==
        doctest::Approx(-std::pow(std::numbers::pi, 3) * R / (720 * d * d)).epsilon(1e-10));
  CHECK(e0(R, d, Plasma(0.0), Plasma(1.0)) == 0.0);
  for (double w : {0.05, 2.0, 300.0})
    CHECK(e0(R, d, Plasma(w), Plasma(w)) ==
          doctest::Approx(pfa_energy(PfaParams{Plasma(w), Plasma(w), R, d})).epsilon(1e-8));
}

TEST_CASE("first correction for perfect conductors") {
  const double R = 1.0, d = 0.01;
  const auto r = e1(R, d, Plasma::perfect(), Plasma::perfect());
  const double ref = kThetaPerfect * e0(R, d, Plasma::perfect(), Plasma::perfect()) * d / R;
  CHECK(r.value == doctest::Approx(ref).epsilon(1e-9));
  CHECK(r.error_estimate < 1e-6 * std::abs(r.value));
  CHECK(r.s_terms > 0);
  CHECK(theta(1e-6, 1e-3, Plasma::perfect(), Plasma::perfect()) == doctest::Approx(kThetaPerfect).epsilon(1e-10));
}

TEST_CASE("first correction is stable under a finer quadrature") {
  AsymptoticOptions fine;
  fine.panel_nodes = 24;
  const auto a = e1(1.0, 0.02, Plasma(1.0), Plasma(1.0));
  const auto b = e1(1.0, 0.02, Plasma(1.0), Plasma(1.0), fine);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8));
}

TEST_CASE("theta depends only on Omega d") {
  const double a = theta(2e-7, 1e-3, Plasma(6.75e5), Plasma(6.75e5));
  const double b = theta(6e-7, 5e-2, Plasma(2.25e5), Plasma(2.25e5));
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("theta for graphene-like sheets is negative") {
  for (double d : {1e-8, 1e-6, 1e-3}) {
    const double th = theta(d, 1e-3, Plasma(6.75e5), Plasma(6.75e5));
    CHECK(th < 0.0);
    CHECK(th > -3.0);
  }
  CHECK_THROWS_AS(theta(1e-6, 1e-3, Plasma(0.0), Plasma(1.0)), DomainError);
}

TEST_CASE("small tau region is resolved") {
  for (int s : {0, 5}) {
    const auto split = ntl_small_tau_split(s, Plasma(0.3), Plasma(2.0));
    CHECK(split.whole == doctest::Approx(split.split).epsilon(1e-9));
    CHECK(std::abs(split.small_piece_change) < 1e-10 * std::abs(split.whole));
  }
}
