#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sheetcas/asymptotics.hpp"
#include "sheetcas/energy.hpp"
#include "sheetcas/errors.hpp"
#include "sheetcas/pfa.hpp"

using namespace sheetcas;

namespace {

double det_by_cofactors(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return a(0, 0);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r)
      for (int c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    sum += (j % 2 ? -1.0 : 1.0) * a(0, j) * det_by_cofactors(minor);
  }
  return sum;
}

EnergyResult sphere_plane(double radius, double distance, Plasma omega_s, Plasma omega_p,
                          double rel_tol = 1e-4) {
  NumericsSpec n;
  n.rel_tol = rel_tol;
  return casimir_energy(SphereSheet{radius, omega_s}, PlaneSheet{omega_p, distance}, n);
}

}  // namespace

TEST_CASE("log det of a zero and a diagonal block") {
  RoundTripBlock zero;
  zero.matrix = Eigen::MatrixXd::Zero(4, 4);
  zero.log_scale.assign(4, 0.0);
  CHECK(logdet_one_minus(zero) == 0.0);

  RoundTripBlock diag;
  diag.matrix = Eigen::Vector4d(0.5, 0.25, 1e-20, 0.1).asDiagonal();
  diag.log_scale.assign(4, 0.0);
  const double expect = std::log(0.5) + std::log(0.75) + std::log1p(-1e-20) + std::log(0.9);
  CHECK(logdet_one_minus(diag) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(logdet_one_minus(diag) < 0.0);
}

TEST_CASE("log det of a small physical block matches cofactor expansion") {
  NumericsSpec n;
  n.l_max = 2;
  n.rel_tol = 1e-10;
  for (double kappa : {0.3, 1.0}) {
    const auto blk = assemble_block(1, kappa, SphereSheet{1.0, Plasma(3.0)},
                                    PlaneSheet{Plasma(2.0), 1.3}, n);
    REQUIRE(blk.dimension() == 4);
    Eigen::MatrixXd a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - blk.entry(i, j);
    CHECK(logdet_one_minus(blk) == doctest::Approx(std::log(det_by_cofactors(a))).epsilon(1e-12));
  }
}

TEST_CASE("log det prefixes are the shorter truncations") {
  const SphereSheet sphere{1.0, Plasma::perfect()};
  const PlaneSheet plane{Plasma(5.0), 1.2};
  NumericsSpec n;
  n.l_max = 12;
  const auto full = assemble_block(2, 1.5, sphere, plane, n);
  const auto prefix = logdet_prefix(full);
  REQUIRE(prefix.size() == 11);
  CHECK(prefix.back() == doctest::Approx(logdet_one_minus(full)).epsilon(1e-13));
  n.l_max = 7;
  const auto shorter = assemble_block(2, 1.5, sphere, plane, n);
  CHECK(prefix[7 - 2] == doctest::Approx(logdet_one_minus(shorter)).epsilon(1e-9));
  for (std::size_t k = 1; k < prefix.size(); ++k) CHECK(prefix[k] <= prefix[k - 1]);
}

TEST_CASE("energy vanishes for a transparent sheet") {
  CHECK(sphere_plane(1.0, 2.0, Plasma(0.0), Plasma(3.0)).energy == 0.0);
  CHECK(sphere_plane(1.0, 2.0, Plasma(3.0), Plasma(0.0)).energy == 0.0);
}

TEST_CASE("energy rejects overlapping geometry") {
  CHECK_THROWS_AS(sphere_plane(1.0, 1.0, Plasma(1.0), Plasma(1.0)), DomainError);
  CHECK_THROWS_AS(sphere_plane(1.0, 0.5, Plasma(1.0), Plasma(1.0)), DomainError);
  CHECK_THROWS_AS(sphere_plane(-1.0, 2.0, Plasma(1.0), Plasma(1.0)), DomainError);
}

TEST_CASE("energy is negative and rises towards zero with distance") {
  double previous = -INFINITY;
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto r = sphere_plane(1.0, 1.0 + eps, Plasma(4.0), Plasma(4.0));
    CHECK(r.energy < 0.0);
    CHECK(r.energy > previous);
    CHECK(r.energy_dimensionless == doctest::Approx(r.energy * eps * eps).epsilon(1e-12));
    previous = r.energy;
  }
}

TEST_CASE("energy scales inversely with length") {
  const double lambda = 3.0;
  const auto a = sphere_plane(1.0, 1.5, Plasma(2.0), Plasma(6.0), 1e-7);
  const auto b = sphere_plane(lambda, lambda * 1.5, Plasma(2.0 / lambda), Plasma(6.0 / lambda), 1e-7);
  CHECK(b.energy * lambda == doctest::Approx(a.energy).epsilon(1e-6));
}

TEST_CASE("stronger coupling gives a more negative energy, bounded by the perfect value") {
  const auto weak = sphere_plane(1.0, 1.5, Plasma(1.0), Plasma(1.0));
  const auto strong = sphere_plane(1.0, 1.5, Plasma(10.0), Plasma(10.0));
  const auto perfect = sphere_plane(1.0, 1.5, Plasma::perfect(), Plasma::perfect());
  CHECK(weak.energy < 0.0);
  CHECK(strong.energy < weak.energy);
  CHECK(perfect.energy < strong.energy);
}

TEST_CASE("perfect conductors at large distance approach the Casimir-Polder law") {
  const double L = 101.0;
  const auto r = sphere_plane(1.0, L, Plasma::perfect(), Plasma::perfect(), 1e-6);
  const double cp = -9.0 / (16.0 * std::numbers::pi * std::pow(L, 4));
  CHECK(r.energy == doctest::Approx(cp).epsilon(3e-2));
}

TEST_CASE("reported error covers a tighter recomputation") {
  const auto loose = sphere_plane(1.0, 1.5, Plasma(3.0), Plasma::perfect(), 1e-4);
  const auto tight = sphere_plane(1.0, 1.5, Plasma(3.0), Plasma::perfect(), 1e-8);
  CHECK(std::abs(loose.energy - tight.energy) <=
        3.0 * std::max(loose.error_estimate, 1e-4 * std::abs(tight.energy)));
  CHECK(tight.l_max_used >= loose.l_max_used);
  CHECK(loose.kappa_nodes_used >= 8);
}

TEST_CASE("fixed truncations are honoured") {
  NumericsSpec n;
  n.l_max = 10;
  n.m_max = 3;
  const auto r = casimir_energy(SphereSheet{1.0, Plasma::perfect()}, PlaneSheet{Plasma::perfect(), 2.0}, n);
  CHECK(r.l_max_used == 10);
  CHECK(r.m_max_used == 3);
}

TEST_CASE("small-gap energy approaches the two-term expansion") {
  // Omega R = 10 on both surfaces; the gap between exact and asymptotic
  // energies has to shrink faster than eps.
  auto deviation = [](double eps) {
    const Plasma omega(10.0);
    const auto exact = sphere_plane(1.0, 1.0 + eps, omega, omega, 1e-4).energy;
    const Plasma varpi(10.0 * eps);
    const double asympt = e0(1.0, eps, varpi, varpi) + e1(1.0, eps, varpi, varpi).value;
    return std::abs(exact / asympt - 1.0);
  };
  const double at_01 = deviation(0.1);
  const double at_005 = deviation(0.05);
  CHECK(at_005 < at_01);
  CHECK(at_005 < 0.6 * at_01);
}
