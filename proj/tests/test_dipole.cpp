#include <cmath>
#include <doctest.h>

#include "cavelim/dipole.hpp"

using namespace cavelim;

TEST_CASE("f approaches the Dicke limit at small separation") {
  for (double theta : {0.0, pi / 2.0, magic_angle}) {
    CHECK(std::abs(coupling_f(1e-3, theta) - 1.0) < 1e-5);
    CHECK(std::abs(coupling_f(1e-5, theta) - 1.0) < 1e-9);
  }
}

TEST_CASE("radial series joins the direct evaluation smoothly") {
  // The series path is used below xi = 0.02; compare both sides of the
  // threshold through f at theta = 0 where only the radial term remains.
  const double below = coupling_f(2e-2 * (1.0 - 1e-9), 0.0);
  const double above = coupling_f(2e-2 * (1.0 + 1e-9), 0.0);
  CHECK(std::abs(below - above) < 1e-10);
}

TEST_CASE("magic angle removes the near-field terms") {
  // With 3cos^2(theta) = 1 only the sin^2 far-field term survives, so
  // f = sin(xi)/xi and g = -cos(xi)/xi.
  CHECK(coupling_f(pi / 2.0, magic_angle) ==
        doctest::Approx(2.0 / pi).epsilon(1e-12));
  for (double xi : {0.05, 0.3, 1.0, 2.5, 7.7}) {
    CHECK(coupling_g(xi, magic_angle) ==
          doctest::Approx(-std::cos(xi) / xi).epsilon(1e-9));
    CHECK(coupling_f(xi, magic_angle) ==
          doctest::Approx(std::sin(xi) / xi).epsilon(1e-9));
  }
}

TEST_CASE("magic-angle dissipative coupling carries the rate scale") {
  const DipoleCoupling c =
      dipole_coupling(PairGeometry{pi / 2.0, magic_angle}, 0.3, 1.7);
  const double expected = (2.0 / pi) * std::sqrt(0.3 * 1.7);
  CHECK(std::abs(c.gamma - expected) <= 1e-10 * expected);
  CHECK(c.v() == cplx(c.omega, -c.gamma));
}

TEST_CASE("theta -> pi - theta symmetry") {
  for (double theta : {1e-8, 0.2, 0.7, 1.2, pi / 2.0}) {
    for (double xi : {0.02, 0.5, 2.0, 9.0}) {
      const double g1 = coupling_g(xi, theta);
      const double g2 = coupling_g(xi, pi - theta);
      const double f1 = coupling_f(xi, theta);
      const double f2 = coupling_f(xi, pi - theta);
      CHECK(std::abs(g1 - g2) <= 1e-12 * std::abs(g1));
      CHECK(std::abs(f1 - f2) <= 1e-12 * std::max(std::abs(f1), 1e-6));
    }
  }
}

TEST_CASE("f is bounded by one everywhere") {
  for (int it = 0; it <= 40; ++it) {
    const double theta = pi * it / 40.0;
    for (int ix = 1; ix <= 200; ++ix) {
      const double xi = 0.01 + 15.0 * ix / 200.0;
      CHECK(std::abs(coupling_f(xi, theta)) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("near-field divergence of g") {
  // g ~ 1/xi^3 away from the magic angle, ~1/xi at it.
  CHECK(std::abs(coupling_g(1e-2, 0.0)) > 1e5);
  CHECK(std::abs(coupling_g(1e-2, magic_angle)) <
        2.0 / 1e-2);  // ~ cos(xi)/xi
  // Asymptotic 1/xi^3 ratio between two small separations at theta = 0.
  const double r = coupling_g(1e-3, 0.0) / coupling_g(1e-2, 0.0);
  CHECK(r == doctest::Approx(1e3).epsilon(1e-3));
}

TEST_CASE("far field decays") {
  CHECK(std::abs(coupling_g(300.0, pi / 2.0)) < 1e-2);
  CHECK(std::abs(coupling_f(300.0, pi / 2.0)) < 1e-2);
}

TEST_CASE("geometry from positions") {
  const PairGeometry along_z = pair_geometry(Vec3(0, 0, 0), Vec3(0, 0, 0.5));
  CHECK(along_z.theta == doctest::Approx(0.0));
  CHECK(along_z.xi == doctest::Approx(wave_number * 0.5));

  const PairGeometry in_plane = pair_geometry(Vec3(1, 2, 3), Vec3(1, 2.25, 3));
  CHECK(in_plane.theta == doctest::Approx(pi / 2.0));

  const PairGeometry diag =
      pair_geometry(Vec3(0, 0, 0), Vec3(0, 1.0, 1.0));
  CHECK(diag.theta == doctest::Approx(pi / 4.0));

  CHECK_THROWS_AS(pair_geometry(Vec3(1, 1, 1), Vec3(1, 1, 1)),
                  SingularGeometryError);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(coupling_g(0.0, 0.3), SingularGeometryError);
  CHECK_THROWS_AS(coupling_f(-1.0, 0.3), SingularGeometryError);
  CHECK_THROWS_AS(coupling_g(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(coupling_g(1.0, pi + 0.5), std::invalid_argument);
  CHECK_THROWS_AS(dipole_coupling(PairGeometry{1.0, 0.3}, -1.0, 1.0),
                  UnphysicalParametersError);
}

TEST_CASE("coupling map matches pointwise evaluation") {
  const std::vector<double> thetas{0.0, 0.4, magic_angle, 1.3};
  const std::vector<double> xis{0.3, 1.0, 4.0};
  const CouplingMap map = coupling_map(thetas, xis, 0.5, 2.0);
  REQUIRE(map.g.rows() == 4);
  REQUIRE(map.g.cols() == 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(map.g(i, j) == coupling_g(xis[j], thetas[i]));
      CHECK(map.f(i, j) == coupling_f(xis[j], thetas[i]));
    }
  CHECK_THROWS_AS(coupling_map(thetas, xis, -0.1, 1.0),
                  UnphysicalParametersError);
}
