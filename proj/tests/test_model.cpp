#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace hmlab;

TEST_CASE("hyperbolic model basics") {
  ManifoldModel m3 = build_model(ModelKind::hyperbolic, 3, 10.0, 128);
  CHECK(m3.rho() == doctest::Approx(1.0));
  ManifoldModel m2 = build_model(ModelKind::hyperbolic, 2, 10.0, 128);
  CHECK(m2.rho() == doctest::Approx(0.5));
  ManifoldModel m5 = build_model(ModelKind::hyperbolic, 5, 10.0, 128);
  CHECK(m5.rho() == doctest::Approx(2.0));

  // A(r) = omega_{n-1} sinh^{n-1} r
  CHECK(m3.density(1.0) ==
        doctest::Approx(4.0 * kPi * std::pow(std::sinh(1.0), 2)).epsilon(1e-13));
  CHECK(m2.density(2.0) ==
        doctest::Approx(2.0 * kPi * std::sinh(2.0)).epsilon(1e-13));
  CHECK(m3.log_density_deriv(1.5) ==
        doctest::Approx(2.0 / std::tanh(1.5)).epsilon(1e-13));
}

TEST_CASE("unit sphere areas") {
  CHECK(ManifoldModel::unit_sphere_area(1) == doctest::Approx(2.0 * kPi));
  CHECK(ManifoldModel::unit_sphere_area(2) == doctest::Approx(4.0 * kPi));
  CHECK(ManifoldModel::unit_sphere_area(3) ==
        doctest::Approx(2.0 * kPi * kPi));
  CHECK(ManifoldModel::unit_sphere_area(0) == doctest::Approx(2.0));
}

TEST_CASE("grid integrates the volume weight accurately") {
  ManifoldModel m = build_model(ModelKind::hyperbolic, 3, 12.0, 512);
  // int_0^inf e^{-4r} A(r) dr = 4 pi int e^{-4r} sinh^2 r dr = pi/6
  RadialFunction f =
      make_radial(m, [](double r) { return std::exp(-4.0 * r); });
  // domain truncation at r_max = 12 leaves a ~e^{-24} tail
  CHECK(radial_integral(m, f).real() ==
        doctest::Approx(kPi / 6.0).epsilon(1e-9));
}

TEST_CASE("lp norms") {
  ManifoldModel m = build_model(ModelKind::hyperbolic, 3, 12.0, 512);
  RadialFunction f =
      make_radial(m, [](double r) { return std::exp(-2.0 * r); });
  // ||f||_2^2 = int e^{-4r} A(r) dr = pi/6
  CHECK(lp_norm_radial(m, f, 2.0) ==
        doctest::Approx(std::sqrt(kPi / 6.0)).epsilon(1e-9));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(lp_norm_radial(m, f, inf) ==
        doctest::Approx(std::exp(-2.0 * m.grid().nodes.front())));
  CHECK_THROWS_AS(lp_norm_radial(m, f, 0.5), InputError);
  // homogeneity
  RadialFunction g = f;
  for (cplx& v : g.values) v *= cplx(0.0, 3.0);
  CHECK(lp_norm_radial(m, g, 2.0) ==
        doctest::Approx(3.0 * lp_norm_radial(m, f, 2.0)).epsilon(1e-13));
}

TEST_CASE("strip halfwidth") {
  ManifoldModel m3 = build_model(ModelKind::hyperbolic, 3, 10.0, 128);
  CHECK(strip_halfwidth(m3, 4.0) == doctest::Approx(0.5));
  CHECK(strip_halfwidth(m3, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(strip_halfwidth(m3, 2.0), InputError);
  ManifoldModel m2 = build_model(ModelKind::hyperbolic, 2, 10.0, 128);
  CHECK(strip_halfwidth(m2, 6.0) == doctest::Approx(0.5 * (2.0 / 3.0)));
}

TEST_CASE("two-center distance") {
  ManifoldModel m = build_model(ModelKind::hyperbolic, 3, 10.0, 128);
  CHECK(two_center_distance(m, 1.3, 0.0, 2.0) == doctest::Approx(1.3));
  CHECK(two_center_distance(m, 1.0, 1.0, 0.0) == doctest::Approx(0.0));
  CHECK(two_center_distance(m, 1.0, 1.0, kPi) == doctest::Approx(2.0));
  // right angle: cosh d = cosh^2 1
  CHECK(two_center_distance(m, 1.0, 1.0, kPi / 2.0) ==
        doctest::Approx(std::acosh(std::pow(std::cosh(1.0), 2))).epsilon(1e-13));
  CHECK_THROWS_AS(two_center_distance(m, -1.0, 1.0, 0.5), InputError);
  CHECK_THROWS_AS(two_center_distance(m, 1.0, 1.0, 4.0), InputError);
}

TEST_CASE("custom model validation") {
  auto density = [](double r) { return 4.0 * kPi * r * r * std::cosh(r); };
  ManifoldModel m = build_custom_model(3, 8.0, 128, 0.5, density);
  CHECK(m.kind() == ModelKind::custom_density);
  CHECK(m.rho() == doctest::Approx(0.5));
  CHECK_THROWS_AS(
      build_custom_model(3, 8.0, 128, 0.5,
                         [](double r) { return r - 4.0; }),
      ModelError);
  CHECK_THROWS_AS(build_model(ModelKind::hyperbolic, 1, 8.0, 128), InputError);
  CHECK_THROWS_AS(build_model(ModelKind::hyperbolic, 3, -1.0, 128), InputError);
  CHECK_THROWS_AS(build_model(ModelKind::hyperbolic, 3, 8.0, 4), InputError);
  CHECK_THROWS_AS(two_center_distance(m, 1.0, 1.0, 0.5),
                  UnsupportedModelError);
}

TEST_CASE("grid identity is enforced") {
  ManifoldModel a = build_model(ModelKind::hyperbolic, 3, 10.0, 128);
  ManifoldModel b = build_model(ModelKind::hyperbolic, 3, 10.0, 128);
  RadialFunction f = make_radial(a, [](double) { return 1.0; });
  CHECK_THROWS_AS(radial_integral(b, f), InputError);
}
