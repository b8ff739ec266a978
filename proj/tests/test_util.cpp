#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace hmlab;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double total = 0.0, quartic = 0.0;
  for (int k = 0; k < 5; ++k) {
    total += w[k];
    quartic += w[k] * std::pow(x[k], 8);
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quartic == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("composite rule handles smooth integrands") {
  std::vector<double> nodes, weights;
  composite_gauss_legendre(0.0, kPi, 16, 8, nodes, weights);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s += weights[i] * std::sin(nodes[i]);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::is_sorted(nodes.begin(), nodes.end()));
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(64,
                               [](std::size_t i) {
                                 if (i == 13) throw NumericalError("boom");
                               }),
                  NumericalError);
}

TEST_CASE("radial interpolant reproduces smooth profiles") {
  std::vector<double> nodes;
  std::vector<cplx> values;
  for (int i = 0; i <= 200; ++i) {
    const double r = 0.01 + 8.0 * i / 200.0;
    nodes.push_back(r);
    values.push_back(cplx(std::exp(-r * r / 4.0), std::sin(r)));
  }
  RadialInterpolant itp(nodes, values);
  for (double r : {0.3, 1.234, 4.56, 7.9}) {
    const cplx want(std::exp(-r * r / 4.0), std::sin(r));
    CHECK(std::abs(itp(r) - want) < 1e-6);
  }
  CHECK(itp(9.5) == cplx(0.0));         // beyond the grid
  CHECK(itp(0.0) == values.front());    // clamped below
}

TEST_CASE("cumulative integral matches closed forms") {
  std::vector<double> nodes;
  std::vector<cplx> values;
  for (int i = 0; i <= 400; ++i) {
    const double r = 10.0 * i / 400.0;
    nodes.push_back(std::max(r, 1e-6));
    values.push_back(std::exp(-r));
  }
  CumulativeIntegral F(nodes, values, 8);
  for (double d : {0.5, 2.0, 7.7}) {
    CHECK(std::abs(F(d) - (1.0 - std::exp(-d))) < 1e-6);
  }
  CHECK(std::abs(F(50.0) - F(10.0)) == 0.0);  // saturates past the grid
  CHECK(F(0.0) == cplx(0.0));
}

TEST_CASE("complex parsing round trips") {
  CHECK(parse_complex("0.5") == cplx(0.5, 0.0));
  CHECK(parse_complex("-1.25") == cplx(-1.25, 0.0));
  CHECK(parse_complex("0.5+0.2i") == cplx(0.5, 0.2));
  CHECK(parse_complex("1e-2-3i") == cplx(0.01, -3.0));
  CHECK(parse_complex("0.3i") == cplx(0.0, 0.3));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK_THROWS_AS(parse_complex("abc"), InputError);
  CHECK_THROWS_AS(parse_complex("1+2"), InputError);
  CHECK_THROWS_AS(parse_complex(""), InputError);
  for (cplx z : {cplx(1.5, -2.25), cplx(0.0, 3.0), cplx(-7.0, 0.0)})
    CHECK(parse_complex(format_complex(z)) == z);
}

TEST_CASE("format_double is round-trip safe") {
  for (double v : {1.0 / 3.0, 1e-17, -2.718281828459045, 123456789.123456789})
    CHECK(std::stod(format_double(v)) == v);
}
