#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace hmlab;
using namespace hmlab::testing;

namespace {

const cplx kNu = std::exp(cplx(-1.25, 0.0));

ChaosCertificate heat_cert() {
  return certify_mixing(h3(), heat_multiplier(1.0), kNu, cplx(0.5), 4.0);
}

}  // namespace

TEST_CASE("rotation arithmetic") {
  CHECK(make_rotation(2, 48) == Rotation{1, 24});
  CHECK(make_rotation(-1, -3) == Rotation{1, 3});
  CHECK(make_rotation(3, -6) == Rotation{-1, 2});
  CHECK(parse_rotation("1/24") == Rotation{1, 24});
  CHECK(parse_rotation("-2/8") == Rotation{-1, 4});
  CHECK(parse_rotation("3") == Rotation{3, 1});
  CHECK_THROWS_AS(parse_rotation("x/y"), InputError);
  CHECK_THROWS_AS(make_rotation(1, 0), InputError);
}

TEST_CASE("threshold formula") {
  CHECK(chaos_threshold(h3(), 4.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(chaos_threshold(h2(), 4.0) == doctest::Approx(0.1875).epsilon(1e-15));
  const double p = 1e6;
  CHECK(chaos_threshold(h3(), p) ==
        doctest::Approx(4.0 * (p - 1.0) / (p * p)).epsilon(1e-12));
  CHECK_THROWS_AS(chaos_threshold(h3(), 2.0), InputError);
}

TEST_CASE("strip parameter construction") {
  const cplx l1 = solve_strip_parameter(h3(), 4.0, cplx(1.0));
  CHECK(l1.real() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(l1.imag() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(solve_strip_parameter(h3(), 4.0, cplx(0.75)), InputError);
  CHECK_THROWS_AS(solve_strip_parameter(h3(), 4.0, cplx(0.75, 5.0)),
                  InputError);
  const cplx l2 = solve_strip_parameter(h3(), 4.0, cplx(2.0));
  CHECK(std::abs(l2.real() * l2.real() - l2.imag() * l2.imag() + 1.0 - 2.0) <
        1e-12);
  CHECK(std::abs(l2.imag()) < 0.5);

  std::mt19937 rng(91);
  std::uniform_real_distribution<double> re(0.7500001, 4.0);
  std::uniform_real_distribution<double> im(-3.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const cplx c(re(rng), im(rng));
    const cplx l = solve_strip_parameter(h3(), 4.0, c);
    CHECK(std::abs(l.real() * l.real() - l.imag() * l.imag() + 1.0 -
                   c.real()) < 1e-12);
    CHECK(l.imag() > 0.0);
    CHECK(l.imag() < 0.5);
    // corollary's level condition |nu| = |m(lambda)| for the heat symbol
    const cplx m = std::exp(-(l * l + 1.0));
    CHECK(std::abs(std::abs(std::exp(-c)) - std::abs(m)) < 1e-12);
  }
}

TEST_CASE("mixing certificate for the shifted heat operator") {
  ChaosCertificate cert = heat_cert();
  CHECK(cert.verdict == Verdict::mixing_certified);
  CHECK(!cert.u_plus.empty());
  CHECK(!cert.u_minus.empty());
  // certificate soundness: every stored point re-classifies identically
  for (cplx z : cert.u_plus) {
    const double ratio =
        std::abs(symbol_eval(h3(), heat_multiplier(1.0), z) / cert.nu);
    CHECK(ratio <= 1.0 - cert.margin);
    CHECK(std::abs(z.imag()) < 0.5);
  }
  for (cplx z : cert.u_minus) {
    const double ratio =
        std::abs(symbol_eval(h3(), heat_multiplier(1.0), z) / cert.nu);
    CHECK(ratio >= 1.0 + cert.margin);
    CHECK(std::abs(z.imag()) < 0.5);
  }
  // |m| decreases in Re lambda, so some real point above 0.5 contracts
  bool real_contracting = false;
  for (cplx z : cert.u_plus)
    if (std::abs(z.imag()) < 1e-12 && z.real() > 0.5) real_contracting = true;
  CHECK(real_contracting);
}

TEST_CASE("certificate regions depend only on |nu|") {
  ChaosCertificate a = heat_cert();
  ChaosCertificate b = certify_mixing(h3(), heat_multiplier(1.0),
                                      kNu * std::exp(cplx(0.0, 1.1)),
                                      cplx(0.5), 4.0);
  REQUIRE(a.u_plus.size() == b.u_plus.size());
  REQUIRE(a.u_minus.size() == b.u_minus.size());
  for (std::size_t k = 0; k < a.u_plus.size(); ++k)
    CHECK(a.u_plus[k] == b.u_plus[k]);
  for (std::size_t k = 0; k < a.u_minus.size(); ++k)
    CHECK(a.u_minus[k] == b.u_minus[k]);
}

TEST_CASE("certification preconditions") {
  RadialMeasure identity;
  identity.atoms.push_back({0.0, cplx(1.0)});
  CHECK_THROWS_AS(certify_mixing(h3(), measure_multiplier(identity), cplx(1.0),
                                 cplx(0.5), 4.0),
                  InputError);
  // |nu| must match |m(lambda0)|
  CHECK_THROWS_AS(
      certify_mixing(h3(), heat_multiplier(1.0), cplx(0.5), cplx(0.5), 4.0),
      InputError);
  CHECK_THROWS_AS(
      certify_mixing(h3(), heat_multiplier(1.0), kNu, cplx(0.5, 0.6), 4.0),
      InputError);
}

TEST_CASE("unimodular roots of the heat symbol") {
  const Rotation rots[] = {Rotation{0, 1}, Rotation{1, 24}, Rotation{1, 3}};
  auto roots = find_unimodular_roots(h3(), heat_multiplier(1.0), kNu,
                                     cplx(0.5), rots, 4.0);
  REQUIRE(roots.size() == 3);

  CHECK(roots[0].found);
  CHECK(std::abs(roots[0].lambda - cplx(0.5)) < 1e-9);
  CHECK(roots[0].residual < 1e-10);

  CHECK(roots[1].found);
  // analytic: lambda^2 + 1 = 1.25 - 2 pi i / 24
  const cplx analytic = std::sqrt(cplx(0.25, -2.0 * kPi / 24.0));
  CHECK(std::abs(roots[1].lambda - analytic) < 1e-9);
  CHECK(roots[1].residual < 1e-10);
  CHECK(std::abs(roots[1].lambda.imag()) < 0.5 - 1e-9);

  // rotation 1/3 leaves S_4: |Im sqrt(0.25 - 2.0944 i)| > 0.5
  CHECK_FALSE(roots[2].found);
}

TEST_CASE("conjugate rotations give conjugate roots") {
  const Rotation rots[] = {Rotation{1, 24}, Rotation{-1, 24}};
  auto roots = find_unimodular_roots(h3(), heat_multiplier(1.0), kNu,
                                     cplx(0.5), rots, 4.0);
  REQUIRE(roots[0].found);
  REQUIRE(roots[1].found);
  CHECK(std::abs(roots[1].lambda - std::conj(roots[0].lambda)) < 1e-8);
}

TEST_CASE("verdict upgrades with roots") {
  ChaosCertificate cert = heat_cert();
  const Rotation rots[] = {Rotation{0, 1}, Rotation{1, 24}};
  attach_roots(cert, find_unimodular_roots(h3(), heat_multiplier(1.0), kNu,
                                           cplx(0.5), rots, 4.0));
  CHECK(cert.verdict == Verdict::chaotic_certified);

  // a single rotation is not enough for the chaotic verdict
  ChaosCertificate cert2 = heat_cert();
  const Rotation one[] = {Rotation{0, 1}};
  attach_roots(cert2, find_unimodular_roots(h3(), heat_multiplier(1.0), kNu,
                                            cplx(0.5), one, 4.0));
  CHECK(cert2.verdict == Verdict::mixing_certified);
}

TEST_CASE("periodic point construction and diagonal identity") {
  const Rotation rots[] = {Rotation{1, 24}, Rotation{1, 12}};
  auto roots = find_unimodular_roots(h3(), heat_multiplier(1.0), kNu,
                                     cplx(0.5), rots, 4.0);
  REQUIRE(roots[0].found);
  REQUIRE(roots[1].found);
  const double centers[] = {0.0, 0.0};
  const cplx coeffs[] = {cplx(1.0), cplx(0.5, 0.5)};
  PeriodicPoint point = build_periodic_point(roots, centers, coeffs);
  CHECK(point.period == 24);  // lcm(24, 12)
  CHECK(diagonal_defect(h3(), heat_multiplier(1.0), kNu, point) < 1e-9);

  const double one_center[] = {0.0};
  const cplx one_coeff[] = {cplx(1.0)};
  PeriodicPoint single = build_periodic_point(
      std::span(roots.data(), 1), one_center, one_coeff);
  CHECK(single.period == 24);

  CHECK_THROWS_AS(build_periodic_point({}, {}, {}), InputError);
}

TEST_CASE("kernel-side fixed point for the rotation 0/1 root") {
  const Rotation rots[] = {Rotation{0, 1}};
  auto roots = find_unimodular_roots(h3(), heat_multiplier(1.0), kNu,
                                     cplx(0.5), rots, 4.0);
  REQUIRE(roots[0].found);
  const double centers[] = {0.0};
  const cplx coeffs[] = {cplx(1.0)};
  PeriodicPoint point = build_periodic_point(roots, centers, coeffs);
  CHECK(point.period == 1);
  const double defect =
      verify_periodic(h3(), heat_multiplier(1.0), point, kNu);
  CHECK(defect < 1e-3);
}

TEST_CASE("orbit rates for a single eigenfunction") {
  // |m/nu| = e^{0.25 - Re lambda^2} for t = 1, nu = e^{-1.25}
  const double lam = std::sqrt(0.25 - std::log(0.9));
  PeriodicPoint state;
  state.terms.push_back({cplx(lam), Rotation{0, 1}, 0.0, cplx(1.0)});
  OrbitRecord rec =
      simulate_orbit(h3(), heat_multiplier(1.0), kNu, state, 20, 4.0);
  REQUIRE(rec.norms.size() == 21);
  CHECK(rec.component_moduli[0] == doctest::Approx(0.9).epsilon(1e-12));
  for (std::size_t n = 1; n < rec.norms.size(); ++n)
    CHECK(rec.norms[n] / rec.norms[n - 1] ==
          doctest::Approx(0.9).epsilon(1e-10));
  CHECK(rec.norms[20] / rec.norms[0] ==
        doctest::Approx(std::pow(0.9, 20)).epsilon(1e-2));
}

TEST_CASE("orbit on the level set keeps its norm") {
  PeriodicPoint state;
  state.terms.push_back({cplx(0.5), Rotation{0, 1}, 0.0, cplx(1.0)});
  OrbitRecord rec =
      simulate_orbit(h3(), heat_multiplier(1.0), kNu, state, 50, 4.0);
  for (double norm : rec.norms)
    CHECK(norm == doctest::Approx(rec.norms[0]).epsilon(1e-2));
}

TEST_CASE("orbit overflow stops early") {
  PeriodicPoint state;
  state.terms.push_back({cplx(0.1), Rotation{0, 1}, 0.0, cplx(1e9)});
  OrbitRecord rec =
      simulate_orbit(h3(), heat_multiplier(0.5), kNu, state, 200, 4.0);
  CHECK(rec.overflowed);
  CHECK(rec.norms.size() < 201);
  CHECK(rec.norms.back() > 1e12);
}

TEST_CASE("orbit input validation") {
  PeriodicPoint state;
  state.terms.push_back({cplx(0.5, 0.6), Rotation{0, 1}, 0.0, cplx(1.0)});
  CHECK_THROWS_AS(
      simulate_orbit(h3(), heat_multiplier(1.0), kNu, state, 10, 4.0),
      InputError);
  PeriodicPoint empty;
  CHECK_THROWS_AS(
      simulate_orbit(h3(), heat_multiplier(1.0), kNu, empty, 10, 4.0),
      InputError);
  PeriodicPoint ok;
  ok.terms.push_back({cplx(0.5), Rotation{0, 1}, 0.0, cplx(1.0)});
  CHECK_THROWS_AS(
      simulate_orbit(h3(), heat_multiplier(1.0), kNu, ok, 500, 4.0),
      InputError);
}

TEST_CASE("certificate json contains the witness data") {
  ChaosCertificate cert = heat_cert();
  const std::string text = certificate_to_json(cert);
  CHECK(text.find("\"verdict\": \"mixing_certified\"") != std::string::npos);
  CHECK(text.find("u_plus") != std::string::npos);
  CHECK(text.find("u_minus") != std::string::npos);
}
