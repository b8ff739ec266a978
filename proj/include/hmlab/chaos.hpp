#pragma once

#include <span>
#include <string>
#include <vector>

#include "hmlab/multiplier.hpp"

namespace hmlab {

// Rational rotation number p/q in lowest terms, q >= 1.
struct Rotation {
  long long num = 0;
  long long den = 1;

  bool operator==(const Rotation&) const = default;
};

Rotation make_rotation(long long num, long long den);
Rotation parse_rotation(const std::string& s);  // "P/Q" or "P"
std::string format_rotation(Rotation r);

// c_p = 4 rho^2 / (p q) with q the Hoelder conjugate of p.  The shifted heat
// semigroup e^{ct} e^{t Delta} is chaotic on L^p exactly when Re c > c_p.
double chaos_threshold(const ManifoldModel& model, double p);

// lambda = s + it in S_p with s^2 - t^2 + rho^2 = Re c.  Tie-break: start at
// t = 0.8 (1 - 2/p) rho and move t geometrically toward the strip edge until
// s^2 > 0 (the edge value s^2 = Re c - c_p is positive above threshold).
cplx solve_strip_parameter(const ManifoldModel& model, double p, cplx c);

struct UnimodularRoot {
  Rotation rotation;
  cplx lambda;
  double residual = 0.0;  // |m(lambda)/nu - e^{2 pi i p/q}|
  bool found = false;
  int iterations = 0;
};

enum class Verdict {
  mixing_certified,
  periodic_certified,
  chaotic_certified,
  inconclusive
};

std::string to_string(Verdict v);

// Godefroy-Shapiro witness data for (1/nu) T on L^p.
struct ChaosCertificate {
  cplx nu;
  cplx lambda0;
  double p = 0.0;
  double margin = 0.0;
  std::vector<cplx> u_plus;   // sampled lambda with |m/nu| <= 1 - margin
  std::vector<cplx> u_minus;  // sampled lambda with |m/nu| >= 1 + margin
  std::vector<UnimodularRoot> roots;
  Verdict verdict = Verdict::inconclusive;
};

// Samples a disc around lambda0 inside S_p (3 refinement levels, 24 angles
// each) and classifies the points against margin 1e-3.  Verdict is
// mixing_certified iff both region lists come back nonempty.
ChaosCertificate certify_mixing(const ManifoldModel& model,
                                const Multiplier& mult, cplx nu, cplx lambda0,
                                double p);

// Newton solves m(lambda) = nu e^{2 pi i p/q} for each rotation, seeded from
// a coarse strip sampling around lambda0.  Rotations with no in-strip root at
// resolution come back with found = false.
std::vector<UnimodularRoot> find_unimodular_roots(
    const ManifoldModel& model, const Multiplier& mult, cplx nu, cplx lambda0,
    std::span<const Rotation> rotations, double p);

// Stores the roots on the certificate and upgrades the verdict
// (chaotic_certified needs both regions nonempty and two distinct rotations).
void attach_roots(ChaosCertificate& cert, std::vector<UnimodularRoot> roots);

struct PeriodicTerm {
  cplx lambda;
  Rotation rotation;
  double center = 0.0;  // translate distance R_j along the reference geodesic
  cplx coeff;
};

// phi = sum_j a_j tau_{R_j} phi_{lambda_j}, fixed by ((1/nu) T)^q.
struct PeriodicPoint {
  std::vector<PeriodicTerm> terms;
  long long period = 1;  // lcm of the rotation denominators
};

PeriodicPoint build_periodic_point(std::span<const UnimodularRoot> roots,
                                   std::span<const double> centers,
                                   std::span<const cplx> coeffs);

// max_j |(m(lambda_j)/nu)^q - 1|: the diagonal fixed-point identity.
double diagonal_defect(const ManifoldModel& model, const Multiplier& mult,
                       cplx nu, const PeriodicPoint& point);

// Applies (1/nu) T `period` times through spatial convolution on an extended
// radial domain and returns the max-norm relative defect against the initial
// state on r <= r_max / 2.  Independent of the diagonal shortcut.
double verify_periodic(const ManifoldModel& model, const Multiplier& mult,
                       const PeriodicPoint& point, cplx nu);

struct OrbitRecord {
  std::vector<double> norms;      // ||((1/nu) T)^n v||_p, n = 0..steps
  std::vector<double> log_norms;
  std::vector<double> component_moduli;  // |m(lambda_j)/nu|
  std::vector<std::string> labels;
  bool overflowed = false;
};

// Diagonal evolution a_j <- (m(lambda_j)/nu) a_j with the spatial L^p norm
// recorded each step; stops early once the norm passes 1e12.
OrbitRecord simulate_orbit(const ManifoldModel& model, const Multiplier& mult,
                           cplx nu, const PeriodicPoint& initial, int steps,
                           double p = 2.0);

}  // namespace hmlab
