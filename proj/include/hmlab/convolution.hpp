#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hmlab/transform.hpp"

namespace hmlab {

// Finite radial measure: absolutely continuous part g dvol plus atoms.
// An atom of mass m at radius r acts as m times the normalized sphere
// average at that radius (so a unit atom at r = 0 is the convolution
// identity and its symbol is phi_lambda(r)).
struct RadialMeasure {
  struct Atom {
    double r = 0.0;
    cplx mass;
  };
  std::optional<RadialFunction> density_part;
  std::vector<Atom> atoms;
};

// ||mu||: |masses| plus the L^1 norm of the density part (recomputed).
double total_variation(const ManifoldModel& model, const RadialMeasure& mu);

// Fourier-side convolution: invert(f_hat * g_hat).  Commutative by
// construction.  Requires a calibrated model.
RadialFunction convolve_radial(const ManifoldModel& model,
                               const RadialFunction& f,
                               const RadialFunction& g);

// Spatial convolution (f * g)(x_k) = int f(y) g(d(x_k, y)) dvol(y) at points
// x_k on the reference geodesic at the given distances from the basepoint.
// Hyperbolic models only; the independent oracle for convolve_radial.
std::vector<cplx> convolve_direct(const ManifoldModel& model,
                                  const RadialFunction& f,
                                  const RadialFunction& g,
                                  std::span<const double> eval_distances);

// Same with a translated-radial first factor.
std::vector<cplx> convolve_direct(const ManifoldModel& model,
                                  const AxialField& f, const RadialFunction& g,
                                  std::span<const double> eval_distances);

// Symbol of the measure: m_mu(lambda) = sum_k m_k phi_lambda(r_k) + g_hat.
cplx measure_symbol(const ManifoldModel& model, const RadialMeasure& mu,
                    cplx lambda);

// f * mu via the measure symbol on the spectral grid.
RadialFunction convolve_measure(const ManifoldModel& model,
                                const RadialFunction& f,
                                const RadialMeasure& mu);

struct YoungReport {
  double lhs = 0.0;  // ||f * g||_p
  double rhs = 0.0;  // ||f||_p ||g||_1
  bool pass = false;
};

YoungReport young_bound_check(const ManifoldModel& model,
                              const RadialFunction& f, const RadialFunction& g,
                              double p);

// exp(-r^2/width^2), normalized to unit mass when `normalized`.
RadialFunction gaussian_bump(const ManifoldModel& model, double width,
                             bool normalized = true);

}  // namespace hmlab
