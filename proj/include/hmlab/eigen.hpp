#pragma once

#include <vector>

#include "hmlab/model.hpp"
#include "hmlab/util.hpp"

namespace hmlab {

// Values and radial derivatives of phi_lambda at requested radii.
struct EigenSolution {
  cplx lambda;
  std::vector<double> radii;
  std::vector<cplx> values;
  std::vector<cplx> derivatives;
  // e^{rho r} phi_lambda at the same radii (the rescaled solution the
  // integrator actually carries; used for c-function asymptotics).
  std::vector<cplx> scaled_values;
};

// Integrates the radial eigen-equation
//   u'' + (A'/A) u' + (lambda^2 + rho^2) u = 0,  u(0) = 1, u'(0) = 0
// with a series startup at the coordinate singularity and output at the
// given radii (sorted ascending, all > 1e-4).
EigenSolution solve_eigenfunction_at(const ManifoldModel& model, cplx lambda,
                                     std::vector<double> radii,
                                     double tol = 1e-12);

struct RadialEigenfunction {
  cplx lambda;
  std::vector<cplx> values;             // on the model grid
  std::vector<cplx> derivative_values;  // on the model grid
  // max over check radii of |u'' + (A'/A)u' + (lambda^2+rho^2)u|, the second
  // derivative taken by finite differences of the computed values,
  // normalized by (1 + |lambda|^2).
  double ode_residual = 0.0;
};

RadialEigenfunction radial_eigenfunction(const ManifoldModel& model,
                                         cplx lambda);

// phi_lambda(r) at a single radius.
cplx eigenfunction_value(const ManifoldModel& model, cplx lambda, double r);

// The profile of phi_lambda as a RadialFunction on the model grid.
RadialFunction eigenfunction_profile(const ManifoldModel& model, cplx lambda);

struct CFunctionSample {
  double lambda = 0.0;
  cplx c_value;
  double fit_residual = 0.0;
};

// Extracts c(lambda) from the large-r asymptotics
//   phi_lambda(r) e^{rho r} ~ c(lambda) e^{i lambda r} + c(-lambda) e^{-i lambda r}
// by a 2x2 linear fit at two radii near r_max; the residual is the relative
// mismatch of the fit re-evaluated at a third radius.
CFunctionSample c_function(const ManifoldModel& model, double lambda);

namespace detail {
CFunctionSample fit_c_from_scaled(double lambda, double r1, double r2,
                                  double r3, cplx w1, cplx w2, cplx w3);
double pick_c_fit_radius(double lambda, double r1, double r_max);
}  // namespace detail

}  // namespace hmlab
