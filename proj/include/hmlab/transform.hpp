#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmlab/eigen.hpp"
#include "hmlab/model.hpp"

namespace hmlab {

// Spectral samples f_hat(lambda_j).
struct SpectralFunction {
  std::vector<cplx> lambda_nodes;
  std::vector<cplx> values;
  double strip_halfwidth = 0.0;  // largest verified strip of holomorphy
  std::string source_label;
  double tail_estimate = 0.0;  // truncation indicator from the quadrature
};

struct SpectralSetup {
  double lambda_max = 50.0;
  std::size_t num_nodes = 2048;
  double ode_tol = 1e-12;
};

// Precomputed spectral machinery for one model: the real spectral grid,
// the eigenfunction table phi_{lambda_j}(r_i), the Plancherel density
// |c(lambda_j)|^{-2}, and the calibration constant kappa fixing the
// inversion normalization.  Built once per model by calibrate_inversion and
// read-only afterwards.
class SpectralState {
 public:
  SpectralState(const ManifoldModel& model, SpectralSetup setup);

  const std::vector<double>& lambdas() const { return lambdas_; }
  const SpectralSetup& setup() const { return setup_; }
  double kappa() const { return kappa_; }
  double calibration_defect() const { return defect_; }
  double inv_c_sq(std::size_t j) const { return inv_c_sq_[j]; }
  // phi_{lambda_j} at grid node i
  double phi(std::size_t j, std::size_t i) const {
    return phi_[j * grid_size_ + i];
  }
  // phi_{lambda_j}(r) by local polynomial interpolation in r
  double phi_at(std::size_t j, double r) const;

  std::vector<cplx> forward(const ManifoldModel& model,
                            const RadialFunction& f) const;
  RadialFunction inverse(const ManifoldModel& model,
                         std::span<const cplx> values) const;

  // least-squares kappa against a reference bump; optional external weight
  // replaces kappa * |c|^{-2}.
  void calibrate(const ManifoldModel& model,
                 const std::function<double(double)>& external_weight = {});

 private:
  double quad_weight(std::size_t j) const;  // trapezoid x Plancherel density

  SpectralSetup setup_;
  std::size_t grid_size_ = 0;
  std::vector<double> r_nodes_;
  std::vector<double> lambdas_;
  std::vector<double> phi_;       // num_nodes x grid_size
  std::vector<double> inv_c_sq_;  // |c(lambda_j)|^{-2}
  std::vector<double> ext_weight_;  // optional external Plancherel weight
  std::vector<double> node_wA_;   // w_i A(r_i) on the radial grid
  double kappa_ = -1.0;
  double defect_ = -1.0;
};

// Calibrates the model's inversion normalization; returns kappa.  Idempotent
// (re-running with the same setup returns the stored constant).
double calibrate_inversion(const ManifoldModel& model, SpectralSetup setup = {},
                           const std::function<double(double)>& external_weight = {});

// kappa * |c(lambda)|^{-2}; requires a calibrated model.
double plancherel_weight(const ManifoldModel& model, double lambda);

// Throws StateError if calibrate_inversion has not run.
const SpectralState& spectral_state(const ManifoldModel& model);

// f_hat(lambda) = int_0^inf u(r) phi_lambda(r) A(r) dr at arbitrary spectral
// points inside |Im lambda| < rho.
SpectralFunction spherical_transform(const ManifoldModel& model,
                                     const RadialFunction& f,
                                     std::span<const cplx> lambda_set);

// Forward transform on the model's real spectral grid.
SpectralFunction spherical_transform_grid(const ManifoldModel& model,
                                          const RadialFunction& f);

// f(r) = int_0^Lmax f_hat(lambda) phi_lambda(r) kappa |c(lambda)|^{-2} dlambda.
// The spectral samples must live on the model's spectral grid.
RadialFunction inverse_transform(const ManifoldModel& model,
                                 const SpectralFunction& spec);

// Max Cauchy-integral defect of f_hat over test points in S_p (default set
// spans the strip interior).  Small defect certifies holomorphy at test
// resolution.
double holomorphy_check(const ManifoldModel& model, const RadialFunction& f,
                        double p, std::span<const cplx> test_points = {});

// Axially symmetric field around the geodesic through the basepoint and the
// translate center, sampled on (r_i, theta_j).
struct AxialField {
  double center_distance = 0.0;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> theta_nodes;    // Gauss-Legendre on [0, pi]
  std::vector<double> theta_weights;
  std::vector<cplx> values;  // row-major: values[i * ntheta + j]

  cplx at(std::size_t i, std::size_t j) const {
    return values[i * theta_nodes.size() + j];
  }
};

// tau_R f: the translate of a radial function to the point at distance R
// along the reference geodesic (hyperbolic models only).
AxialField translate_radial(const ManifoldModel& model, const RadialFunction& f,
                            double R, int n_theta = 128);

double axial_lp_norm(const ManifoldModel& model, const AxialField& field,
                     double p);

// Spherical transform of an axial field based at its own center: pairs the
// field with phi_lambda(distance from the center).  Real lambda.
cplx axial_transform_at_center(const ManifoldModel& model,
                               const AxialField& field, double lambda);

}  // namespace hmlab
