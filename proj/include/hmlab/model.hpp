#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hmlab/util.hpp"

namespace hmlab {

enum class ModelKind { hyperbolic, custom_density };

// Radial quadrature rule: sum_i w_i g(r_i) ~ int_0^{r_max} g(r) dr.
struct RadialGrid {
  std::vector<double> nodes;    // strictly increasing, in (0, r_max)
  std::vector<double> weights;  // positive
  double r_max = 0.0;

  std::size_t size() const { return nodes.size(); }
};

class SpectralState;  // transform.hpp

// A rotationally symmetric model manifold: sphere-volume density A(r),
// mean-curvature constant rho, dimension, and a radial quadrature grid.
// Handles are cheap shared references; geometric data is immutable after
// construction.  The calibration slot (set once by calibrate_inversion) is
// shared between copies.
class ManifoldModel {
 public:
  ManifoldModel() = default;

  ModelKind kind() const;
  int dimension() const;
  double rho() const;
  double r_max() const;
  const RadialGrid& grid() const;
  std::shared_ptr<const RadialGrid> grid_ptr() const;

  // Sphere-volume density A(r); A(r) ~ omega_{n-1} r^{n-1} as r -> 0.
  double density(double r) const;
  // (log A)'(r) = A'(r)/A(r).
  double log_density_deriv(double r) const;
  // Area of the unit sphere S^k.
  static double unit_sphere_area(int k);

  bool calibrated() const;
  // Internal calibration slot, owned by calibrate_inversion.
  const std::shared_ptr<SpectralState>& spectral_state_slot() const;
  void set_spectral_state(std::shared_ptr<SpectralState> state) const;

  friend ManifoldModel build_model(ModelKind kind, int n, double r_max,
                                   int grid_size);
  friend ManifoldModel build_custom_model(
      int n, double r_max, int grid_size, double rho,
      const std::function<double(double)>& density);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Sampled radial profile u(r_i) on a model grid.
struct RadialFunction {
  std::vector<cplx> values;
  std::shared_ptr<const RadialGrid> grid;
  std::string label;
};

ManifoldModel build_model(ModelKind kind, int n, double r_max, int grid_size);

// Custom-density model; caller asserts the curvature hypotheses hold.
ManifoldModel build_custom_model(int n, double r_max, int grid_size, double rho,
                                 const std::function<double(double)>& density);

// Half-width (1 - 2/p) * rho of the strip S_p.  Requires p > 2; accepts
// p = infinity for the limit value rho.
double strip_halfwidth(const ManifoldModel& model, double p);

// (sum_i w_i |u_i|^p A(r_i))^{1/p}.  Accepts p = infinity as max-norm proxy.
double lp_norm_radial(const ManifoldModel& model, const RadialFunction& f,
                      double p);

// integral of u against the volume element, sum_i w_i u_i A(r_i).
cplx radial_integral(const ManifoldModel& model, const RadialFunction& f);

// Distance between points at radii r and R from the basepoint with angle
// theta between their directions (hyperbolic law of cosines).
double two_center_distance(const ManifoldModel& model, double r, double R,
                           double theta);

// Builds a RadialFunction by sampling fn on the model grid.
RadialFunction make_radial(const ManifoldModel& model,
                           const std::function<cplx(double)>& fn,
                           std::string label = "");

// Throws InputError unless f lives on the model's grid.
void require_same_grid(const ManifoldModel& model, const RadialFunction& f);

}  // namespace hmlab
