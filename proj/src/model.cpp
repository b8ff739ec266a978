#include "hmlab/model.hpp"

#include <cmath>
#include <limits>

#include "hmlab/errors.hpp"

namespace hmlab {

struct ManifoldModel::Impl {
  ModelKind kind = ModelKind::hyperbolic;
  int n = 3;
  double rho = 1.0;
  double r_max = 20.0;
  std::shared_ptr<const RadialGrid> grid;
  std::function<double(double)> custom_density;  // custom models only
  mutable std::shared_ptr<SpectralState> spectral;
};

namespace {

std::shared_ptr<const RadialGrid> build_grid(double r_max, int grid_size) {
  if (grid_size < 16) throw InputError("build_model: grid_size must be >= 16");
  if (grid_size > (1 << 20)) throw InputError("build_model: grid_size too large");
  int order = grid_size / 32;
  order = std::min(order, 32);
  order = std::max(order, 2);
  const int panels = (grid_size + order - 1) / order;
  auto grid = std::make_shared<RadialGrid>();
  grid->r_max = r_max;
  composite_gauss_legendre(0.0, r_max, panels, order, grid->nodes,
                           grid->weights);
  return grid;
}

}  // namespace

ModelKind ManifoldModel::kind() const { return impl_->kind; }
int ManifoldModel::dimension() const { return impl_->n; }
double ManifoldModel::rho() const { return impl_->rho; }
double ManifoldModel::r_max() const { return impl_->r_max; }
const RadialGrid& ManifoldModel::grid() const { return *impl_->grid; }
std::shared_ptr<const RadialGrid> ManifoldModel::grid_ptr() const {
  return impl_->grid;
}

double ManifoldModel::unit_sphere_area(int k) {
  // area of S^k in R^{k+1}
  return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double ManifoldModel::density(double r) const {
  if (r < 0.0) throw InputError("density: r must be >= 0");
  if (impl_->kind == ModelKind::hyperbolic) {
    const int n = impl_->n;
    return unit_sphere_area(n - 1) * std::pow(std::sinh(r), n - 1);
  }
  return impl_->custom_density(r);
}

double ManifoldModel::log_density_deriv(double r) const {
  if (impl_->kind == ModelKind::hyperbolic) {
    return (impl_->n - 1) / std::tanh(r);
  }
  // central difference of log A; custom densities are assumed smooth
  const double h = 1e-5 * (1.0 + r);
  const double lo = std::max(r - h, 1e-9);
  return (std::log(impl_->custom_density(r + h)) -
          std::log(impl_->custom_density(lo))) /
         (r + h - lo);
}

bool ManifoldModel::calibrated() const { return impl_->spectral != nullptr; }

const std::shared_ptr<SpectralState>& ManifoldModel::spectral_state_slot()
    const {
  return impl_->spectral;
}

void ManifoldModel::set_spectral_state(
    std::shared_ptr<SpectralState> state) const {
  impl_->spectral = std::move(state);
}

ManifoldModel build_model(ModelKind kind, int n, double r_max, int grid_size) {
  if (kind != ModelKind::hyperbolic)
    throw InputError("build_model: custom models need build_custom_model");
  if (n < 2) throw InputError("build_model: dimension must be >= 2");
  if (r_max <= 0.0) throw InputError("build_model: r_max must be positive");
  ManifoldModel m;
  m.impl_ = std::make_shared<ManifoldModel::Impl>();
  m.impl_->kind = kind;
  m.impl_->n = n;
  m.impl_->rho = 0.5 * (n - 1);
  m.impl_->r_max = r_max;
  m.impl_->grid = build_grid(r_max, grid_size);
  return m;
}

ManifoldModel build_custom_model(int n, double r_max, int grid_size, double rho,
                                 const std::function<double(double)>& density) {
  if (n < 2) throw InputError("build_custom_model: dimension must be >= 2");
  if (r_max <= 0.0) throw InputError("build_custom_model: r_max must be positive");
  if (rho <= 0.0) throw InputError("build_custom_model: rho must be positive");
  if (!density) throw InputError("build_custom_model: density required");
  ManifoldModel m;
  m.impl_ = std::make_shared<ManifoldModel::Impl>();
  m.impl_->kind = ModelKind::custom_density;
  m.impl_->n = n;
  m.impl_->rho = rho;
  m.impl_->r_max = r_max;
  m.impl_->custom_density = density;
  m.impl_->grid = build_grid(r_max, grid_size);
  for (double r : m.impl_->grid->nodes) {
    if (!(density(r) > 0.0))
      throw ModelError("build_custom_model: density must be positive on (0, r_max]");
  }
  return m;
}

double strip_halfwidth(const ManifoldModel& model, double p) {
  if (std::isinf(p)) return model.rho();
  if (!(p > 2.0))
    throw InputError("strip_halfwidth: requires p > 2");
  return (1.0 - 2.0 / p) * model.rho();
}

void require_same_grid(const ManifoldModel& model, const RadialFunction& f) {
  if (!f.grid || f.grid != model.grid_ptr())
    throw InputError("radial function does not live on this model's grid");
  if (f.values.size() != model.grid().size())
    throw InputError("radial profile length does not match the grid");
}

double lp_norm_radial(const ManifoldModel& model, const RadialFunction& f,
                      double p) {
  require_same_grid(model, f);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw InputError("lp_norm_radial: requires p >= 1");
  const RadialGrid& g = model.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    acc += g.weights[i] * std::pow(std::abs(f.values[i]), p) *
           model.density(g.nodes[i]);
  }
  return std::pow(acc, 1.0 / p);
}

cplx radial_integral(const ManifoldModel& model, const RadialFunction& f) {
  require_same_grid(model, f);
  const RadialGrid& g = model.grid();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    acc += g.weights[i] * f.values[i] * model.density(g.nodes[i]);
  return acc;
}

double two_center_distance(const ManifoldModel& model, double r, double R,
                           double theta) {
  if (model.kind() != ModelKind::hyperbolic)
    throw UnsupportedModelError(
        "two_center_distance: spatial geometry is unknown for custom densities");
  if (r < 0.0 || R < 0.0) throw InputError("two_center_distance: radii must be >= 0");
  if (theta < 0.0 || theta > kPi)
    throw InputError("two_center_distance: theta must lie in [0, pi]");
  const double c = std::cosh(r) * std::cosh(R) -
                   std::sinh(r) * std::sinh(R) * std::cos(theta);
  return std::acosh(std::max(1.0, c));
}

RadialFunction make_radial(const ManifoldModel& model,
                           const std::function<cplx(double)>& fn,
                           std::string label) {
  RadialFunction f;
  f.grid = model.grid_ptr();
  f.label = std::move(label);
  f.values.reserve(model.grid().size());
  for (double r : model.grid().nodes) f.values.push_back(fn(r));
  return f;
}

}  // namespace hmlab
