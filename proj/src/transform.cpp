#include "hmlab/transform.hpp"

#include <algorithm>
#include <cmath>

#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

void theta_rule(int n_theta, std::vector<double>& nodes,
                std::vector<double>& weights) {
  std::vector<double> x, w;
  gauss_legendre(n_theta, x, w);
  nodes.resize(n_theta);
  weights.resize(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    nodes[k] = 0.5 * kPi * (x[k] + 1.0);
    weights[k] = 0.5 * kPi * w[k];
  }
}

double angular_constant(const ManifoldModel& model) {
  const int n = model.dimension();
  return ManifoldModel::unit_sphere_area(n - 2) /
         ManifoldModel::unit_sphere_area(n - 1);
}

}  // namespace

SpectralState::SpectralState(const ManifoldModel& model, SpectralSetup setup)
    : setup_(setup) {
  if (setup_.num_nodes < 8)
    throw InputError("SpectralState: need at least 8 spectral nodes");
  const RadialGrid& grid = model.grid();
  grid_size_ = grid.size();
  const std::size_t N = setup_.num_nodes;
  lambdas_.resize(N);
  const double dl = setup_.lambda_max / static_cast<double>(N - 1);
  for (std::size_t j = 0; j < N; ++j) lambdas_[j] = dl * static_cast<double>(j);

  node_wA_.resize(grid_size_);
  for (std::size_t i = 0; i < grid_size_; ++i)
    node_wA_[i] = grid.weights[i] * model.density(grid.nodes[i]);
  r_nodes_ = grid.nodes;

  phi_.assign(N * grid_size_, 0.0);
  inv_c_sq_.assign(N, 0.0);

  const double r_max = model.r_max();
  const double r1 = 0.8 * r_max;
  const double r3 = 0.85 * r_max;

  parallel_for(N, [&](std::size_t j) {
    const double lambda = lambdas_[j];
    const double r2 =
        lambda > 0.0 ? detail::pick_c_fit_radius(lambda, r1, r_max) : 0.9 * r_max;
    std::vector<double> radii = grid.nodes;
    radii.push_back(r1);
    radii.push_back(r3);
    radii.push_back(r2);
    std::sort(radii.begin(), radii.end());
    for (std::size_t k = 1; k < radii.size(); ++k)
      if (radii[k] <= radii[k - 1])
        radii[k] = std::nextafter(radii[k - 1], 1e300);

    EigenSolution sol = solve_eigenfunction_at(model, cplx(lambda, 0.0), radii,
                                               setup_.ode_tol);
    auto scaled_at = [&](double r) {
      const auto it = std::lower_bound(radii.begin(), radii.end(), r);
      return sol.scaled_values[static_cast<std::size_t>(it - radii.begin())];
    };
    // fill the table row (grid nodes are a subsequence of radii)
    std::size_t gi = 0;
    for (std::size_t k = 0; k < radii.size() && gi < grid_size_; ++k) {
      if (radii[k] == grid.nodes[gi]) {
        phi_[j * grid_size_ + gi] = sol.values[k].real();
        ++gi;
      }
    }
    if (gi != grid_size_)
      throw NumericalError("SpectralState: grid bookkeeping error");

    if (lambda >= 0.02) {
      CFunctionSample c = detail::fit_c_from_scaled(
          lambda, r1, r2, r3, scaled_at(r1), scaled_at(r2), scaled_at(r3));
      inv_c_sq_[j] = 1.0 / std::norm(c.c_value);
    }
  });

  // |c|^{-2} vanishes quadratically at lambda = 0; extend the fitted values
  // below the reliable fit range by the quadratic law.
  std::size_t j_ref = 0;
  while (j_ref < N && lambdas_[j_ref] < 0.05) ++j_ref;
  if (j_ref >= N) throw NumericalError("SpectralState: spectral grid too small");
  for (std::size_t j = 0; j < j_ref; ++j) {
    const double ratio = lambdas_[j] / lambdas_[j_ref];
    inv_c_sq_[j] = inv_c_sq_[j_ref] * ratio * ratio;
  }
}

double SpectralState::phi_at(std::size_t j, double r) const {
  // 4-point Lagrange interpolation on the table row
  const std::size_t n = r_nodes_.size();
  if (r <= r_nodes_.front()) {
    // phi(0) = 1 with zero slope; quadratic through the first samples is
    // overkill for the r -> 0 clamp used here
    return phi(j, 0);
  }
  if (r >= r_nodes_.back()) return phi(j, n - 1);
  auto it = std::upper_bound(r_nodes_.begin(), r_nodes_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - r_nodes_.begin());
  std::size_t lo = (i >= 2) ? i - 2 : 0;
  if (lo + 4 > n) lo = n - 4;
  double result = 0.0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (b != a) w *= (r - r_nodes_[b]) / (r_nodes_[a] - r_nodes_[b]);
    result += w * phi(j, a);
  }
  return result;
}

double SpectralState::quad_weight(std::size_t j) const {
  const std::size_t N = lambdas_.size();
  const double dl = lambdas_[1] - lambdas_[0];
  const double trap = (j == 0 || j == N - 1) ? 0.5 * dl : dl;
  const double density = ext_weight_.empty() ? inv_c_sq_[j] : ext_weight_[j];
  return trap * kappa_ * density;
}

std::vector<cplx> SpectralState::forward(const ManifoldModel& model,
                                         const RadialFunction& f) const {
  require_same_grid(model, f);
  const std::size_t N = lambdas_.size();
  std::vector<cplx> out(N);
  parallel_for(N, [&](std::size_t j) {
    cplx acc = 0.0;
    const double* row = &phi_[j * grid_size_];
    for (std::size_t i = 0; i < grid_size_; ++i)
      acc += node_wA_[i] * row[i] * f.values[i];
    out[j] = acc;
  });
  return out;
}

RadialFunction SpectralState::inverse(const ManifoldModel& model,
                                      std::span<const cplx> values) const {
  if (kappa_ <= 0.0)
    throw StateError("inverse_transform: model is not calibrated");
  const std::size_t N = lambdas_.size();
  if (values.size() != N)
    throw InputError("inverse: spectral samples must live on the model grid");

  double max_integrand = 0.0;
  for (std::size_t j = 0; j < N; ++j)
    max_integrand = std::max(max_integrand, std::abs(values[j]) * quad_weight(j));
  const double tail = std::abs(values[N - 1]) * quad_weight(N - 1);
  if (tail > 1e-6 * (1.0 + max_integrand))
    throw NumericalError(
        "inverse_transform: spectral tail too large at lambda_max "
        "(truncation error)");

  RadialFunction out;
  out.grid = model.grid_ptr();
  out.values.assign(grid_size_, 0.0);
  std::vector<double> W(N);
  for (std::size_t j = 0; j < N; ++j) W[j] = quad_weight(j);
  parallel_for(grid_size_, [&](std::size_t i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += W[j] * values[j] * phi_[j * grid_size_ + i];
    out.values[i] = acc;
  });
  return out;
}

void SpectralState::calibrate(const ManifoldModel& model,
                              const std::function<double(double)>& external_weight) {
  ext_weight_.clear();
  if (external_weight) {
    ext_weight_.resize(lambdas_.size());
    for (std::size_t j = 0; j < lambdas_.size(); ++j)
      ext_weight_[j] = external_weight(lambdas_[j]);
  }
  RadialFunction ref = make_radial(model, [](double r) {
    return cplx(std::exp(-r * r), 0.0);
  });
  std::vector<cplx> spec = forward(model, ref);
  kappa_ = 1.0;
  RadialFunction back = inverse(model, spec);
  // round trip is linear in kappa: closed-form least squares
  double num = 0.0, den = 0.0, norm_f = 0.0;
  for (std::size_t i = 0; i < grid_size_; ++i) {
    const double g = back.values[i].real();
    const double fv = ref.values[i].real();
    num += node_wA_[i] * g * fv;
    den += node_wA_[i] * g * g;
    norm_f += node_wA_[i] * fv * fv;
  }
  if (den <= 0.0) throw NumericalError("calibration: degenerate round trip");
  kappa_ = num / den;
  double defect2 = 0.0;
  for (std::size_t i = 0; i < grid_size_; ++i) {
    const double d = kappa_ * back.values[i].real() - ref.values[i].real();
    defect2 += node_wA_[i] * d * d;
  }
  defect_ = std::sqrt(defect2 / norm_f);
  if (defect_ >= 1e-3)
    throw NumericalError("calibration: round-trip defect " +
                         format_double(defect_) + " exceeds 1e-3");
}

double calibrate_inversion(const ManifoldModel& model, SpectralSetup setup,
                           const std::function<double(double)>& external_weight) {
  if (model.calibrated()) return model.spectral_state_slot()->kappa();
  auto state = std::make_shared<SpectralState>(model, setup);
  state->calibrate(model, external_weight);
  model.set_spectral_state(state);
  return state->kappa();
}

const SpectralState& spectral_state(const ManifoldModel& model) {
  if (!model.calibrated())
    throw StateError("model is not calibrated; run calibrate_inversion first");
  return *model.spectral_state_slot();
}

double plancherel_weight(const ManifoldModel& model, double lambda) {
  const SpectralState& st = spectral_state(model);
  return st.kappa() / std::norm(c_function(model, lambda).c_value);
}

SpectralFunction spherical_transform(const ManifoldModel& model,
                                     const RadialFunction& f,
                                     std::span<const cplx> lambda_set) {
  require_same_grid(model, f);
  const RadialGrid& grid = model.grid();
  for (const cplx& l : lambda_set) {
    if (std::abs(l.imag()) >= model.rho())
      throw InputError(
          "spherical_transform: lambda must satisfy |Im lambda| < rho");
  }
  SpectralFunction out;
  out.lambda_nodes.assign(lambda_set.begin(), lambda_set.end());
  out.values.resize(lambda_set.size());
  out.source_label = f.label;
  double max_im = 0.0;
  for (const cplx& l : lambda_set) max_im = std::max(max_im, std::abs(l.imag()));
  out.strip_halfwidth = max_im;

  std::vector<double> tails(lambda_set.size(), 0.0);
  parallel_for(lambda_set.size(), [&](std::size_t k) {
    EigenSolution sol =
        solve_eigenfunction_at(model, lambda_set[k], grid.nodes);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      acc += grid.weights[i] * model.density(grid.nodes[i]) * sol.values[i] *
             f.values[i];
    out.values[k] = acc;
    const std::size_t last = grid.size() - 1;
    tails[k] = std::abs(grid.weights[last] * model.density(grid.nodes[last]) *
                        sol.values[last] * f.values[last]);
  });
  for (std::size_t k = 0; k < lambda_set.size(); ++k) {
    out.tail_estimate = std::max(out.tail_estimate, tails[k]);
    if (tails[k] > 1e-6 * (1.0 + std::abs(out.values[k])))
      throw NumericalError(
          "spherical_transform: truncated integrand tail exceeds 1e-6 at "
          "lambda = " + format_complex(out.lambda_nodes[k]));
  }
  return out;
}

SpectralFunction spherical_transform_grid(const ManifoldModel& model,
                                          const RadialFunction& f) {
  const SpectralState& st = spectral_state(model);
  SpectralFunction out;
  out.lambda_nodes.reserve(st.lambdas().size());
  for (double l : st.lambdas()) out.lambda_nodes.push_back(cplx(l, 0.0));
  out.values = st.forward(model, f);
  out.source_label = f.label;
  return out;
}

RadialFunction inverse_transform(const ManifoldModel& model,
                                 const SpectralFunction& spec) {
  const SpectralState& st = spectral_state(model);
  const auto& ls = st.lambdas();
  if (spec.lambda_nodes.size() != ls.size())
    throw InputError(
        "inverse_transform: spectral samples must live on the model's "
        "spectral grid");
  for (std::size_t j = 0; j < ls.size(); ++j) {
    if (std::abs(spec.lambda_nodes[j] - cplx(ls[j], 0.0)) > 1e-9)
      throw InputError("inverse_transform: spectral node mismatch");
  }
  RadialFunction out = st.inverse(model, spec.values);
  out.label = spec.source_label.empty() ? "inverse" : spec.source_label;
  return out;
}

double holomorphy_check(const ManifoldModel& model, const RadialFunction& f,
                        double p, std::span<const cplx> test_points) {
  const double sp = strip_halfwidth(model, p);
  std::vector<cplx> centers(test_points.begin(), test_points.end());
  if (centers.empty()) {
    centers = {cplx(0.0, 0.0), cplx(0.0, 0.6 * sp), cplx(0.0, -0.6 * sp),
               cplx(1.0, 0.3 * sp), cplx(2.0, -0.3 * sp)};
  }
  const double radius = 0.35 * sp;
  const int n_circle = 32;

  std::vector<cplx> batch;
  for (const cplx& c : centers) {
    if (std::abs(c.imag()) + radius >= sp)
      throw InputError("holomorphy_check: contour circle exits the strip S_p");
    batch.push_back(c);
    for (int k = 0; k < n_circle; ++k) {
      const double th = 2.0 * kPi * k / n_circle;
      batch.push_back(c + radius * cplx(std::cos(th), std::sin(th)));
    }
  }
  SpectralFunction vals = spherical_transform(model, f, batch);
  double worst = 0.0;
  std::size_t idx = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const cplx direct = vals.values[idx++];
    cplx mean = 0.0;
    for (int k = 0; k < n_circle; ++k) mean += vals.values[idx++];
    mean /= static_cast<double>(n_circle);
    worst = std::max(worst, std::abs(direct - mean));
  }
  return worst;
}

AxialField translate_radial(const ManifoldModel& model, const RadialFunction& f,
                            double R, int n_theta) {
  if (model.kind() != ModelKind::hyperbolic)
    throw UnsupportedModelError(
        "translate_radial: translation needs hyperbolic geometry");
  if (R < 0.0) throw InputError("translate_radial: R must be >= 0");
  require_same_grid(model, f);
  const RadialGrid& grid = model.grid();

  AxialField field;
  field.center_distance = R;
  field.grid = model.grid_ptr();
  theta_rule(n_theta, field.theta_nodes, field.theta_weights);
  field.values.resize(grid.size() * static_cast<std::size_t>(n_theta));

  RadialInterpolant interp(grid.nodes, f.values);
  parallel_for(grid.size(), [&](std::size_t i) {
    for (int j = 0; j < n_theta; ++j) {
      const double d =
          two_center_distance(model, grid.nodes[i], R, field.theta_nodes[j]);
      field.values[i * n_theta + j] = interp(d);
    }
  });
  return field;
}

double axial_lp_norm(const ManifoldModel& model, const AxialField& field,
                     double p) {
  const RadialGrid& grid = model.grid();
  const std::size_t nt = field.theta_nodes.size();
  if (field.grid != model.grid_ptr())
    throw InputError("axial_lp_norm: field does not live on this model's grid");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : field.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw InputError("axial_lp_norm: requires p >= 1");
  const int n = model.dimension();
  const double angc = angular_constant(model);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double wa = grid.weights[i] * model.density(grid.nodes[i]);
    double th_acc = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      th_acc += field.theta_weights[j] *
                std::pow(std::sin(field.theta_nodes[j]), n - 2) *
                std::pow(std::abs(field.at(i, j)), p);
    }
    acc += wa * angc * th_acc;
  }
  return std::pow(acc, 1.0 / p);
}

cplx axial_transform_at_center(const ManifoldModel& model,
                               const AxialField& field, double lambda) {
  const RadialGrid& grid = model.grid();
  const std::size_t nt = field.theta_nodes.size();
  const double R = field.center_distance;
  // phi_lambda out to the largest distance the quadrature can reach
  const double d_max = grid.r_max + R + 1.0;
  std::vector<double> radii;
  const int n_phi = 4096;
  radii.reserve(n_phi);
  for (int k = 1; k <= n_phi; ++k)
    radii.push_back(d_max * k / static_cast<double>(n_phi));
  EigenSolution sol =
      solve_eigenfunction_at(model, cplx(lambda, 0.0), radii);
  RadialInterpolant phi(radii, sol.values, sol.derivatives);

  const int n = model.dimension();
  const double angc = angular_constant(model);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double wa = grid.weights[i] * model.density(grid.nodes[i]);
    cplx th_acc = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const double d =
          two_center_distance(model, grid.nodes[i], R, field.theta_nodes[j]);
      th_acc += field.theta_weights[j] *
                std::pow(std::sin(field.theta_nodes[j]), n - 2) *
                field.at(i, j) * phi(d);
    }
    acc += wa * angc * th_acc;
  }
  return acc;
}

}  // namespace hmlab
