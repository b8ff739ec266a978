#include "hmlab/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "hmlab/eigen.hpp"
#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

RadialInterpolant interpolant_of(const RadialFunction& f) {
  return RadialInterpolant(f.grid->nodes, f.values);
}

double angular_constant(const ManifoldModel& model) {
  const int n = model.dimension();
  return ManifoldModel::unit_sphere_area(n - 2) /
         ManifoldModel::unit_sphere_area(n - 1);
}

// Generic double quadrature over (y, theta); used off the exact H^3 path.
cplx direct_at_theta_grid(const ManifoldModel& model,
                          const RadialFunction& f,
                          const RadialInterpolant& g_itp, double x) {
  const RadialGrid& grid = *f.grid;
  const int n = model.dimension();
  const int n_theta = 128;
  std::vector<double> tx, tw;
  composite_gauss_legendre(0.0, kPi, n_theta / 16, 16, tx, tw);
  const double ang = angular_constant(model);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.nodes[i];
    cplx inner = 0.0;
    for (std::size_t j = 0; j < tx.size(); ++j) {
      const double d = two_center_distance(model, x, y, tx[j]);
      inner += tw[j] * std::pow(std::sin(tx[j]), n - 2) * g_itp(d);
    }
    acc += grid.weights[i] * model.density(y) * f.values[i] * ang * inner;
  }
  return acc;
}

}  // namespace

double total_variation(const ManifoldModel& model, const RadialMeasure& mu) {
  double tv = 0.0;
  for (const auto& atom : mu.atoms) tv += std::abs(atom.mass);
  if (mu.density_part) tv += lp_norm_radial(model, *mu.density_part, 1.0);
  return tv;
}

RadialFunction convolve_radial(const ManifoldModel& model,
                               const RadialFunction& f,
                               const RadialFunction& g) {
  require_same_grid(model, f);
  require_same_grid(model, g);
  const SpectralState& st = spectral_state(model);
  std::vector<cplx> fh = st.forward(model, f);
  std::vector<cplx> gh = st.forward(model, g);
  for (std::size_t j = 0; j < fh.size(); ++j) fh[j] *= gh[j];
  RadialFunction out = st.inverse(model, fh);
  out.label = f.label + "*" + g.label;
  return out;
}

std::vector<cplx> convolve_direct(const ManifoldModel& model,
                                  const RadialFunction& f,
                                  const RadialFunction& g,
                                  std::span<const double> eval_distances) {
  if (model.kind() != ModelKind::hyperbolic)
    throw UnsupportedModelError("convolve_direct needs a hyperbolic model");
  require_same_grid(model, f);
  require_same_grid(model, g);
  const RadialGrid& grid = model.grid();
  const RadialInterpolant g_itp = interpolant_of(g);

  std::vector<cplx> out(eval_distances.size());
  if (model.dimension() == 3) {
    // In H^3 the sphere average of g collapses to a one-dimensional
    // integral: with G(d) = int_0^d g(s) sinh s ds,
    //   (f*g)(x) = (2 pi / sinh x) int sinh y f(y) [G(x+y) - G(|x-y|)] dy.
    std::vector<cplx> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      integrand[i] = g.values[i] * std::sinh(grid.nodes[i]);
    const CumulativeIntegral G(grid.nodes, integrand, 8);
    parallel_for(eval_distances.size(), [&](std::size_t k) {
      const double x = eval_distances[k];
      if (x < 0.5) {  // difference quotient loses digits near the basepoint
        out[k] = direct_at_theta_grid(model, f, g_itp, x);
        return;
      }
      cplx acc = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid.nodes[i];
        acc += grid.weights[i] * std::sinh(y) * f.values[i] *
               (G(x + y) - G(std::abs(x - y)));
      }
      out[k] = 2.0 * kPi / std::sinh(x) * acc;
    });
  } else {
    parallel_for(eval_distances.size(), [&](std::size_t k) {
      out[k] = direct_at_theta_grid(model, f, g_itp, eval_distances[k]);
    });
  }
  return out;
}

std::vector<cplx> convolve_direct(const ManifoldModel& model,
                                  const AxialField& f, const RadialFunction& g,
                                  std::span<const double> eval_distances) {
  if (model.kind() != ModelKind::hyperbolic)
    throw UnsupportedModelError("convolve_direct needs a hyperbolic model");
  require_same_grid(model, g);
  const RadialGrid& grid = *f.grid;
  const int n = model.dimension();
  const double ang = angular_constant(model);
  const RadialInterpolant g_itp = interpolant_of(g);

  std::vector<cplx> out(eval_distances.size());
  parallel_for(eval_distances.size(), [&](std::size_t k) {
    const double x = eval_distances[k];
    cplx acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double y = grid.nodes[i];
      cplx inner = 0.0;
      for (std::size_t j = 0; j < f.theta_nodes.size(); ++j) {
        const double th = f.theta_nodes[j];
        const double d = two_center_distance(model, x, y, th);
        inner += f.theta_weights[j] * std::pow(std::sin(th), n - 2) *
                 f.at(i, j) * g_itp(d);
      }
      acc += grid.weights[i] * model.density(y) * ang * inner;
    }
    out[k] = acc;
  });
  return out;
}

cplx measure_symbol(const ManifoldModel& model, const RadialMeasure& mu,
                    cplx lambda) {
  cplx m = 0.0;
  for (const auto& atom : mu.atoms) {
    if (atom.r < 0.0 || atom.r >= model.r_max())
      throw InputError("measure atom radius outside [0, r_max)");
    m += atom.mass * eigenfunction_value(model, lambda, atom.r);
  }
  if (mu.density_part) {
    const cplx pts[] = {lambda};
    m += spherical_transform(model, *mu.density_part, pts).values[0];
  }
  return m;
}

RadialFunction convolve_measure(const ManifoldModel& model,
                                const RadialFunction& f,
                                const RadialMeasure& mu) {
  require_same_grid(model, f);
  for (const auto& atom : mu.atoms)
    if (atom.r < 0.0 || atom.r > 0.5 * model.r_max())
      throw InputError(
          "measure atoms must sit inside r_max/2 so the convolution stays "
          "resolved on the grid");
  const SpectralState& st = spectral_state(model);
  std::vector<cplx> fh = st.forward(model, f);
  std::vector<cplx> gh;
  if (mu.density_part) {
    require_same_grid(model, *mu.density_part);
    gh = st.forward(model, *mu.density_part);
  }
  for (std::size_t j = 0; j < fh.size(); ++j) {
    cplx m = gh.empty() ? cplx(0.0) : gh[j];
    for (const auto& atom : mu.atoms) m += atom.mass * st.phi_at(j, atom.r);
    fh[j] *= m;
  }
  RadialFunction out = st.inverse(model, fh);
  out.label = f.label + "*mu";
  return out;
}

YoungReport young_bound_check(const ManifoldModel& model,
                              const RadialFunction& f, const RadialFunction& g,
                              double p) {
  RadialFunction conv = convolve_radial(model, f, g);
  YoungReport rep;
  rep.lhs = lp_norm_radial(model, conv, p);
  rep.rhs = lp_norm_radial(model, f, p) * lp_norm_radial(model, g, 1.0);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-8) + 1e-10;
  return rep;
}

RadialFunction gaussian_bump(const ManifoldModel& model, double width,
                             bool normalized) {
  if (width <= 0.0) throw InputError("gaussian_bump: width must be positive");
  RadialFunction f = make_radial(
      model,
      [&](double r) { return std::exp(-r * r / (width * width)); },
      "gauss_w" + format_double(width));
  if (normalized) {
    const double mass = radial_integral(model, f).real();
    for (cplx& v : f.values) v /= mass;
  }
  return f;
}

}  // namespace hmlab
