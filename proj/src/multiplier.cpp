#include "hmlab/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "hmlab/eigen.hpp"
#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

// Average of f over the sphere of radius r0 centered at distance x from the
// basepoint.  H^3 collapses to a one-dimensional integral of f sinh.
cplx sphere_average(const ManifoldModel& model,
                    const RadialInterpolant& f_itp,
                    const CumulativeIntegral* F_sinh, double x, double r0) {
  if (r0 <= 1e-12) return f_itp(x);
  if (x <= 1e-12) return f_itp(r0);
  if (model.dimension() == 3 && F_sinh != nullptr && x >= 0.5) {
    return ((*F_sinh)(x + r0) - (*F_sinh)(std::abs(x - r0))) /
           (2.0 * std::sinh(x) * std::sinh(r0));
  }
  const int n = model.dimension();
  const double ang = ManifoldModel::unit_sphere_area(n - 2) /
                     ManifoldModel::unit_sphere_area(n - 1);
  std::vector<double> tx, tw;
  composite_gauss_legendre(0.0, kPi, 8, 16, tx, tw);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < tx.size(); ++j) {
    const double d = two_center_distance(model, x, r0, tx[j]);
    acc += tw[j] * std::pow(std::sin(tx[j]), n - 2) * f_itp(d);
  }
  return ang * acc;
}

}  // namespace

Multiplier heat_multiplier(double t) {
  if (t <= 0.0) throw InputError("heat multiplier needs t > 0");
  Multiplier m;
  m.kind = MultiplierKind::heat;
  m.t = t;
  m.label = "heat_t" + format_double(t);
  return m;
}

Multiplier sphere_mean_multiplier(double r0) {
  if (r0 <= 0.0) throw InputError("sphere mean multiplier needs r0 > 0");
  Multiplier m;
  m.kind = MultiplierKind::sphere_mean;
  m.r0 = r0;
  m.label = "sphere_r" + format_double(r0);
  return m;
}

Multiplier kernel_multiplier(RadialFunction g, std::string label) {
  Multiplier m;
  m.kind = MultiplierKind::conv_kernel;
  m.kernel = std::move(g);
  m.label = std::move(label);
  return m;
}

Multiplier measure_multiplier(RadialMeasure mu, std::string label) {
  Multiplier m;
  m.kind = MultiplierKind::conv_measure;
  m.measure = std::move(mu);
  m.label = std::move(label);
  return m;
}

Multiplier custom_multiplier(std::function<cplx(cplx)> fn,
                             double strip_halfwidth, std::string label) {
  if (strip_halfwidth <= 0.0)
    throw InputError("custom multiplier needs a positive strip halfwidth");
  Multiplier m;
  m.kind = MultiplierKind::custom_symbol;
  m.symbol_fn = std::move(fn);
  m.declared_strip = strip_halfwidth;
  m.label = std::move(label);
  return m;
}

cplx symbol_eval(const ManifoldModel& model, const Multiplier& mult,
                 cplx lambda) {
  const double rho = model.rho();
  switch (mult.kind) {
    case MultiplierKind::heat:
      return std::exp(-mult.t * (lambda * lambda + rho * rho));
    case MultiplierKind::sphere_mean:
      return eigenfunction_value(model, lambda, mult.r0);
    case MultiplierKind::conv_kernel: {
      const cplx pts[] = {lambda};
      return spherical_transform(model, *mult.kernel, pts).values[0];
    }
    case MultiplierKind::conv_measure:
      return measure_symbol(model, *mult.measure, lambda);
    case MultiplierKind::custom_symbol:
      if (std::abs(lambda.imag()) >= mult.declared_strip)
        throw InputError("custom symbol evaluated outside its declared strip");
      return mult.symbol_fn(lambda);
  }
  throw StateError("symbol_eval: unreachable multiplier kind");
}

std::vector<cplx> symbol_grid(const ManifoldModel& model,
                              const Multiplier& mult) {
  const SpectralState& st = spectral_state(model);
  const std::vector<double>& ls = st.lambdas();
  std::vector<cplx> m(ls.size());
  const double rho = model.rho();
  switch (mult.kind) {
    case MultiplierKind::heat:
      for (std::size_t j = 0; j < ls.size(); ++j)
        m[j] = std::exp(-mult.t * (ls[j] * ls[j] + rho * rho));
      break;
    case MultiplierKind::sphere_mean:
      for (std::size_t j = 0; j < ls.size(); ++j)
        m[j] = st.phi_at(j, mult.r0);
      break;
    case MultiplierKind::conv_kernel:
      m = st.forward(model, *mult.kernel);
      break;
    case MultiplierKind::conv_measure: {
      std::vector<cplx> gh;
      if (mult.measure->density_part)
        gh = st.forward(model, *mult.measure->density_part);
      for (std::size_t j = 0; j < ls.size(); ++j) {
        cplx v = gh.empty() ? cplx(0.0) : gh[j];
        for (const auto& atom : mult.measure->atoms)
          v += atom.mass * st.phi_at(j, atom.r);
        m[j] = v;
      }
      break;
    }
    case MultiplierKind::custom_symbol:
      for (std::size_t j = 0; j < ls.size(); ++j)
        m[j] = mult.symbol_fn(cplx(ls[j], 0.0));
      break;
  }
  return m;
}

double symbol_strip(const ManifoldModel& model, const Multiplier& mult) {
  if (mult.kind == MultiplierKind::custom_symbol) return mult.declared_strip;
  // heat, sphere means and compactly supported kernels have entire symbols;
  // the usable width is capped by the transform's own strip of definition.
  return model.rho();
}

RadialFunction apply_multiplier(const ManifoldModel& model,
                                const Multiplier& mult,
                                const RadialFunction& f) {
  require_same_grid(model, f);
  const SpectralState& st = spectral_state(model);
  std::vector<cplx> fh = st.forward(model, f);
  const std::vector<cplx> m = symbol_grid(model, mult);
  for (std::size_t j = 0; j < fh.size(); ++j) fh[j] *= m[j];
  RadialFunction out = st.inverse(model, fh);
  out.label = mult.label + "(" + f.label + ")";
  return out;
}

RadialFunction apply_multiplier_kernel_side(const ManifoldModel& model,
                                            const Multiplier& mult,
                                            const RadialFunction& f) {
  if (model.kind() != ModelKind::hyperbolic)
    throw UnsupportedModelError(
        "kernel-side application needs a hyperbolic model");
  require_same_grid(model, f);
  const RadialGrid& grid = model.grid();

  RadialFunction out;
  out.grid = model.grid_ptr();
  out.label = mult.label + "[kernel](" + f.label + ")";
  out.values.resize(grid.size());

  switch (mult.kind) {
    case MultiplierKind::heat: {
      RadialFunction h = heat_kernel_profile(model, mult.t);
      out.values = convolve_direct(model, f, h, grid.nodes);
      break;
    }
    case MultiplierKind::conv_kernel:
      out.values = convolve_direct(model, f, *mult.kernel, grid.nodes);
      break;
    case MultiplierKind::sphere_mean: {
      const RadialInterpolant f_itp(grid.nodes, f.values);
      std::optional<CumulativeIntegral> F;
      if (model.dimension() == 3) {
        std::vector<cplx> integrand(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
          integrand[i] = f.values[i] * std::sinh(grid.nodes[i]);
        F.emplace(grid.nodes, integrand, 8);
      }
      parallel_for(grid.size(), [&](std::size_t i) {
        out.values[i] = sphere_average(model, f_itp, F ? &*F : nullptr,
                                       grid.nodes[i], mult.r0);
      });
      break;
    }
    case MultiplierKind::conv_measure: {
      const RadialInterpolant f_itp(grid.nodes, f.values);
      std::optional<CumulativeIntegral> F;
      if (model.dimension() == 3) {
        std::vector<cplx> integrand(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
          integrand[i] = f.values[i] * std::sinh(grid.nodes[i]);
        F.emplace(grid.nodes, integrand, 8);
      }
      std::vector<cplx> dens(grid.size(), cplx(0.0));
      if (mult.measure->density_part)
        dens = convolve_direct(model, f, *mult.measure->density_part,
                               grid.nodes);
      parallel_for(grid.size(), [&](std::size_t i) {
        cplx v = dens[i];
        for (const auto& atom : mult.measure->atoms)
          v += atom.mass * sphere_average(model, f_itp, F ? &*F : nullptr,
                                          grid.nodes[i], atom.r);
        out.values[i] = v;
      });
      break;
    }
    case MultiplierKind::custom_symbol:
      throw InputError("custom symbols have no kernel-side realization");
  }
  return out;
}

RadialFunction heat_kernel_profile(const ManifoldModel& model, double t) {
  if (t <= 0.0) throw InputError("heat_kernel_profile needs t > 0");
  const SpectralState& st = spectral_state(model);
  const std::vector<double>& ls = st.lambdas();
  const double rho = model.rho();
  std::vector<cplx> sym(ls.size());
  for (std::size_t j = 0; j < ls.size(); ++j)
    sym[j] = std::exp(-t * (ls[j] * ls[j] + rho * rho));
  RadialFunction h = st.inverse(model, sym);
  h.label = "heat_kernel_t" + format_double(t);
  return h;
}

std::vector<cplx> extract_symbol(const ManifoldModel& model,
                                 const RadialFunction& f,
                                 const RadialFunction& tf,
                                 std::span<const cplx> lambda_set) {
  SpectralFunction fh = spherical_transform(model, f, lambda_set);
  SpectralFunction th = spherical_transform(model, tf, lambda_set);
  std::vector<cplx> m(lambda_set.size());
  for (std::size_t k = 0; k < lambda_set.size(); ++k) {
    if (std::abs(fh.values[k]) < 1e-9)
      throw NumericalError("extract_symbol: probe transform vanishes at "
                           "lambda = " + format_complex(lambda_set[k]));
    m[k] = th.values[k] / fh.values[k];
  }
  return m;
}

bool nonconstancy_check(const ManifoldModel& model, const Multiplier& mult,
                        double p) {
  const double sp = strip_halfwidth(model, p);
  const double strip = std::min(sp, symbol_strip(model, mult)) * 0.9;
  std::vector<cplx> samples;
  for (int a = 0; a < 8; ++a) {
    const double re = 0.2 + a * (3.0 - 0.2) / 7.0;
    for (int b = 0; b < 8; ++b) {
      const double im = -strip + b * 2.0 * strip / 7.0;
      samples.push_back(symbol_eval(model, mult, cplx(re, im)));
    }
  }
  cplx mean = 0.0;
  double top = 0.0;
  for (cplx v : samples) {
    mean += v;
    top = std::max(top, std::abs(v));
  }
  mean /= double(samples.size());
  double spread = 0.0;
  for (cplx v : samples) spread = std::max(spread, std::abs(v - mean));
  return spread > 1e-9 * (1.0 + top);
}

}  // namespace hmlab
