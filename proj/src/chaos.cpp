#include "hmlab/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmlab/eigen.hpp"
#include "hmlab/errors.hpp"

namespace hmlab {

Rotation make_rotation(long long num, long long den) {
  if (den == 0) throw InputError("rotation denominator must be nonzero");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rotation{num, den};
}

Rotation parse_rotation(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return make_rotation(std::stoll(s), 1);
    return make_rotation(std::stoll(s.substr(0, slash)),
                         std::stoll(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw InputError("cannot parse rotation '" + s + "' (expected P/Q)");
  }
}

std::string format_rotation(Rotation r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::mixing_certified: return "mixing_certified";
    case Verdict::periodic_certified: return "periodic_certified";
    case Verdict::chaotic_certified: return "chaotic_certified";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double chaos_threshold(const ManifoldModel& model, double p) {
  if (!(p > 2.0)) throw InputError("chaos_threshold needs p > 2");
  const double rho = model.rho();
  const double q = p / (p - 1.0);
  return 4.0 * rho * rho / (p * q);
}

cplx solve_strip_parameter(const ManifoldModel& model, double p, cplx c) {
  const double cp = chaos_threshold(model, p);
  if (!(c.real() > cp))
    throw InputError("solve_strip_parameter: Re c = " +
                     format_double(c.real()) + " is not above the threshold " +
                     format_double(cp));
  const double rho = model.rho();
  const double t_max = strip_halfwidth(model, p);
  // At t -> t_max the constraint gives s^2 -> Re c - c_p > 0, so feasibility
  // always lies toward the strip edge.
  double t = 0.8 * t_max;
  for (int it = 0; it < 200; ++it) {
    const double s_sq = c.real() + t * t - rho * rho;
    if (s_sq > 0.0) return cplx(std::sqrt(s_sq), t);
    t = t_max - 0.5 * (t_max - t);
  }
  throw NumericalError("solve_strip_parameter: no feasible t located");
}

namespace {

cplx ratio_to_nu(const ManifoldModel& model, const Multiplier& mult, cplx nu,
                 cplx lambda) {
  return symbol_eval(model, mult, lambda) / nu;
}

double usable_strip(const ManifoldModel& model, const Multiplier& mult,
                    double p) {
  return std::min(strip_halfwidth(model, p), symbol_strip(model, mult));
}

}  // namespace

ChaosCertificate certify_mixing(const ManifoldModel& model,
                                const Multiplier& mult, cplx nu, cplx lambda0,
                                double p) {
  if (!(p > 2.0)) throw InputError("certify_mixing needs p > 2");
  const double strip = usable_strip(model, mult, p);
  if (std::abs(lambda0.imag()) >= strip)
    throw InputError("certify_mixing: lambda0 lies outside S_p");
  const cplx m0 = symbol_eval(model, mult, lambda0);
  if (std::abs(m0) == 0.0)
    throw InputError("certify_mixing: symbol vanishes at lambda0");
  if (std::abs(std::abs(nu) - std::abs(m0)) > 1e-10)
    throw InputError("certify_mixing: |nu| must equal |m(lambda0)|");
  if (!nonconstancy_check(model, mult, p))
    throw InputError(
        "certify_mixing: symbol is constant on S_p at sample resolution");

  ChaosCertificate cert;
  cert.nu = nu;
  cert.lambda0 = lambda0;
  cert.p = p;
  cert.margin = 1e-3;

  const double edge_dist = strip - std::abs(lambda0.imag());
  const double r0 = 0.8 * std::min(edge_dist, 1.0);
  std::vector<cplx> pts;
  for (int level = 0; level < 3; ++level) {
    const double rad = r0 / double(1 << level);
    for (int k = 0; k < 24; ++k) {
      const double th = 2.0 * kPi * k / 24.0;
      const cplx z = lambda0 + rad * cplx(std::cos(th), std::sin(th));
      if (std::abs(z.imag()) < strip) pts.push_back(z);
    }
  }
  std::vector<double> ratios(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    ratios[k] = std::abs(ratio_to_nu(model, mult, nu, pts[k]));
  });
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (ratios[k] <= 1.0 - cert.margin)
      cert.u_plus.push_back(pts[k]);
    else if (ratios[k] >= 1.0 + cert.margin)
      cert.u_minus.push_back(pts[k]);
  }
  cert.verdict = (!cert.u_plus.empty() && !cert.u_minus.empty())
                     ? Verdict::mixing_certified
                     : Verdict::inconclusive;
  return cert;
}

std::vector<UnimodularRoot> find_unimodular_roots(
    const ManifoldModel& model, const Multiplier& mult, cplx nu, cplx lambda0,
    std::span<const Rotation> rotations, double p) {
  if (!(p > 2.0)) throw InputError("find_unimodular_roots needs p > 2");
  const double strip = usable_strip(model, mult, p);
  const double sp = strip_halfwidth(model, p);

  // shared coarse sampling of the strip around lambda0
  const double re_lo = std::max(0.05, lambda0.real() - 3.0);
  const double re_hi = lambda0.real() + 3.0;
  const int n_re = 17, n_im = 9;
  std::vector<cplx> seeds_grid;
  for (int a = 0; a < n_re; ++a)
    for (int b = 0; b < n_im; ++b)
      seeds_grid.push_back(
          cplx(re_lo + a * (re_hi - re_lo) / (n_re - 1),
               -0.9 * strip + b * 1.8 * strip / (n_im - 1)));
  seeds_grid.push_back(lambda0);
  std::vector<cplx> m_grid(seeds_grid.size());
  parallel_for(seeds_grid.size(), [&](std::size_t k) {
    m_grid[k] = symbol_eval(model, mult, seeds_grid[k]);
  });

  auto eval = [&](cplx z) { return symbol_eval(model, mult, z); };

  std::vector<UnimodularRoot> out;
  for (const Rotation& rot : rotations) {
    const Rotation red = make_rotation(rot.num, rot.den);
    const cplx target =
        nu * std::exp(cplx(0.0, 2.0 * kPi * double(red.num) / double(red.den)));

    std::vector<std::size_t> order(seeds_grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(m_grid[a] - target) < std::abs(m_grid[b] - target);
    });

    UnimodularRoot best;
    best.rotation = red;
    best.residual = 1e300;
    const int n_seeds = std::min<std::size_t>(8, order.size());
    for (int s = 0; s < n_seeds && !best.found; ++s) {
      cplx z = seeds_grid[order[s]];
      int it = 0;
      for (; it < 100; ++it) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
            std::abs(z.real()) > 50.0 || std::abs(z.imag()) >= strip)
          break;
        const cplx f = eval(z) - target;
        const double res = std::abs(f / nu);
        if (res < best.residual) {
          best.residual = res;
          best.lambda = z;
          best.iterations = it;
        }
        if (res < 1e-13) break;
        const double h = 1e-6;
        const cplx df = (eval(z + h) - eval(z - h)) / (2.0 * h);
        if (std::abs(df) < 1e-300) break;
        z -= f / df;
      }
      if (best.residual < 1e-10 && std::abs(best.lambda.imag()) < sp - 1e-9)
        best.found = true;
    }
    out.push_back(best);
  }
  return out;
}

void attach_roots(ChaosCertificate& cert, std::vector<UnimodularRoot> roots) {
  cert.roots = std::move(roots);
  std::vector<Rotation> found;
  for (const UnimodularRoot& r : cert.roots)
    if (r.found && std::find(found.begin(), found.end(), r.rotation) ==
                       found.end())
      found.push_back(r.rotation);
  const bool regions = !cert.u_plus.empty() && !cert.u_minus.empty();
  if (regions && found.size() >= 2)
    cert.verdict = Verdict::chaotic_certified;
  else if (regions)
    cert.verdict = Verdict::mixing_certified;
  else if (!found.empty())
    cert.verdict = Verdict::periodic_certified;
  else
    cert.verdict = Verdict::inconclusive;
}

PeriodicPoint build_periodic_point(std::span<const UnimodularRoot> roots,
                                   std::span<const double> centers,
                                   std::span<const cplx> coeffs) {
  if (roots.empty()) throw InputError("build_periodic_point: no roots");
  if (roots.size() != centers.size() || roots.size() != coeffs.size())
    throw InputError("build_periodic_point: mismatched list lengths");
  PeriodicPoint point;
  point.period = 1;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (!roots[j].found)
      throw InputError("build_periodic_point: rotation " +
                       format_rotation(roots[j].rotation) +
                       " has no located root");
    if (centers[j] < 0.0)
      throw InputError("build_periodic_point: negative center distance");
    point.terms.push_back(
        {roots[j].lambda, roots[j].rotation, centers[j], coeffs[j]});
    point.period = std::lcm(point.period, roots[j].rotation.den);
  }
  return point;
}

double diagonal_defect(const ManifoldModel& model, const Multiplier& mult,
                       cplx nu, const PeriodicPoint& point) {
  double worst = 0.0;
  for (const PeriodicTerm& term : point.terms) {
    const cplx alpha = symbol_eval(model, mult, term.lambda) / nu;
    worst = std::max(worst,
                     std::abs(std::pow(alpha, double(point.period)) - 1.0));
  }
  return worst;
}

namespace {

// One kernel realization of T in H^3: convolution profiles plus exact sphere
// averages (a sphere of radius r0 with weight w is the atom contribution).
struct KernelRealization {
  RadialInterpolant profile;  // empty when there is no density part
  double profile_radius = 0.0;
  CumulativeIntegral profile_G;  // cumulative of profile * sinh
  struct Sphere {
    double r0;
    cplx weight;
  };
  std::vector<Sphere> spheres;
  double reach = 0.0;  // effective support radius of one application
};

double effective_radius(const RadialFunction& k) {
  double top = 0.0;
  for (const cplx& v : k.values) top = std::max(top, std::abs(v));
  const auto& nodes = k.grid->nodes;
  for (std::size_t i = nodes.size(); i-- > 0;)
    if (std::abs(k.values[i]) > 1e-15 * top) return nodes[i];
  return nodes.front();
}

KernelRealization realize_kernel(const ManifoldModel& model,
                                 const Multiplier& mult) {
  KernelRealization rep;
  auto add_profile = [&](const RadialFunction& k) {
    rep.profile = RadialInterpolant(k.grid->nodes, k.values);
    rep.profile_radius = effective_radius(k);
    std::vector<cplx> integrand(k.grid->size());
    for (std::size_t i = 0; i < k.grid->size(); ++i)
      integrand[i] = k.values[i] * std::sinh(k.grid->nodes[i]);
    rep.profile_G = CumulativeIntegral(k.grid->nodes, integrand, 8);
    rep.reach = std::max(rep.reach, rep.profile_radius);
  };
  switch (mult.kind) {
    case MultiplierKind::heat:
      add_profile(heat_kernel_profile(model, mult.t));
      break;
    case MultiplierKind::conv_kernel:
      add_profile(*mult.kernel);
      break;
    case MultiplierKind::sphere_mean:
      rep.spheres.push_back({mult.r0, cplx(1.0)});
      rep.reach = mult.r0;
      break;
    case MultiplierKind::conv_measure:
      if (mult.measure->density_part) add_profile(*mult.measure->density_part);
      for (const auto& atom : mult.measure->atoms) {
        rep.spheres.push_back({atom.r, atom.mass});
        rep.reach = std::max(rep.reach, atom.r);
      }
      break;
    case MultiplierKind::custom_symbol:
      throw UnsupportedModelError(
          "verify_periodic: custom symbols have no kernel realization");
  }
  return rep;
}

// (u * k)(x) on an extended H^3 radial grid; y-window restricted to where
// the compactly supported kernel contributes.
struct ExtendedStepper {
  const std::vector<double>& nodes;
  const std::vector<double>& weights;
  const KernelRealization& rep;
  std::vector<double> sinh_n;

  ExtendedStepper(const std::vector<double>& n, const std::vector<double>& w,
                  const KernelRealization& r)
      : nodes(n), weights(w), rep(r) {
    sinh_n.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      sinh_n[i] = std::sinh(nodes[i]);
  }

  // sum over y in [x - d, x + d] of wf(y); wf already includes weights
  cplx window_sum(const std::vector<cplx>& u, double x, double d,
                  const CumulativeIntegral& G) const {
    const double lo = std::max(0.0, x - d - 1e-12);
    const double hi = x + d + 1e-12;
    const std::size_t i0 =
        std::lower_bound(nodes.begin(), nodes.end(), lo) - nodes.begin();
    cplx acc = 0.0;
    for (std::size_t i = i0; i < nodes.size() && nodes[i] <= hi; ++i)
      acc += weights[i] * sinh_n[i] * u[i] *
             (G(x + nodes[i]) - G(std::abs(x - nodes[i])));
    return acc;
  }

  void apply(const std::vector<cplx>& u, std::vector<cplx>& out,
             cplx inv_nu) const {
    // sphere averages need the running integral of u sinh
    CumulativeIntegral Gu;
    RadialInterpolant u_itp;
    if (!rep.spheres.empty()) {
      std::vector<cplx> integrand(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i)
        integrand[i] = u[i] * sinh_n[i];
      Gu = CumulativeIntegral(nodes, integrand, 4);
      u_itp = RadialInterpolant(nodes, u);
    }
    std::vector<double> tx, tw;
    composite_gauss_legendre(0.0, kPi, 8, 16, tx, tw);

    parallel_for(nodes.size(), [&](std::size_t k) {
      const double x = nodes[k];
      cplx v = 0.0;
      if (!rep.profile.empty()) {
        if (x >= 0.5) {
          v += 2.0 * kPi / sinh_n[k] *
               window_sum(u, x, rep.profile_radius, rep.profile_G);
        } else {
          // near the basepoint the cumulative difference cancels badly;
          // fall back to the angular quadrature
          for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i] > x + rep.profile_radius) break;
            cplx inner = 0.0;
            for (std::size_t j = 0; j < tx.size(); ++j) {
              const double ch = std::cosh(x) * std::cosh(nodes[i]) -
                                std::sinh(x) * sinh_n[i] * std::cos(tx[j]);
              const double d = std::acosh(std::max(1.0, ch));
              inner += tw[j] * std::sin(tx[j]) * rep.profile(d);
            }
            v += weights[i] * 4.0 * kPi * sinh_n[i] * sinh_n[i] * u[i] * 0.5 *
                 inner;
          }
        }
      }
      for (const auto& sph : rep.spheres) {
        if (sph.r0 <= 1e-12) {
          v += sph.weight * u[k];
        } else if (x >= 0.5) {
          v += sph.weight * (Gu(x + sph.r0) - Gu(std::abs(x - sph.r0))) /
               (2.0 * sinh_n[k] * std::sinh(sph.r0));
        } else {
          cplx inner = 0.0;
          for (std::size_t j = 0; j < tx.size(); ++j) {
            const double ch = std::cosh(x) * std::cosh(sph.r0) -
                              std::sinh(x) * std::sinh(sph.r0) *
                                  std::cos(tx[j]);
            inner += tw[j] * std::sin(tx[j]) *
                     u_itp(std::acosh(std::max(1.0, ch)));
          }
          v += sph.weight * 0.5 * inner;
        }
      }
      out[k] = inv_nu * v;
    });
  }
};

}  // namespace

double verify_periodic(const ManifoldModel& model, const Multiplier& mult,
                       const PeriodicPoint& point, cplx nu) {
  if (model.kind() != ModelKind::hyperbolic)
    throw UnsupportedModelError("verify_periodic needs a hyperbolic model");
  if (model.dimension() != 3)
    throw UnsupportedModelError(
        "extended-domain kernel verification is implemented for dimension 3");
  if (point.terms.empty()) throw InputError("verify_periodic: empty point");
  if (std::abs(nu) == 0.0) throw InputError("verify_periodic: nu = 0");

  const KernelRealization rep = realize_kernel(model, mult);
  if (rep.reach >= model.r_max())
    throw NumericalError(
        "verify_periodic: kernel support is not resolved inside r_max "
        "(tail reaches " + format_double(rep.reach) + ")");

  const double q = double(point.period);
  double max_center = 0.0;
  for (const PeriodicTerm& t : point.terms)
    max_center = std::max(max_center, t.center);
  // each application smears by the kernel reach, and boundary-truncation
  // corruption walks inward at the same rate per step
  const double r_compare = 0.5 * model.r_max();
  const double r_ext = r_compare + max_center + q * rep.reach + 2.0;
  if (r_ext > 2000.0)
    throw NumericalError(
        "verify_periodic: extended domain " + format_double(r_ext) +
        " is beyond tractable truncation (tail would dominate)");

  const double dx = std::max(0.02, r_ext / 14000.0);
  const int order = 8;
  const int panels = std::max(1, int(r_ext / (dx * order)) + 1);
  std::vector<double> nodes, weights;
  composite_gauss_legendre(0.0, r_ext, panels, order, nodes, weights);

  // initial per-term radial profiles about their own centers; a radial
  // convolution of a translate is the translated radial convolution, so each
  // term evolves independently as a profile
  const std::size_t n_terms = point.terms.size();
  std::vector<std::vector<cplx>> profiles(n_terms);
  for (std::size_t j = 0; j < n_terms; ++j)
    profiles[j] =
        solve_eigenfunction_at(model, point.terms[j].lambda, nodes, 1e-11)
            .values;
  std::vector<std::vector<cplx>> initial = profiles;

  const ExtendedStepper stepper(nodes, weights, rep);
  const cplx inv_nu = 1.0 / nu;
  std::vector<cplx> next(nodes.size());
  for (long long step = 0; step < point.period; ++step) {
    for (std::size_t j = 0; j < n_terms; ++j) {
      stepper.apply(profiles[j], next, inv_nu);
      profiles[j].swap(next);
    }
  }

  // compare the superposition along the reference geodesic on [0, r_max/2]
  std::vector<RadialInterpolant> before, after;
  for (std::size_t j = 0; j < n_terms; ++j) {
    before.emplace_back(nodes, std::move(initial[j]));
    after.emplace_back(nodes, std::move(profiles[j]));
  }
  double scale = 0.0, worst = 0.0;
  const int n_eval = 257;
  for (int k = 0; k < n_eval; ++k) {
    const double x = r_compare * k / double(n_eval - 1);
    cplx v0 = 0.0, v1 = 0.0;
    for (std::size_t j = 0; j < n_terms; ++j) {
      const double d = std::abs(x - point.terms[j].center);
      v0 += point.terms[j].coeff * before[j](d);
      v1 += point.terms[j].coeff * after[j](d);
    }
    scale = std::max(scale, std::abs(v0));
    worst = std::max(worst, std::abs(v1 - v0));
  }
  if (scale == 0.0) throw NumericalError("verify_periodic: zero initial state");
  return worst / scale;
}

OrbitRecord simulate_orbit(const ManifoldModel& model, const Multiplier& mult,
                           cplx nu, const PeriodicPoint& initial, int steps,
                           double p) {
  if (steps < 0 || steps > 200)
    throw InputError("simulate_orbit: steps must lie in [0, 200]");
  if (initial.terms.empty()) throw InputError("simulate_orbit: empty state");
  if (std::abs(nu) == 0.0) throw InputError("simulate_orbit: nu = 0");
  // for p <= 2 the strip degenerates to the real axis
  const double sp = p > 2.0 ? strip_halfwidth(model, p) : 0.0;
  for (const PeriodicTerm& t : initial.terms)
    if (std::abs(t.lambda.imag()) > sp ||
        (sp > 0.0 && std::abs(t.lambda.imag()) == sp))
      throw InputError("simulate_orbit: component outside S_p");

  OrbitRecord rec;
  std::vector<cplx> alpha(initial.terms.size());
  for (std::size_t j = 0; j < initial.terms.size(); ++j) {
    alpha[j] = symbol_eval(model, mult, initial.terms[j].lambda) / nu;
    rec.component_moduli.push_back(std::abs(alpha[j]));
    rec.labels.push_back("lambda=" + format_complex(initial.terms[j].lambda) +
                         " |m/nu|=" + format_double(std::abs(alpha[j])));
  }

  const bool radial_only = std::all_of(
      initial.terms.begin(), initial.terms.end(),
      [](const PeriodicTerm& t) { return t.center <= 1e-12; });

  const RadialGrid& grid = model.grid();
  std::vector<std::vector<cplx>> term_values;   // radial path
  std::vector<AxialField> term_fields;          // translated path
  if (radial_only) {
    for (const PeriodicTerm& t : initial.terms)
      term_values.push_back(
          solve_eigenfunction_at(model, t.lambda, grid.nodes).values);
  } else {
    for (const PeriodicTerm& t : initial.terms) {
      RadialFunction prof;
      prof.grid = model.grid_ptr();
      prof.values = solve_eigenfunction_at(model, t.lambda, grid.nodes).values;
      term_fields.push_back(translate_radial(model, prof, t.center));
    }
  }

  std::vector<cplx> coeff(initial.terms.size());
  for (std::size_t j = 0; j < coeff.size(); ++j)
    coeff[j] = initial.terms[j].coeff;

  auto record_norm = [&]() {
    double norm;
    if (radial_only) {
      RadialFunction v;
      v.grid = model.grid_ptr();
      v.values.assign(grid.size(), cplx(0.0));
      for (std::size_t j = 0; j < coeff.size(); ++j)
        for (std::size_t i = 0; i < grid.size(); ++i)
          v.values[i] += coeff[j] * term_values[j][i];
      norm = lp_norm_radial(model, v, p);
    } else {
      AxialField sum = term_fields.front();
      for (cplx& v : sum.values) v = 0.0;
      for (std::size_t j = 0; j < coeff.size(); ++j)
        for (std::size_t i = 0; i < sum.values.size(); ++i)
          sum.values[i] += coeff[j] * term_fields[j].values[i];
      norm = axial_lp_norm(model, sum, p);
    }
    rec.norms.push_back(norm);
    rec.log_norms.push_back(norm > 0.0 ? std::log(norm) : -1e300);
    return norm;
  };

  record_norm();
  for (int n = 1; n <= steps; ++n) {
    for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] *= alpha[j];
    if (record_norm() > 1e12) {
      rec.overflowed = true;
      break;
    }
  }
  return rec;
}

}  // namespace hmlab
