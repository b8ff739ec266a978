#include "hmlab/eigen.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

using State = std::array<cplx, 2>;  // (w, w') with w = u e^{rho r}

constexpr double kSeriesStart = 1e-4;

// Series startup: u = 1 + a2 r^2 + a4 r^4 near the regular singular point.
void series_init(const ManifoldModel& model, cplx eig, double r, cplx& u,
                 cplx& du) {
  const int n = model.dimension();
  const cplx a2 = -eig / (2.0 * n);
  // next coefficient of A'/A = (n-1)/r + beta r + ...
  const double beta =
      model.kind() == ModelKind::hyperbolic ? (n - 1) / 3.0 : 0.0;
  const cplx a4 = -a2 * (eig + 2.0 * beta) / (4.0 * n + 8.0);
  u = 1.0 + a2 * r * r + a4 * r * r * r * r;
  du = 2.0 * a2 * r + 4.0 * a4 * r * r * r;
}

}  // namespace

EigenSolution solve_eigenfunction_at(const ManifoldModel& model, cplx lambda,
                                     std::vector<double> radii, double tol) {
  if (std::abs(lambda) >= 1e4)
    throw InputError("solve_eigenfunction_at: |lambda| must be < 1e4");
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw InputError("solve_eigenfunction_at: radii must be sorted");
  if (!radii.empty() && radii.front() <= kSeriesStart)
    throw InputError("solve_eigenfunction_at: radii must exceed 1e-4");

  const double rho = model.rho();
  const cplx eig = lambda * lambda + rho * rho;

  EigenSolution out;
  out.lambda = lambda;
  out.radii = std::move(radii);
  const std::size_t n_out = out.radii.size();
  out.values.resize(n_out);
  out.derivatives.resize(n_out);
  out.scaled_values.resize(n_out);
  if (n_out == 0) return out;

  // w = u e^{rho r}:  w'' + (B - 2 rho) w' + (lambda^2 + 2 rho^2 - rho B) w = 0
  auto rhs = [&](const State& y, State& dy, double r) {
    const double B = model.log_density_deriv(r);
    dy[0] = y[1];
    dy[1] = -(B - 2.0 * rho) * y[1] -
            (lambda * lambda + 2.0 * rho * rho - rho * B) * y[0];
  };

  cplx u0, du0;
  series_init(model, eig, kSeriesStart, u0, du0);
  const double scale0 = std::exp(rho * kSeriesStart);
  State y{u0 * scale0, (du0 + rho * u0) * scale0};

  std::vector<double> times;
  times.reserve(n_out + 1);
  times.push_back(kSeriesStart);
  for (double r : out.radii) times.push_back(r);

  std::size_t slot = 0;
  bool first = true;
  auto observer = [&](const State& s, double r) {
    if (first) {  // startup point, not requested
      first = false;
      return;
    }
    const double damp = std::exp(-rho * r);
    out.scaled_values[slot] = s[0];
    out.values[slot] = s[0] * damp;
    out.derivatives[slot] = (s[1] - rho * s[0]) * damp;
    ++slot;
  };

  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_dopri5<State>;
  try {
    ode::integrate_times(ode::make_controlled<Stepper>(tol, tol), rhs, y,
                         times.begin(), times.end(), 1e-5, observer);
  } catch (const std::exception& e) {
    throw NumericalError(std::string("eigenfunction integration failed: ") +
                         e.what());
  }
  if (slot != n_out)
    throw NumericalError("eigenfunction integration produced short output");
  return out;
}

RadialEigenfunction radial_eigenfunction(const ManifoldModel& model,
                                         cplx lambda) {
  const RadialGrid& grid = model.grid();
  const double abs_l = std::abs(lambda);
  const double h = 1e-3 / std::sqrt(1.0 + abs_l);

  // residual check radii: log-spaced through [0.02, ~r_max]
  const int n_check = 32;
  const double lo = 0.02, hi = model.r_max() * 0.98;
  std::vector<double> check;
  for (int k = 0; k < n_check; ++k)
    check.push_back(lo * std::pow(hi / lo, k / double(n_check - 1)));

  struct Tagged {
    double r;
    int kind;  // 0 = grid slot, 1..: stencil slot
    std::size_t index;
  };
  std::vector<Tagged> pts;
  pts.reserve(grid.size() + 5 * check.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    pts.push_back({grid.nodes[i], 0, i});
  for (std::size_t c = 0; c < check.size(); ++c)
    for (int s = -2; s <= 2; ++s)
      pts.push_back({check[c] + s * h, 1, c * 5 + std::size_t(s + 2)});
  std::sort(pts.begin(), pts.end(),
            [](const Tagged& a, const Tagged& b) { return a.r < b.r; });

  std::vector<double> radii;
  radii.reserve(pts.size());
  for (const Tagged& t : pts) radii.push_back(t.r);
  for (std::size_t k = 1; k < radii.size(); ++k)  // integrator needs strict order
    if (radii[k] <= radii[k - 1])
      radii[k] = std::nextafter(radii[k - 1], 1e300);

  EigenSolution sol = solve_eigenfunction_at(model, lambda, radii);

  RadialEigenfunction out;
  out.lambda = lambda;
  out.values.resize(grid.size());
  out.derivative_values.resize(grid.size());
  std::vector<cplx> stencil(5 * check.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].kind == 0) {
      out.values[pts[k].index] = sol.values[k];
      out.derivative_values[pts[k].index] = sol.derivatives[k];
    } else {
      stencil[pts[k].index] = sol.values[k];
    }
  }

  const double rho = model.rho();
  const cplx eig = lambda * lambda + rho * rho;
  double worst = 0.0;
  for (std::size_t c = 0; c < check.size(); ++c) {
    const cplx um2 = stencil[c * 5 + 0], um1 = stencil[c * 5 + 1],
               u0 = stencil[c * 5 + 2], up1 = stencil[c * 5 + 3],
               up2 = stencil[c * 5 + 4];
    const cplx d2 =
        (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) / (12.0 * h * h);
    const cplx d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h);
    const double B = model.log_density_deriv(check[c]);
    worst = std::max(worst, std::abs(d2 + B * d1 + eig * u0));
  }
  out.ode_residual = worst / (1.0 + std::norm(lambda));
  return out;
}

cplx eigenfunction_value(const ManifoldModel& model, cplx lambda, double r) {
  if (r <= kSeriesStart) return 1.0;  // phi(0) = 1 and phi is even
  EigenSolution sol = solve_eigenfunction_at(model, lambda, {r});
  return sol.values[0];
}

RadialFunction eigenfunction_profile(const ManifoldModel& model, cplx lambda) {
  EigenSolution sol =
      solve_eigenfunction_at(model, lambda, model.grid().nodes);
  RadialFunction f;
  f.grid = model.grid_ptr();
  f.values = std::move(sol.values);
  f.label = "phi_" + format_complex(lambda);
  return f;
}

namespace detail {

// Solves  w(r_k) = cp e^{i lambda r_k} + cm e^{-i lambda r_k}  at r1, r2 and
// reports the relative mismatch at r3.
CFunctionSample fit_c_from_scaled(double lambda, double r1, double r2,
                                  double r3, cplx w1, cplx w2, cplx w3) {
  const cplx i(0.0, 1.0);
  const cplx e1p = std::exp(i * lambda * r1), e1m = std::exp(-i * lambda * r1);
  const cplx e2p = std::exp(i * lambda * r2), e2m = std::exp(-i * lambda * r2);
  const cplx det = e1p * e2m - e1m * e2p;
  if (std::abs(det) < 1e-12)
    throw NumericalError("c_function: singular asymptotic fit system");
  const cplx cp = (w1 * e2m - w2 * e1m) / det;
  const cplx cm = (e1p * w2 - e2p * w1) / det;
  const cplx pred3 = cp * std::exp(i * lambda * r3) + cm * std::exp(-i * lambda * r3);
  const double scale =
      std::max({std::abs(w1), std::abs(w2), std::abs(w3), 1e-300});
  CFunctionSample out;
  out.lambda = lambda;
  out.c_value = cp;
  out.fit_residual = std::abs(w3 - pred3) / scale;
  return out;
}

// Picks the second fit radius so that the 2x2 system stays well away from
// the sin(lambda (r2 - r1)) = 0 degeneracy.
double pick_c_fit_radius(double lambda, double r1, double r_max) {
  const double cands[] = {0.9 * r_max, 0.86 * r_max, 0.935 * r_max};
  double best = cands[0], best_s = -1.0;
  for (double c : cands) {
    const double s = std::abs(std::sin(lambda * (c - r1)));
    if (s > best_s) {
      best_s = s;
      best = c;
    }
  }
  return best;
}

}  // namespace detail

CFunctionSample c_function(const ManifoldModel& model, double lambda) {
  if (std::abs(lambda) < 0.05)
    throw NumericalError(
        "c_function: ill-conditioned for |lambda| < 0.05 (c blows up at 0)");
  const double r_max = model.r_max();
  const double r1 = 0.8 * r_max;
  const double r2 = detail::pick_c_fit_radius(lambda, r1, r_max);
  const double r3 = 0.85 * r_max;
  std::vector<double> radii{r1, r3, r2};
  std::sort(radii.begin(), radii.end());
  EigenSolution sol = solve_eigenfunction_at(model, cplx(lambda, 0.0), radii,
                                             1e-13);
  auto at = [&](double r) {
    for (std::size_t k = 0; k < radii.size(); ++k)
      if (radii[k] == r) return sol.scaled_values[k];
    throw StateError("c_function: radius bookkeeping error");
  };
  return detail::fit_c_from_scaled(lambda, r1, r2, r3, at(r1), at(r2), at(r3));
}

}  // namespace hmlab
