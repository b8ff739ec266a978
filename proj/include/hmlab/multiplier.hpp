#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmlab/convolution.hpp"

namespace hmlab {

enum class MultiplierKind {
  heat,         // m(lambda) = exp(-t (lambda^2 + rho^2))
  sphere_mean,  // m(lambda) = phi_lambda(r0)
  conv_kernel,  // m = g_hat for a radial kernel g
  conv_measure, // m = mu_hat for a finite radial measure
  custom_symbol // user symbol with a declared strip of holomorphy
};

struct Multiplier {
  MultiplierKind kind = MultiplierKind::heat;
  double t = 0.0;   // heat time
  double r0 = 0.0;  // sphere radius
  std::optional<RadialFunction> kernel;
  std::optional<RadialMeasure> measure;
  std::function<cplx(cplx)> symbol_fn;
  double declared_strip = 0.0;  // custom_symbol only
  std::string label;
};

Multiplier heat_multiplier(double t);
Multiplier sphere_mean_multiplier(double r0);
Multiplier kernel_multiplier(RadialFunction g, std::string label = "kernel");
Multiplier measure_multiplier(RadialMeasure mu, std::string label = "measure");
Multiplier custom_multiplier(std::function<cplx(cplx)> fn,
                             double strip_halfwidth,
                             std::string label = "custom");

// m(lambda) at one spectral point (complex lambda inside the symbol's strip).
cplx symbol_eval(const ManifoldModel& model, const Multiplier& mult,
                 cplx lambda);

// m on the model's real spectral grid (calibrated model required; uses the
// precomputed eigenfunction table where possible).
std::vector<cplx> symbol_grid(const ManifoldModel& model,
                              const Multiplier& mult);

// Largest strip |Im lambda| < h on which the symbol is available.
double symbol_strip(const ManifoldModel& model, const Multiplier& mult);

// T_m f by spectral multiplication: invert(m * f_hat).
RadialFunction apply_multiplier(const ManifoldModel& model,
                                const Multiplier& mult,
                                const RadialFunction& f);

// T_m f computed on the spatial side (convolution with the kernel, exact
// sphere averaging for sphere_mean); the independent check of
// apply_multiplier.  Hyperbolic models only.
RadialFunction apply_multiplier_kernel_side(const ManifoldModel& model,
                                            const Multiplier& mult,
                                            const RadialFunction& f);

// Heat kernel profile h_t = inverse transform of the heat symbol.
RadialFunction heat_kernel_profile(const ManifoldModel& model, double t);

// Recovers m(lambda) = (T f)_hat / f_hat from one input/output pair.
// Throws NumericalError naming lambda when |f_hat(lambda)| < 1e-9.
std::vector<cplx> extract_symbol(const ManifoldModel& model,
                                 const RadialFunction& f,
                                 const RadialFunction& tf,
                                 std::span<const cplx> lambda_set);

// True when m is nonconstant on S_p at sampling resolution (64 interior
// sample points; spread threshold 1e-9 relative to the symbol scale).
bool nonconstancy_check(const ManifoldModel& model, const Multiplier& mult,
                        double p);

}  // namespace hmlab
