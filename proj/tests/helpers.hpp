#pragma once

#include <cmath>
#include <complex>

#include "hmlab/chaos.hpp"
#include "hmlab/convolution.hpp"
#include "hmlab/eigen.hpp"
#include "hmlab/errors.hpp"
#include "hmlab/io.hpp"
#include "hmlab/multiplier.hpp"
#include "hmlab/transform.hpp"

namespace hmlab::testing {

inline SpectralSetup small_setup() {
  SpectralSetup setup;
  setup.lambda_max = 40.0;
  setup.num_nodes = 768;
  return setup;
}

// calibrated H^3, shared across test cases in a binary
inline const ManifoldModel& h3() {
  static const ManifoldModel model = [] {
    ManifoldModel m = build_model(ModelKind::hyperbolic, 3, 12.0, 512);
    calibrate_inversion(m, small_setup());
    return m;
  }();
  return model;
}

// calibrated H^2
inline const ManifoldModel& h2() {
  static const ManifoldModel model = [] {
    ManifoldModel m = build_model(ModelKind::hyperbolic, 2, 12.0, 512);
    calibrate_inversion(m, small_setup());
    return m;
  }();
  return model;
}

// closed form on H^3: phi_lambda(r) = sin(lambda r) / (lambda sinh r)
inline cplx phi3(cplx lambda, double r) {
  if (std::abs(lambda) < 1e-12) return r / std::sinh(r);
  return std::sin(lambda * r) / (lambda * std::sinh(r));
}

// closed form heat kernel on H^3 (rho = 1)
inline double heat3(double t, double r) {
  return std::pow(4.0 * kPi * t, -1.5) * std::exp(-t) * (r / std::sinh(r)) *
         std::exp(-r * r / (4.0 * t));
}

inline double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace hmlab::testing
