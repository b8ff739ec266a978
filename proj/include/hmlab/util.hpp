#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hmlab {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre rule of order n on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Composite Gauss-Legendre rule on [a, b]: `panels` equal panels of `order`
// points each.  Nodes come out strictly increasing.
void composite_gauss_legendre(double a, double b, int panels, int order,
                              std::vector<double>& nodes,
                              std::vector<double>& weights);

// Runs fn(i) for i in [0, n), spread over hardware threads.  Each index is
// handled exactly once; fn must not touch shared mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Piecewise cubic Hermite interpolant of a complex profile sampled on a
// strictly increasing radius grid.  Slopes are taken from supplied
// derivative data when present, otherwise from 3-point finite differences.
// Evaluation clamps to the first sample below the grid and returns 0 beyond
// the last node (profiles are assumed decayed there).
class RadialInterpolant {
 public:
  RadialInterpolant() = default;
  RadialInterpolant(std::vector<double> nodes, std::vector<cplx> values);
  RadialInterpolant(std::vector<double> nodes, std::vector<cplx> values,
                    std::vector<cplx> derivatives);

  cplx operator()(double r) const;
  bool empty() const { return nodes_.empty(); }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
  std::vector<cplx> values_;
  std::vector<cplx> slopes_;
};

// Cumulative integral d -> \int_0^d s(x) dx of a sampled integrand,
// resampled onto a fine uniform grid.  Queries beyond the last node return
// the saturated total.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  // integrand sampled at `nodes`; `oversample` uniform cells per input node.
  CumulativeIntegral(const std::vector<double>& nodes,
                     const std::vector<cplx>& integrand, int oversample = 4);

  cplx operator()(double d) const;

 private:
  double h_ = 0.0;
  double d_max_ = 0.0;
  std::vector<cplx> cumulative_;  // at uniform points k*h starting at 0
};

// Full-precision decimal formatting ("%.17g"), round-trip safe.
std::string format_double(double v);

// Parses "0.5", "-1.25", "0.5+0.2i", "1e-2-3i", "0.3i".
cplx parse_complex(const std::string& s);
std::string format_complex(cplx z);

}  // namespace hmlab
