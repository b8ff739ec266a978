#include "hmlab/util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hmlab/errors.hpp"

namespace hmlab {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw InputError("gauss_legendre: order must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

void composite_gauss_legendre(double a, double b, int panels, int order,
                              std::vector<double>& nodes,
                              std::vector<double>& weights) {
  if (b <= a) throw InputError("composite_gauss_legendre: empty interval");
  if (panels < 1) throw InputError("composite_gauss_legendre: panels < 1");
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  nodes.clear();
  weights.clear();
  nodes.reserve(static_cast<std::size_t>(panels) * order);
  weights.reserve(static_cast<std::size_t>(panels) * order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < order; ++k) {
      nodes.push_back(lo + 0.5 * h * (x[k] + 1.0));
      weights.push_back(0.5 * h * w[k]);
    }
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 4;
  const std::size_t nthreads = std::min<std::size_t>(hw, n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::exception_ptr err;
  std::mutex err_mutex;
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nthreads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

RadialInterpolant::RadialInterpolant(std::vector<double> nodes,
                                     std::vector<cplx> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  const std::size_t n = nodes_.size();
  if (n < 2 || values_.size() != n)
    throw InputError("RadialInterpolant: need >= 2 matching samples");
  slopes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      slopes_[i] = (values_[1] - values_[0]) / (nodes_[1] - nodes_[0]);
    } else if (i == n - 1) {
      slopes_[i] = (values_[i] - values_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    } else {
      // 3-point finite difference on a nonuniform grid
      const double hl = nodes_[i] - nodes_[i - 1];
      const double hr = nodes_[i + 1] - nodes_[i];
      slopes_[i] = (hl * hl * values_[i + 1] - hr * hr * values_[i - 1] +
                    (hr * hr - hl * hl) * values_[i]) /
                   (hl * hr * (hl + hr));
    }
  }
}

RadialInterpolant::RadialInterpolant(std::vector<double> nodes,
                                     std::vector<cplx> values,
                                     std::vector<cplx> derivatives)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      slopes_(std::move(derivatives)) {
  const std::size_t n = nodes_.size();
  if (n < 2 || values_.size() != n || slopes_.size() != n)
    throw InputError("RadialInterpolant: need >= 2 matching samples");
}

cplx RadialInterpolant::operator()(double r) const {
  if (nodes_.empty()) throw StateError("RadialInterpolant: empty");
  if (r <= nodes_.front()) return values_.front();
  if (r >= nodes_.back()) return 0.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double h = nodes_[i + 1] - nodes_[i];
  const double s = (r - nodes_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] +
         h11 * h * slopes_[i + 1];
}

CumulativeIntegral::CumulativeIntegral(const std::vector<double>& nodes,
                                       const std::vector<cplx>& integrand,
                                       int oversample) {
  if (nodes.size() < 2 || nodes.size() != integrand.size())
    throw InputError("CumulativeIntegral: need matching samples");
  RadialInterpolant interp(nodes, integrand);
  d_max_ = nodes.back();
  const std::size_t ncells = nodes.size() * static_cast<std::size_t>(oversample);
  h_ = d_max_ / static_cast<double>(ncells);
  cumulative_.assign(ncells + 1, 0.0);
  cplx acc = 0.0;
  cplx prev = interp(0.0);
  for (std::size_t k = 1; k <= ncells; ++k) {
    const double d = h_ * static_cast<double>(k);
    const cplx mid = interp(d - 0.5 * h_);
    const cplx cur = interp(d);
    acc += h_ * (prev + 4.0 * mid + cur) / 6.0;  // Simpson cell
    cumulative_[k] = acc;
    prev = cur;
  }
}

cplx CumulativeIntegral::operator()(double d) const {
  if (cumulative_.empty()) throw StateError("CumulativeIntegral: empty");
  if (d <= 0.0) return 0.0;
  if (d >= d_max_) return cumulative_.back();
  const double u = d / h_;
  const std::size_t k = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(k);
  if (k + 1 >= cumulative_.size()) return cumulative_.back();
  return cumulative_[k] + frac * (cumulative_[k + 1] - cumulative_[k]);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

cplx parse_complex(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw InputError("parse_complex: empty string");
  // split at the last +/- that is not part of an exponent and not leading
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto to_num = [](const std::string& p) -> double {
    if (p.empty() || p == "+") return 1.0;
    if (p == "-") return -1.0;
    std::size_t pos = 0;
    double v = std::stod(p, &pos);
    if (pos != p.size()) throw InputError("parse_complex: bad number '" + p + "'");
    return v;
  };
  try {
    if (t.back() == 'i' || t.back() == 'I') {
      t.pop_back();
      if (split == std::string::npos) return cplx(0.0, to_num(t));
      return cplx(to_num(t.substr(0, split)), to_num(t.substr(split)));
    }
    if (split != std::string::npos) {
      // forms like "1+2" without trailing i are malformed
      throw InputError("parse_complex: expected trailing 'i' in '" + s + "'");
    }
    return cplx(to_num(t), 0.0);
  } catch (const std::invalid_argument&) {
    throw InputError("parse_complex: cannot parse '" + s + "'");
  } catch (const std::out_of_range&) {
    throw InputError("parse_complex: out of range '" + s + "'");
  }
}

std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string out = format_double(z.real());
  if (z.imag() >= 0.0) out += "+";
  out += format_double(z.imag());
  out += "i";
  return out;
}

}  // namespace hmlab
