// Test-side reference implementations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "acopt/nn.hpp"

namespace oracle {

// Central finite differences of a scalar function of a flat vector.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::vector<double> point,
    double h = 1e-5) {
  std::vector<double> grad(point.size(), 0.0);
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    const double step = h * std::max(1.0, std::abs(saved));
    point[i] = saved + step;
    const double fp = f(point);
    point[i] = saved - step;
    const double fm = f(point);
    point[i] = saved;
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

// Relative agreement with a floor so near-zero coordinates compare sanely.
inline double relative_error(double a, double b, double floor = 1e-3) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double max_relative_error(std::span<const double> a, std::span<const double> b,
                                 double floor = 1e-3) {
  if (a.size() != b.size()) throw std::logic_error("max_relative_error: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, relative_error(a[i], b[i], floor));
  }
  return worst;
}

// Plain per-layer matrix-vector evaluation of the documented flat layout;
// written without the library's forward pass.
inline std::vector<double> reference_forward(const acopt::ParamVector& params,
                                             std::span<const double> input) {
  const auto& widths = params.spec.layer_widths;
  std::vector<double> x(input.begin(), input.end());
  std::size_t offset = 0;
  for (std::size_t layer = 0; layer + 1 < widths.size(); ++layer) {
    const int in = widths[layer];
    const int out = widths[layer + 1];
    std::vector<std::vector<double>> w(static_cast<std::size_t>(out),
                                       std::vector<double>(static_cast<std::size_t>(in)));
    for (int o = 0; o < out; ++o) {
      for (int i = 0; i < in; ++i) {
        w[static_cast<std::size_t>(o)][static_cast<std::size_t>(i)] =
            params.values[offset + static_cast<std::size_t>(o * in + i)];
      }
    }
    offset += static_cast<std::size_t>(in) * static_cast<std::size_t>(out);
    std::vector<double> b(params.values.begin() + static_cast<std::ptrdiff_t>(offset),
                          params.values.begin() + static_cast<std::ptrdiff_t>(offset) +
                              static_cast<std::ptrdiff_t>(out));
    offset += static_cast<std::size_t>(out);

    std::vector<double> y(static_cast<std::size_t>(out));
    const bool is_output = layer + 2 == widths.size();
    const acopt::Activation act =
        is_output ? acopt::Activation::Identity : params.spec.hidden_activations[layer];
    for (int o = 0; o < out; ++o) {
      double z = b[static_cast<std::size_t>(o)];
      for (int i = 0; i < in; ++i) {
        z += w[static_cast<std::size_t>(o)][static_cast<std::size_t>(i)] *
             x[static_cast<std::size_t>(i)];
      }
      switch (act) {
        case acopt::Activation::Tanh: y[static_cast<std::size_t>(o)] = std::tanh(z); break;
        case acopt::Activation::Relu: y[static_cast<std::size_t>(o)] = z > 0 ? z : 0; break;
        case acopt::Activation::Identity: y[static_cast<std::size_t>(o)] = z; break;
      }
    }
    x = std::move(y);
  }
  return x;
}

// Adaptive Simpson quadrature.
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                            double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, m, fa, fm, flm);
  const double right = simpson(f, m, b, fm, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_step(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
         adaptive_step(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return detail::adaptive_step(f, a, b, fa, fb, fm, detail::simpson(f, a, b, fa, fb, fm), tol, 40);
}

// Maximizes sum_i p_i (q_i - alpha*log p_i) over the probability simplex by
// exponentiated-gradient ascent (projected ascent in the simplex geometry).
// The iteration never forms exp(q/alpha) directly; the optimum emerges as
// the fixed point.
inline std::vector<double> maximize_on_simplex(std::span<const double> q, double alpha,
                                               int iterations = 2000) {
  const std::size_t n = q.size();
  std::vector<double> log_p(n, -std::log(static_cast<double>(n)));
  const double eta = 0.3 / alpha;  // eta * alpha < 1 keeps the map contractive
  std::vector<double> next(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = log_p[i] + eta * (q[i] - alpha * log_p[i] - alpha);
    }
    double m = next[0];
    for (double v : next) m = std::max(m, v);
    double z = 0.0;
    for (double v : next) z += std::exp(v - m);
    const double log_z = m + std::log(z);
    for (std::size_t i = 0; i < n; ++i) log_p[i] = next[i] - log_z;
  }
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::exp(log_p[i]);
  return p;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

}  // namespace oracle
