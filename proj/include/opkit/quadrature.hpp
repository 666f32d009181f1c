// Composite Gauss–Legendre quadrature for matrix-valued integrands on a
// finite interval, refined by panel doubling.
#pragma once

#include "opkit/core.hpp"

#include <array>
#include <functional>

namespace opkit::quad {

inline constexpr int kGaussOrder = 20;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int n = kGaussOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

using MatrixIntegrand = std::function<ComplexMatrix(double)>;

/// Composite rule with `panels` equal panels on [a, b]. Summation is in
/// fixed node order so results are deterministic.
inline ComplexMatrix composite(const MatrixIntegrand& f, double a, double b, int panels, Eigen::Index rows,
                               Eigen::Index cols) {
  const GaussRule& rule = gauss_rule();
  ComplexMatrix acc = ComplexMatrix::Zero(rows, cols);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < kGaussOrder; ++k) {
      const double u = mid + 0.5 * h * rule.nodes[k];
      acc += (0.5 * h * rule.weights[k]) * f(u);
    }
  }
  return acc;
}

struct AdaptiveResult {
  ComplexMatrix value;
  double estimated_error = 0.0;
  int panels_used = 0;
  bool converged = false;
};

/// Doubles the panel count from `initial_panels` until successive composite
/// estimates differ (spectral norm) by at most `abs_tol(value)`, or until
/// `max_panels` is exceeded.
inline AdaptiveResult integrate_doubling(const MatrixIntegrand& f, double a, double b, int initial_panels,
                                         int max_panels, Eigen::Index rows, Eigen::Index cols,
                                         const std::function<double(const ComplexMatrix&)>& abs_tol) {
  AdaptiveResult out;
  int panels = std::max(1, initial_panels);
  ComplexMatrix prev = composite(f, a, b, panels, rows, cols);
  while (true) {
    const int next = 2 * panels;
    if (next > max_panels) {
      out.value = prev;
      out.panels_used = panels;
      out.converged = false;
      return out;
    }
    ComplexMatrix cur = composite(f, a, b, next, rows, cols);
    const double diff = op_norm(cur - prev);
    out.value = cur;
    out.panels_used = next;
    out.estimated_error = diff;
    if (diff <= abs_tol(cur)) {
      out.converged = true;
      return out;
    }
    prev = std::move(cur);
    panels = next;
  }
}

}  // namespace opkit::quad
