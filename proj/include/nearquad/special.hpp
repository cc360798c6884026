#ifndef NEARQUAD_SPECIAL_HPP
#define NEARQUAD_SPECIAL_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "nearquad/errors.hpp"

namespace nearquad {

/// Legendre polynomial P_n(t) by the three-term recurrence
///   (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}.
inline double legendre_eval(int n, double t) {
  if (n <= 0) return 1.0;
  double p_prev = 1.0;
  double p = t;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * t * p - k * p_prev) / (k + 1);
    p_prev = p;
    p = p_next;
  }
  return p;
}

/// Values P_0(t) .. P_{count-1}(t) written into out[0..count).
inline void legendre_table(int count, double t, double* out) {
  if (count <= 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  out[1] = t;
  for (int k = 1; k + 1 < count; ++k)
    out[k + 1] = ((2 * k + 1) * t * out[k] - k * out[k - 1]) / (k + 1);
}

/// Returns {P_n(t), P_n'(t)} for n >= 1 and |t| < 1.
inline std::pair<double, double> legendre_with_derivative(int n, double t) {
  double p_prev = 1.0;
  double p = t;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * t * p - k * p_prev) / (k + 1);
    p_prev = p;
    p = p_next;
  }
  const double dp = n * (t * p - p_prev) / (t * t - 1.0);
  return {p, dp};
}

/// N-point Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 512;

/// Gauss-Legendre nodes by Newton iteration on P_N from the usual cosine
/// initial guesses; only the non-negative half is iterated and mirrored so the
/// rule is exactly symmetric.
inline GaussRule gauss_legendre(int order) {
  if (order < 1 || order > kMaxGaussOrder)
    throw contract_violation("gauss_legendre: order must lie in [1, 512], got " +
                             std::to_string(order));

  GaussRule rule;
  rule.order = order;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);

  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-15;
  const int half = order / 2;

  for (int i = 1; i <= half; ++i) {
    double t = std::cos(std::numbers::pi * (i - 0.25) / (order + 0.5));
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
      const auto [p, dp] = legendre_with_derivative(order, t);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) <= kTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw iteration_failure("gauss_legendre: Newton iteration did not converge for node " +
                              std::to_string(i) + " of " + std::to_string(order));

    const double dp = legendre_with_derivative(order, t).second;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // i = 1 is the largest root.
    rule.nodes[order - i] = t;
    rule.nodes[i - 1] = -t;
    rule.weights[order - i] = w;
    rule.weights[i - 1] = w;
  }

  if (order % 2 == 1) {
    const double dp = legendre_with_derivative(order, 0.0).second;
    rule.nodes[half] = 0.0;
    rule.weights[half] = 2.0 / (dp * dp);
  }
  return rule;
}

}  // namespace nearquad

#endif  // NEARQUAD_SPECIAL_HPP
