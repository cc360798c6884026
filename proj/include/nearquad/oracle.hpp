#ifndef NEARQUAD_ORACLE_HPP
#define NEARQUAD_ORACLE_HPP

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "nearquad/errors.hpp"

namespace nearquad {

struct OracleResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;  // number of panels in the final partition
  bool converged = false;
};

inline constexpr int kOraclePanelCap = 100000;

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights at the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double abs_value;  // integral of |f|, for the roundoff floor

  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(fc) * kKronrodWeights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive 15/7 Gauss-Kronrod quadrature of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below rel_tol * |value| (or below the roundoff floor of
/// 50 eps * int |f|), or until kOraclePanelCap panels exist.  In the latter
/// case, or when a split would evaluate f at a singular point, the best
/// estimate so far is returned with converged == false.
template <class F>
OracleResult oracle_integrate(F&& f, double a, double b, double rel_tol) {
  if (!(rel_tol >= 1e-13))
    throw contract_violation("oracle_integrate: rel_tol must be >= 1e-13, got " +
                             std::to_string(rel_tol));
  if (!std::isfinite(a) || !std::isfinite(b))
    throw contract_violation("oracle_integrate: interval must be finite");

  constexpr double kRoundoffFactor = 50.0 * std::numeric_limits<double>::epsilon();

  std::priority_queue<detail::Panel> panels;
  auto first = detail::kronrod_panel(f, a, b);
  double value = first.value;
  double error = first.error;
  double abs_value = first.abs_value;
  panels.push(first);

  auto done = [&] {
    return error <= rel_tol * std::abs(value) || error <= kRoundoffFactor * abs_value;
  };

  while (!done() && static_cast<int>(panels.size()) < kOraclePanelCap) {
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel can no longer be split in floating point.
      panels.push(worst);
      break;
    }
    const auto left = detail::kronrod_panel(f, worst.a, mid);
    const auto right = detail::kronrod_panel(f, mid, worst.b);
    if (!std::isfinite(left.value + right.value + left.error + right.error)) {
      // A node hit a singularity of f; keep the last finite estimate.
      panels.push(worst);
      break;
    }
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    panels.push(left);
    panels.push(right);
  }

  OracleResult result;
  result.subdivisions = static_cast<int>(panels.size());
  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  error = 0.0;
  abs_value = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    abs_value += panels.top().abs_value;
    panels.pop();
  }
  result.value = value;
  result.abs_error_estimate = error;
  result.converged = error <= rel_tol * std::abs(value) || error <= kRoundoffFactor * abs_value;
  return result;
}

}  // namespace nearquad

#endif  // NEARQUAD_ORACLE_HPP
