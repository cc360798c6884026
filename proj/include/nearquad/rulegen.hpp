#ifndef NEARQUAD_RULEGEN_HPP
#define NEARQUAD_RULEGEN_HPP

#include <cmath>
#include <string>
#include <vector>

#include "nearquad/errors.hpp"
#include "nearquad/moments.hpp"
#include "nearquad/solver.hpp"
#include "nearquad/special.hpp"

namespace nearquad {

inline constexpr int kMaxPolynomialOrder = 32;

// Rules whose moment residual exceeds this are flagged as unreliable.
inline constexpr double kResidualWarning = 1e-8;

/// What to build: field point, node count N and per-kernel polynomial order M.
struct RuleSpec {
  FieldPoint point;
  int nodes;  // N
  int order;  // M

  RuleSpec(FieldPoint p, int n, int m) : point(p), nodes(n), order(m) {
    if (n < 1 || n > kMaxGaussOrder)
      throw contract_violation("RuleSpec: N must lie in [1, 512], got " + std::to_string(n));
    if (m < 1 || m > kMaxPolynomialOrder)
      throw contract_violation("RuleSpec: M must lie in [1, 32], got " + std::to_string(m));
  }

  int basis_rows() const noexcept { return 4 * order; }
};

/// Gauss-Legendre nodes with weights refitted for one field point.
struct QuadratureRule {
  RuleSpec spec;
  std::vector<double> nodes;
  std::vector<double> weights;
  double residual_norm = 0.0;
  int rank = 0;

  int basis_rows() const noexcept { return spec.basis_rows(); }
  bool unreliable() const noexcept { return residual_norm > kResidualWarning; }
};

/// Weighted Legendre basis sampled at the nodes, 4M x N.  Row blocks follow
/// kAllKernels: P_k, P_k log sqrt(D), P_k / sqrt(D), P_k / D with
/// D = (x - t)^2 + y^2 and k = 0..M-1.
inline DenseMatrix build_psi(const RuleSpec& spec, std::span<const double> nodes) {
  if (nodes.size() != static_cast<std::size_t>(spec.nodes))
    throw contract_violation("build_psi: expected " + std::to_string(spec.nodes) + " nodes, got " +
                             std::to_string(nodes.size()));
  const int m = spec.order;
  DenseMatrix psi(static_cast<std::size_t>(4 * m), nodes.size());
  std::vector<double> legendre(m);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double t = nodes[j];
    legendre_table(m, t, legendre.data());
    for (int b = 0; b < 4; ++b) {
      const double u = kernel_value(kAllKernels[b], spec.point, t);
      for (int k = 0; k < m; ++k) psi(static_cast<std::size_t>(b * m + k), j) = legendre[k] * u;
    }
  }
  return psi;
}

/// Exact integrals of the rows of build_psi, in the same order.
inline std::vector<double> build_moment_vector(const RuleSpec& spec,
                                               MomentScheme scheme = MomentScheme::automatic) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.basis_rows()));
  for (auto kind : kAllKernels) {
    const auto power = power_moments(kind, spec.point, spec.order, scheme);
    const auto legendre = kernel_legendre_moments(kind, power);
    out.insert(out.end(), legendre.begin(), legendre.end());
  }
  return out;
}

inline QuadratureRule generate_rule(const RuleSpec& spec,
                                    MomentScheme scheme = MomentScheme::automatic) {
  auto gauss = gauss_legendre(spec.nodes);
  const auto psi = build_psi(spec, gauss.nodes);
  const auto moments = build_moment_vector(spec, scheme);
  auto report = solve_min_norm_lsq(psi, moments);
  return QuadratureRule{spec, std::move(gauss.nodes), std::move(report.solution),
                        report.residual_norm, report.rank};
}

/// sum_i w_i f(t_i)
template <class F>
double apply_rule(const QuadratureRule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double value = f(rule.nodes[i]);
    if (!std::isfinite(value))
      throw evaluation_error("apply_rule: integrand is not finite at node " + std::to_string(i) +
                                 " (t = " + std::to_string(rule.nodes[i]) + ")",
                             i, rule.nodes[i]);
    sum += rule.weights[i] * value;
  }
  return sum;
}

/// Same as apply_rule for a plain Gauss-Legendre rule.
template <class F>
double apply_gauss(const GaussRule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace nearquad

#endif  // NEARQUAD_RULEGEN_HPP
