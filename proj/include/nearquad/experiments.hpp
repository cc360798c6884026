#ifndef NEARQUAD_EXPERIMENTS_HPP
#define NEARQUAD_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "nearquad/errors.hpp"
#include "nearquad/moments.hpp"
#include "nearquad/oracle.hpp"
#include "nearquad/rulegen.hpp"
#include "nearquad/special.hpp"

namespace nearquad {

namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers.  The first
// exception thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Grid of field points and integrand degrees for an error sweep.
struct SweepConfig {
  int nodes = 16;  // N
  int order = 4;   // M
  std::vector<double> radii;
  std::vector<double> thetas;
  std::vector<int> degrees{0};
  KernelKind kernel = KernelKind::inv_r2;
  // Moments used to build the rules; reference values always use the default.
  MomentScheme scheme = MomentScheme::automatic;

  void validate() const {
    if (radii.empty() || thetas.empty() || degrees.empty())
      throw contract_violation("SweepConfig: radii, thetas and degrees must be non-empty");
    for (double r : radii)
      if (!(r > 0.0) || !std::isfinite(r))
        throw contract_violation("SweepConfig: every R must be positive and finite");
    for (double th : thetas)
      if (!(th > 0.0 && th <= std::numbers::pi / 2))
        throw contract_violation("SweepConfig: every theta must lie in (0, pi/2]");
    for (int n : degrees)
      if (n < 0 || n >= kMaxMomentCount)
        throw contract_violation("SweepConfig: degrees must lie in [0, 32]");
    // Construction validates N and M.
    (void)RuleSpec(FieldPoint::cartesian(0.0, 1.0), nodes, order);
  }
};

/// Sixteen angles (2i+1) pi / 64, i = 0..15, covering [pi/64, 31 pi/64].
inline std::vector<double> standard_thetas() {
  std::vector<double> out(16);
  for (int i = 0; i < 16; ++i) out[i] = (2 * i + 1) * std::numbers::pi / 64.0;
  return out;
}

/// RMS difference between the rule's weights and the Gauss-Legendre weights.
inline double weight_deviation(const QuadratureRule& rule) {
  const auto gauss = gauss_legendre(rule.spec.nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.weights.size(); ++i) {
    const double d = rule.weights[i] - gauss.weights[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(rule.weights.size()));
}

/// int_{-1}^{1} t^n u(t) dt from the closed-form moments.
inline double exact_weighted_monomial(KernelKind kernel, const FieldPoint& point, int degree) {
  return power_moments(kernel, point, degree + 1)[static_cast<std::size_t>(degree)];
}

struct RmsError {
  double modified = 0.0;  // epsilon_1
  double gauss = 0.0;     // epsilon_2
};

struct TableRow {
  double radius;
  int degree;
  double eps_modified;
  double eps_gauss;
};

struct TableReport {
  int nodes = 0;
  int order = 0;
  std::vector<TableRow> rows;  // ordered by (R, n)
  // Largest relative gap between the closed-form reference and the oracle
  // over the spot-checked grid points.
  double audit_max_discrepancy = 0.0;
};

inline constexpr double kReferenceAuditTolerance = 1e-8;

// Reference integrals this small relative to int 1/D are treated as zero.
inline constexpr double kVanishingReference = 1e-13;

/// RMS relative error over config.thetas of both rules on the reference
/// integrals int t^n / ((x - t)^2 + y^2), for every (R, n) in the config.
/// `audit_samples` grid points are re-checked against the adaptive oracle.
inline TableReport reference_error_table(const SweepConfig& config, int threads = 1,
                                         int audit_samples = 3,
                                         std::uint64_t audit_seed = 20070101) {
  config.validate();
  const auto gauss = gauss_legendre(config.nodes);
  const std::size_t nr = config.radii.size();
  const std::size_t nt = config.thetas.size();
  const std::size_t nd = config.degrees.size();

  // Squared relative errors indexed [(r * nt + t) * nd + d].
  std::vector<double> sq_modified(nr * nt * nd);
  std::vector<double> sq_gauss(nr * nt * nd);

  detail::parallel_for(nr * nt, threads, [&](std::size_t idx) {
    const std::size_t r = idx / nt;
    const std::size_t t = idx % nt;
    const auto point = FieldPoint::polar(config.radii[r], config.thetas[t]);
    const auto rule = generate_rule(RuleSpec(point, config.nodes, config.order), config.scheme);
    const int max_degree = *std::max_element(config.degrees.begin(), config.degrees.end());
    const auto exact = power_moments(KernelKind::inv_r2, point, max_degree + 1);
    for (std::size_t d = 0; d < nd; ++d) {
      const int n = config.degrees[d];
      const double reference = exact[static_cast<std::size_t>(n)];
      // |t^n / D| <= 1 / D, so exact[0] bounds the integrand mass.
      if (std::abs(reference) <= kVanishingReference * exact[0])
        throw excluded_abscissa("reference integral vanishes at R = " +
                                std::to_string(config.radii[r]) +
                                ", theta = " + std::to_string(config.thetas[t]) +
                                ", n = " + std::to_string(n));
      auto integrand = [&](double s) { return std::pow(s, n) / point.distance_squared(s); };
      const double e1 = (apply_rule(rule, integrand) - reference) / reference;
      const double e2 = (apply_gauss(gauss, integrand) - reference) / reference;
      sq_modified[idx * nd + d] = e1 * e1;
      sq_gauss[idx * nd + d] = e2 * e2;
    }
  });

  TableReport report;
  report.nodes = config.nodes;
  report.order = config.order;
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t d = 0; d < nd; ++d) {
      double s1 = 0.0;
      double s2 = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        s1 += sq_modified[(r * nt + t) * nd + d];
        s2 += sq_gauss[(r * nt + t) * nd + d];
      }
      report.rows.push_back(TableRow{config.radii[r], config.degrees[d],
                                     std::sqrt(s1 / static_cast<double>(nt)),
                                     std::sqrt(s2 / static_cast<double>(nt))});
    }
  }

  std::mt19937_64 rng(audit_seed);
  for (int s = 0; s < audit_samples; ++s) {
    const auto r = config.radii[rng() % nr];
    const auto th = config.thetas[rng() % nt];
    const int n = config.degrees[rng() % nd];
    const auto point = FieldPoint::polar(r, th);
    const double closed = exact_weighted_monomial(KernelKind::inv_r2, point, n);
    const auto oracle = oracle_integrate(
        [&](double s) { return std::pow(s, n) / point.distance_squared(s); }, -1.0, 1.0, 1e-13);
    const double gap = std::abs(closed - oracle.value) / std::max(std::abs(oracle.value), 1e-30);
    report.audit_max_discrepancy = std::max(report.audit_max_discrepancy, gap);
  }
  if (report.audit_max_discrepancy > kReferenceAuditTolerance)
    throw error("reference integrals disagree with the oracle (relative gap " +
                std::to_string(report.audit_max_discrepancy) + ")");
  return report;
}

/// epsilon_1 and epsilon_2 for a single radius and degree.
inline RmsError rms_reference_error(const SweepConfig& config, double radius, int degree,
                                    int threads = 1) {
  SweepConfig single = config;
  single.radii = {radius};
  single.degrees = {degree};
  const auto report = reference_error_table(single, threads, 0);
  return RmsError{report.rows.front().eps_modified, report.rows.front().eps_gauss};
}

/// Grid of the two published error tables: 1 is N=16, M=4, n=0..3;
/// 2 is N=64, M=16, n=0,3,...,15.  Both use R in {1/2, 1, 2}.
inline SweepConfig published_table_config(int which) {
  SweepConfig config;
  config.radii = {0.5, 1.0, 2.0};
  config.thetas = standard_thetas();
  if (which == 1) {
    config.nodes = 16;
    config.order = 4;
    config.degrees = {0, 1, 2, 3};
  } else if (which == 2) {
    config.nodes = 64;
    config.order = 16;
    config.degrees = {0, 3, 6, 9, 12, 15};
  } else {
    throw contract_violation("table must be 1 or 2, got " + std::to_string(which));
  }
  return config;
}

struct ErrorRow {
  double radius;
  double theta;
  int degree;
  double eps_modified;
  double eps_gauss;
  double delta;  // weight deviation of the rule at this point
};

struct ErrorReport {
  std::vector<ErrorRow> rows;  // ordered by (R, n, theta)
};

/// Pointwise relative error |(I - K) / I| of both rules on
/// int t^n u(t) dt for the configured kernel, at every (R, theta, n).
inline ErrorReport pointwise_error_curves(const SweepConfig& config, int threads = 1) {
  config.validate();
  if (config.kernel == KernelKind::unit)
    throw contract_violation("pointwise_error_curves: kernel must be log, invr or invr2");
  const auto gauss = gauss_legendre(config.nodes);
  const std::size_t nr = config.radii.size();
  const std::size_t nt = config.thetas.size();
  const std::size_t nd = config.degrees.size();
  std::vector<ErrorRow> grid(nr * nt * nd);

  detail::parallel_for(nr * nt, threads, [&](std::size_t idx) {
    const std::size_t r = idx / nt;
    const std::size_t t = idx % nt;
    const auto point = FieldPoint::polar(config.radii[r], config.thetas[t]);
    const auto rule = generate_rule(RuleSpec(point, config.nodes, config.order), config.scheme);
    const double delta = weight_deviation(rule);
    for (std::size_t d = 0; d < nd; ++d) {
      const int n = config.degrees[d];
      const double reference = exact_weighted_monomial(config.kernel, point, n);
      auto integrand = [&](double s) {
        return std::pow(s, n) * kernel_value(config.kernel, point, s);
      };
      const double e1 = std::abs((reference - apply_rule(rule, integrand)) / reference);
      const double e2 = std::abs((reference - apply_gauss(gauss, integrand)) / reference);
      grid[(r * nd + d) * nt + t] =
          ErrorRow{config.radii[r], config.thetas[t], n, e1, e2, delta};
    }
  });

  ErrorReport report{std::move(grid)};
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ErrorRow& a, const ErrorRow& b) {
    return std::tie(a.radius, a.degree, a.theta) < std::tie(b.radius, b.degree, b.theta);
  });
  return report;
}

/// One comparison of a closed-form power moment against the oracle.
struct AuditEntry {
  KernelKind kernel;
  int degree;
  double x;
  double y;
  double computed;
  double reference;
  double relative_discrepancy;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  AuditEntry worst{};
  double tolerance = 0.0;

  bool passed() const { return worst.relative_discrepancy <= tolerance; }
};

using MomentProvider = std::function<std::vector<double>(KernelKind, const FieldPoint&, int)>;

/// The field points used by the moment audit: R in {1/4, 1/2, 1, 2} by
/// theta in {pi/16, pi/4, 7 pi/16}.
inline std::vector<FieldPoint> audit_grid() {
  std::vector<FieldPoint> out;
  for (double r : {0.25, 0.5, 1.0, 2.0})
    for (double th : {std::numbers::pi / 16, std::numbers::pi / 4, 7 * std::numbers::pi / 16})
      out.push_back(FieldPoint::polar(r, th));
  return out;
}

/// Compares every power moment J[0..count) of every kernel at every point
/// with the adaptive oracle.
inline AuditReport run_moment_audit(const MomentProvider& provider, double tolerance,
                                    const std::vector<FieldPoint>& points = audit_grid(),
                                    int count = 32, int threads = 1) {
  const std::size_t nk = kAllKernels.size();
  std::vector<std::vector<AuditEntry>> per_task(points.size() * nk);

  detail::parallel_for(points.size() * nk, threads, [&](std::size_t idx) {
    const auto& point = points[idx / nk];
    const auto kind = kAllKernels[idx % nk];
    const auto computed = provider(kind, point, count);
    for (int n = 0; n < count; ++n) {
      const auto oracle = oracle_integrate(
          [&](double t) { return std::pow(t, n) * kernel_value(kind, point, t); }, -1.0, 1.0,
          1e-13);
      const double value = computed[static_cast<std::size_t>(n)];
      const double gap =
          std::abs(value - oracle.value) / std::max(std::abs(oracle.value), 1e-30);
      per_task[idx].push_back(
          AuditEntry{kind, n, point.x(), point.y(), value, oracle.value, gap});
    }
  });

  AuditReport report;
  report.tolerance = tolerance;
  report.worst.relative_discrepancy = -1.0;
  for (auto& task : per_task)
    for (auto& e : task) {
      if (e.relative_discrepancy > report.worst.relative_discrepancy) report.worst = e;
      report.entries.push_back(e);
    }
  return report;
}

inline AuditReport run_moment_audit(double tolerance) {
  return run_moment_audit(
      [](KernelKind k, const FieldPoint& p, int c) { return power_moments(k, p, c); }, tolerance);
}

}  // namespace nearquad

#endif  // NEARQUAD_EXPERIMENTS_HPP
