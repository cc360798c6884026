#ifndef NEARQUAD_MOMENTS_HPP
#define NEARQUAD_MOMENTS_HPP

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nearquad/errors.hpp"

namespace nearquad {

// Below this |y| the field point is treated as lying on the element.
inline constexpr double kSingularThreshold = 1e-14;

// Largest moment count for which the monomial-to-Legendre conversion is
// still trustworthy in double precision.
inline constexpr int kMaxMomentCount = 33;

/// Field point in element-local coordinates.  The element occupies
/// [-1, 1] on the x axis; only |y| matters to every kernel, so y is stored
/// as its absolute value.
class FieldPoint {
 public:
  static FieldPoint cartesian(double x, double y) { return FieldPoint(x, y); }

  /// x = R cos(theta), y = R sin(theta).
  static FieldPoint polar(double radius, double theta) {
    return FieldPoint(radius * std::cos(theta), radius * std::sin(theta));
  }

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double radius() const noexcept { return radius_; }
  double theta() const noexcept { return std::atan2(y_, x_); }
  double r_plus() const noexcept { return r_plus_; }
  double r_minus() const noexcept { return r_minus_; }

  /// (x - t)^2 + y^2
  double distance_squared(double t) const noexcept {
    const double d = x_ - t;
    return d * d + y_ * y_;
  }

 private:
  FieldPoint(double x, double y) : x_(x), y_(std::abs(y)) {
    if (!std::isfinite(x) || !std::isfinite(y))
      throw contract_violation("FieldPoint: coordinates must be finite");
    if (y_ < kSingularThreshold)
      throw singular_configuration(
          "field point lies on the element line (|y| < 1e-14); principal-value and "
          "finite-part integrals are not supported");
    radius_ = std::sqrt(x_ * x_ + y_ * y_);
    r_plus_ = std::sqrt((x_ - 1.0) * (x_ - 1.0) + y_ * y_);
    r_minus_ = std::sqrt((x_ + 1.0) * (x_ + 1.0) + y_ * y_);
  }

  double x_;
  double y_;
  double radius_ = 0.0;
  double r_plus_ = 0.0;
  double r_minus_ = 0.0;
};

/// Weighting functions u(t) of the four basis families, in basis order.
enum class KernelKind { unit, log, inv_r, inv_r2 };

inline constexpr std::array<KernelKind, 4> kAllKernels = {
    KernelKind::unit, KernelKind::log, KernelKind::inv_r, KernelKind::inv_r2};

inline std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::unit: return "unit";
    case KernelKind::log: return "log";
    case KernelKind::inv_r: return "invr";
    case KernelKind::inv_r2: return "invr2";
  }
  return "?";
}

inline std::optional<KernelKind> parse_kernel(std::string_view name) {
  for (auto kind : kAllKernels)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

/// u(t) for the given kernel at the given field point.
inline double kernel_value(KernelKind kind, const FieldPoint& point, double t) {
  const double d2 = point.distance_squared(t);
  switch (kind) {
    case KernelKind::unit: return 1.0;
    case KernelKind::log: return 0.5 * std::log(d2);
    case KernelKind::inv_r: return 1.0 / std::sqrt(d2);
    case KernelKind::inv_r2: return 1.0 / d2;
  }
  return 0.0;
}

/// How power moments are evaluated.
///
/// forward_recursion runs the three-term recursions upward from closed-form
/// seeds.  Rounding errors grow like R^n, so it is only accurate for field
/// points with R not much above 1.  far_field_series sums the generating
/// function expansions of each kernel in powers of t/R, which converge for
/// R > 1.  automatic picks forward recursion up to R = 1.25 and the series
/// beyond.
enum class MomentScheme { automatic, forward_recursion, far_field_series };

inline constexpr double kSeriesSwitchRadius = 1.25;

namespace detail {

// Integral of t^j over [-1, 1].
inline double monomial_integral(int j) { return (j % 2 == 0) ? 2.0 / (j + 1) : 0.0; }

inline double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// u + sqrt(u^2 + y^2) without cancellation for u < 0.
inline double asinh_argument(double u, double y) {
  const double s = std::sqrt(u * u + y * y);
  return u >= 0.0 ? u + s : (y * y) / (s - u);
}

// I2[n] = int t^n / D for n in [0, count).
inline std::vector<double> inv_r2_forward(const FieldPoint& p, int count) {
  const double x = p.x();
  const double y = p.y();
  const double r2 = x * x + y * y;
  std::vector<double> out(count);
  // Sum of arctan((1-x)/y) and arctan((1+x)/y), folded into one atan2.
  out[0] = std::atan2(2.0 * y, r2 - 1.0) / y;
  if (count > 1) out[1] = std::log(p.r_plus() / p.r_minus()) + x * out[0];
  for (int n = 2; n < count; ++n)
    out[n] = monomial_integral(n - 2) + 2.0 * x * out[n - 1] - r2 * out[n - 2];
  return out;
}

inline std::vector<double> inv_r_forward(const FieldPoint& p, int count) {
  const double x = p.x();
  const double y = p.y();
  const double r2 = x * x + y * y;
  const double rp = p.r_plus();
  const double rm = p.r_minus();
  std::vector<double> out(count);
  out[0] = std::log(asinh_argument(1.0 - x, y) / asinh_argument(-1.0 - x, y));
  if (count > 1) out[1] = rp - rm + x * out[0];
  // From d/dt [t^(n-1) sqrt(D)] = (n t^n - (2n-1) x t^(n-1) + (n-1) R^2 t^(n-2)) / sqrt(D).
  for (int n = 2; n < count; ++n) {
    out[n] = (rp + parity_sign(n) * rm) / n + (2.0 * n - 1.0) / n * x * out[n - 1] -
             (n - 1.0) / n * r2 * out[n - 2];
  }
  return out;
}

// Integration by parts against t^(n+1)/(n+1):
//   int t^n log sqrt(D) = [log R+ + (-1)^n log R-] / (n+1)
//                         - (I2[n+2] - x I2[n+1]) / (n+1)
// with I2[n+2] - x I2[n+1] = int t^n + x I2[n+1] - R^2 I2[n].
inline std::vector<double> log_forward(const FieldPoint& p, int count) {
  const double x = p.x();
  const double r2 = x * x + p.y() * p.y();
  const double log_rp = std::log(p.r_plus());
  const double log_rm = std::log(p.r_minus());
  const auto i2 = inv_r2_forward(p, count + 2);
  std::vector<double> out(count);
  for (int n = 0; n < count; ++n) {
    const double boundary = log_rp + parity_sign(n) * log_rm;
    const double rational = monomial_integral(n) + x * i2[n + 1] - r2 * i2[n];
    out[n] = (boundary - rational) / (n + 1);
  }
  return out;
}

// Expansions in s = t/R, c = cos(theta), valid for |s| < 1:
//   1/D          = R^-2 sum U_k(c) s^k
//   1/sqrt(D)    = R^-1 sum P_k(c) s^k
//   log sqrt(D)  = log R - sum_{k>=1} T_k(c) s^k / k
// Each power moment is then sum_k a_k int t^(n+k).
inline std::vector<double> series_moments(KernelKind kind, const FieldPoint& p, int count) {
  const double radius = p.radius();
  if (!(radius > 1.0))
    throw contract_violation("far-field series requires R > 1, got R = " +
                             std::to_string(radius));
  const double c = p.x() / radius;
  const double q = 1.0 / radius;
  constexpr int kMaxTerms = 20000;
  constexpr double kTailTolerance = 1e-18;

  std::vector<double> out(count, 0.0);
  if (kind == KernelKind::log) {
    const double log_r = std::log(radius);
    for (int n = 0; n < count; ++n) out[n] = log_r * monomial_integral(n);
  }

  // Chebyshev T, U and Legendre P at c; *0 holds index k, *1 index k+1.
  double t0 = 1.0, t1 = c;
  double u0 = 1.0, u1 = 2.0 * c;
  double p0 = 1.0, p1 = c;
  double qk = 1.0;  // q^k

  for (int k = 0; k < kMaxTerms; ++k) {
    double coefficient = 0.0;
    switch (kind) {
      case KernelKind::inv_r2: coefficient = qk * q * q * u0; break;
      case KernelKind::inv_r: coefficient = qk * q * p0; break;
      case KernelKind::log: coefficient = (k == 0) ? 0.0 : -qk * t0 / k; break;
      case KernelKind::unit: coefficient = (k == 0) ? 1.0 : 0.0; break;
    }
    for (int n = 0; n < count; ++n) out[n] += coefficient * monomial_integral(n + k);

    if (kind == KernelKind::unit || qk * (k + 2) < kTailTolerance) break;

    qk *= q;
    const double t2 = 2.0 * c * t1 - t0;
    const double u2 = 2.0 * c * u1 - u0;
    const double p2 = ((2.0 * k + 3.0) * c * p1 - (k + 1.0) * p0) / (k + 2.0);
    t0 = t1, t1 = t2;
    u0 = u1, u1 = u2;
    p0 = p1, p1 = p2;
  }
  return out;
}

inline void check_count(int count) {
  if (count < 1)
    throw contract_violation("moment count must be positive, got " + std::to_string(count));
  if (count > kMaxMomentCount)
    throw overflow_risk("moment count " + std::to_string(count) +
                        " exceeds 33; Legendre conversion would lose accuracy");
}

}  // namespace detail

/// Power moments J[n] = int_{-1}^{1} t^n u(t) dt for n in [0, count).
inline std::vector<double> power_moments(KernelKind kind, const FieldPoint& point, int count,
                                         MomentScheme scheme = MomentScheme::automatic) {
  detail::check_count(count);
  if (kind == KernelKind::unit) {
    std::vector<double> out(count);
    for (int n = 0; n < count; ++n) out[n] = detail::monomial_integral(n);
    return out;
  }
  if (scheme == MomentScheme::automatic)
    scheme = point.radius() > kSeriesSwitchRadius ? MomentScheme::far_field_series
                                                  : MomentScheme::forward_recursion;
  if (scheme == MomentScheme::far_field_series)
    return detail::series_moments(kind, point, count);

  switch (kind) {
    case KernelKind::log: return detail::log_forward(point, count);
    case KernelKind::inv_r: return detail::inv_r_forward(point, count);
    case KernelKind::inv_r2: return detail::inv_r2_forward(point, count);
    case KernelKind::unit: break;
  }
  return {};
}

/// Monomial coefficients of P_n: legendre_coefficients()[n][k] multiplies
/// t^k.  Built once by the coefficient form of the three-term recurrence.
inline const std::vector<std::vector<double>>& legendre_coefficients() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> c(kMaxMomentCount);
    c[0] = {1.0};
    c[1] = {0.0, 1.0};
    for (int n = 1; n + 1 < kMaxMomentCount; ++n) {
      std::vector<double> next(n + 2, 0.0);
      for (int k = 0; k <= n; ++k) next[k + 1] += (2.0 * n + 1.0) * c[n][k] / (n + 1.0);
      for (int k = 0; k < n; ++k) next[k] -= n * c[n - 1][k] / (n + 1.0);
      c[n + 1] = std::move(next);
    }
    return c;
  }();
  return table;
}

/// Legendre moments m[n] = sum_k c_{n,k} J[k].
inline std::vector<double> legendre_moments(std::span<const double> power) {
  if (power.size() > static_cast<std::size_t>(kMaxMomentCount))
    throw overflow_risk("legendre_moments: at most 33 power moments supported, got " +
                        std::to_string(power.size()));
  const auto& coeff = legendre_coefficients();
  std::vector<double> out(power.size(), 0.0);
  for (std::size_t n = 0; n < power.size(); ++n) {
    double sum = 0.0;
    // Only terms of matching parity are non-zero.
    for (std::size_t k = n % 2; k <= n; k += 2) sum += coeff[n][k] * power[k];
    out[n] = sum;
  }
  return out;
}

/// Power and Legendre moments of one kernel at one field point.
struct MomentSet {
  KernelKind kernel;
  FieldPoint point;
  std::vector<double> power;     // J[n]
  std::vector<double> legendre;  // m[n]

  int max_degree() const { return static_cast<int>(power.size()) - 1; }
};

// The monomial-to-Legendre coefficients reach ~1e8 by degree 32, so the
// conversion amplifies input rounding accordingly.  For the unit kernel the
// answer is known exactly and is used instead.
inline std::vector<double> kernel_legendre_moments(KernelKind kind, std::span<const double> power) {
  if (kind != KernelKind::unit) return legendre_moments(power);
  std::vector<double> out(power.size(), 0.0);
  if (!out.empty()) out[0] = 2.0;
  return out;
}

inline MomentSet make_moment_set(KernelKind kind, const FieldPoint& point, int count,
                                 MomentScheme scheme = MomentScheme::automatic) {
  auto power = power_moments(kind, point, count, scheme);
  auto legendre = kernel_legendre_moments(kind, power);
  return MomentSet{kind, point, std::move(power), std::move(legendre)};
}

}  // namespace nearquad

#endif  // NEARQUAD_MOMENTS_HPP
