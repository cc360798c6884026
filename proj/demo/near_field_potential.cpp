// Potential of a straight panel carrying density sigma(t) = 1 + t^2, seen
// from points approaching the panel.  The single-layer kernel
// log(1/r) / (2 pi) is nearly singular when the point is close.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "nearquad/nearquad.hpp"

using namespace nearquad;

int main() {
  const auto gauss = gauss_legendre(16);
  std::printf("%8s %22s %22s %22s\n", "height", "modified rule", "Gauss-Legendre", "adaptive");
  for (double y : {1.0, 0.1, 0.01, 0.001}) {
    const auto point = FieldPoint::cartesian(0.2, y);
    const auto rule = generate_rule(RuleSpec(point, 16, 4));
    auto f = [&](double t) {
      const double sigma = 1.0 + t * t;
      return -sigma * kernel_value(KernelKind::log, point, t) / (2 * std::numbers::pi);
    };
    const double reference = oracle_integrate(f, -1.0, 1.0, 1e-13).value;
    std::printf("%8g %22.15e %22.15e %22.15e\n", y, apply_rule(rule, f), apply_gauss(gauss, f),
                reference);
  }
}
