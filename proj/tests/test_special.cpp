#include <cmath>

#include <gtest/gtest.h>

#include "nearquad/special.hpp"

namespace nearquad {
namespace {

TEST(LegendreEval, ClosedForms) {
  EXPECT_EQ(legendre_eval(0, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(legendre_eval(2, 0.5), -0.125);
  EXPECT_DOUBLE_EQ(legendre_eval(5, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(legendre_eval(5, -1.0), -1.0);
  // P_3 = (5t^3 - 3t) / 2
  const double t = 0.3;
  EXPECT_NEAR(legendre_eval(3, t), 0.5 * (5 * t * t * t - 3 * t), 1e-16);
}

TEST(LegendreEval, TableMatchesPointwise) {
  double table[12];
  legendre_table(12, -0.42, table);
  for (int n = 0; n < 12; ++n) EXPECT_EQ(table[n], legendre_eval(n, -0.42)) << n;
}

TEST(GaussLegendre, SmallOrders) {
  const auto one = gauss_legendre(1);
  ASSERT_EQ(one.nodes.size(), 1u);
  EXPECT_EQ(one.nodes[0], 0.0);
  EXPECT_DOUBLE_EQ(one.weights[0], 2.0);

  const auto two = gauss_legendre(2);
  EXPECT_NEAR(two.nodes[0], -0.5773502691896257, 1e-16);
  EXPECT_NEAR(two.nodes[1], 0.5773502691896257, 1e-16);
  EXPECT_NEAR(two.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(two.weights[1], 1.0, 1e-15);
}

TEST(GaussLegendre, SixteenPointIntegratesQuadratic) {
  const auto rule = gauss_legendre(16);
  double sum = 0.0, second = 0.0;
  for (int i = 0; i < 16; ++i) {
    sum += rule.weights[i];
    second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
  }
  EXPECT_NEAR(sum, 2.0, 1e-15);
  EXPECT_NEAR(second, 2.0 / 3.0, 1e-15);
}

TEST(GaussLegendre, RejectsOutOfRangeOrder) {
  EXPECT_THROW(gauss_legendre(0), contract_violation);
  EXPECT_THROW(gauss_legendre(513), contract_violation);
  EXPECT_NO_THROW(gauss_legendre(512));
}

TEST(GaussLegendre, StructuralInvariants) {
  for (int n : {1, 2, 3, 7, 16, 33, 64, 128, 255, 512}) {
    const auto rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      EXPECT_GT(rule.weights[i], 0.0);
      EXPECT_GT(rule.nodes[i], -1.0);
      EXPECT_LT(rule.nodes[i], 1.0);
      if (i > 0) {
        EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
      }
      EXPECT_NEAR(rule.nodes[i], -rule.nodes[n - 1 - i], 1e-15);
      sum += rule.weights[i];
    }
    EXPECT_NEAR(sum, 2.0, 1e-14) << "N=" << n;
  }
}

TEST(GaussLegendre, NodesAreRootsOfLegendre) {
  for (int n = 1; n <= 64; ++n) {
    const auto rule = gauss_legendre(n);
    for (double t : rule.nodes) EXPECT_LT(std::abs(legendre_eval(n, t)), 1e-13) << n << " " << t;
  }
}

// Exactness on every monomial of degree <= 2N-1.
TEST(GaussLegendre, ExactOnMonomials) {
  for (int n = 1; n <= 64; ++n) {
    const auto rule = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
      const double exact = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
      ASSERT_NEAR(sum, exact, 5e-14) << "N=" << n << " d=" << d;
    }
  }
}

TEST(GaussLegendre, LegendreOrthogonalToConstant) {
  for (int n = 2; n <= 64; ++n) {
    const auto rule = gauss_legendre(n);
    for (int k = 1; k < n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += rule.weights[i] * legendre_eval(k, rule.nodes[i]);
      ASSERT_NEAR(sum, 0.0, 1e-13) << "N=" << n << " k=" << k;
    }
  }
}

}  // namespace
}  // namespace nearquad
