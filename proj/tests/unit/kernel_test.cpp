/*
 * Copyright 2026 The okgd Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "okgd/kernel.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "okgd/error.hpp"

namespace okgd {
namespace {

std::vector<Point> random_points(std::mt19937_64& gen, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Point> pts(n, Point(d));
  for (auto& p : pts) {
    for (auto& v : p) v = u(gen);
  }
  return pts;
}

TEST(KernelEval, GaussianSelfIsOne) {
  for (double bw : {0.01, 0.5, 3.0}) {
    const Point x = {0.3, -1.7};
    EXPECT_EQ(eval(KernelSpec::gaussian(bw), x, x), 1.0);
  }
}

TEST(KernelEval, LinearDotProduct) {
  EXPECT_DOUBLE_EQ(eval(KernelSpec::linear(), Point{1, 2}, Point{3, 4}), 11.0);
}

TEST(KernelEval, GaussianClosedForm) {
  EXPECT_NEAR(eval(KernelSpec::gaussian(1.0), Point{0}, Point{2}), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(eval(KernelSpec::gaussian(1.0), Point{0}, Point{2}), 0.135335, 1e-6);
}

TEST(KernelEval, PolynomialClosedForm) {
  EXPECT_DOUBLE_EQ(eval(KernelSpec::polynomial(3, 1.0), Point{1, 1}, Point{2, -0.5}),
                   std::pow(1.5 + 1.0, 3));
}

TEST(KernelEval, DimensionMismatchThrows) {
  EXPECT_THROW(eval(KernelSpec::linear(), Point{1, 2}, Point{1}), InputError);
  EXPECT_THROW(gram(KernelSpec::linear(), {Point{1, 2}, Point{1}}), InputError);
}

TEST(KernelSpecTest, ValidateRejectsBadParameters) {
  EXPECT_THROW(KernelSpec::gaussian(0.0), InputError);
  EXPECT_THROW(KernelSpec::gaussian(-1.0), InputError);
  EXPECT_THROW(KernelSpec::polynomial(0, 1.0), InputError);
  EXPECT_THROW(KernelSpec::polynomial(2, -0.1), InputError);
}

TEST(Gram, SinglePoint) {
  const auto g = gram(KernelSpec::gaussian(0.7), {Point{0.2}});
  ASSERT_EQ(g.rows(), 1);
  EXPECT_EQ(g(0, 0), 1.0);
}

TEST(Gram, IdenticalPoints) {
  const auto g = gram(KernelSpec::gaussian(0.7), {Point{0.2}, Point{0.2}});
  EXPECT_EQ(g, Eigen::MatrixXd::Ones(2, 2));
}

TEST(Gram, EntriesMatchEval) {
  std::mt19937_64 gen(3);
  const auto pts = random_points(gen, 7, 3);
  const auto k = KernelSpec::polynomial(2, 0.5);
  const auto g = gram(k, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      EXPECT_EQ(g(i, j), eval(k, pts[i], pts[j]));
    }
  }
}

TEST(KappaBound, Examples) {
  EXPECT_EQ(kappa_bound(KernelSpec::gaussian(0.3), {}), 1.0);
  EXPECT_EQ(kappa_bound(KernelSpec::gaussian(0.3), {Point{5.0}}), 1.0);
  EXPECT_DOUBLE_EQ(kappa_bound(KernelSpec::linear(), {Point{3, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(kappa_bound(KernelSpec::polynomial(2, 1.0), {Point{1, 0}, Point{0, 2}}), 5.0);
  EXPECT_THROW(kappa_bound(KernelSpec::linear(), {}), InputError);
}

// Properties.

class KernelFamilies : public ::testing::TestWithParam<KernelSpec> {};

TEST_P(KernelFamilies, Symmetric) {
  std::mt19937_64 gen(11);
  const auto k = GetParam();
  for (int i = 0; i < 10000; ++i) {
    const auto pts = random_points(gen, 2, 3);
    EXPECT_LE(std::abs(eval(k, pts[0], pts[1]) - eval(k, pts[1], pts[0])), 1e-12);
  }
}

TEST_P(KernelFamilies, GramIsPsd) {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  const auto k = GetParam();
  for (int rep = 0; rep < 100; ++rep) {
    const auto pts = random_points(gen, size(gen), 2);
    const Eigen::MatrixXd g = gram(k, pts);
    ASSERT_TRUE(g.isApprox(g.transpose(), 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * g.trace());
  }
}

TEST_P(KernelFamilies, KappaDominatesDiagonal) {
  std::mt19937_64 gen(13);
  const auto k = GetParam();
  const auto pts = random_points(gen, 40, 2);
  const double kappa = kappa_bound(k, pts);
  for (const auto& p : pts) EXPECT_LE(eval(k, p, p), kappa * kappa * (1 + 1e-15));
}

INSTANTIATE_TEST_SUITE_P(All, KernelFamilies,
                         ::testing::Values(KernelSpec::gaussian(0.5), KernelSpec::linear(),
                                           KernelSpec::polynomial(3, 1.0)),
                         [](const auto& info) {
                           switch (info.param.family) {
                             case KernelFamily::kGaussian: return std::string("gaussian");
                             case KernelFamily::kLinear: return std::string("linear");
                             default: return std::string("polynomial");
                           }
                         });

}  // namespace
}  // namespace okgd
