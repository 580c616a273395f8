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

#include "okgd/distribution.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "okgd/error.hpp"
#include "okgd/rng.hpp"

namespace okgd {
namespace {

const KernelSpec kGauss = KernelSpec::gaussian(0.5);

FiniteDistribution noisy_regression(std::size_t m, double sigma, std::vector<double>* fstar = nullptr) {
  auto support = uniform_grid(-1.0, 1.0, m);
  std::vector<double> targets;
  for (const auto& x : support) {
    targets.push_back(eval(kGauss, x, Point{-0.5}) - 0.7 * eval(kGauss, x, Point{0.0}) +
                      0.4 * eval(kGauss, x, Point{0.5}));
  }
  if (fstar) *fstar = targets;
  std::vector<double> probs(m, 1.0 / m);
  return FiniteDistribution::regression(support, probs, targets, {-sigma, sigma}, {0.5, 0.5});
}

RkhsFunction random_function(std::mt19937_64& gen, std::size_t n, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts;
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({u(gen)});
    c.push_back(spread * u(gen));
  }
  return RkhsFunction::from_expansion(kGauss, pts, c);
}

TEST(FiniteDistributionTest, ValidateRejects) {
  EXPECT_THROW(FiniteDistribution::regression({Point{0}, Point{1}}, {0.5, 0.6}, {0, 0}, {0}, {1}), InputError);
  EXPECT_THROW(FiniteDistribution::regression({Point{0}}, {-0.1}, {0}, {0}, {1}), InputError);
  EXPECT_THROW(FiniteDistribution::classification({Point{0}}, {1.0}, {1.2}), InputError);
}

TEST(Sampling, SinglePointDeterministicLabel) {
  const auto d = FiniteDistribution::regression({Point{0.3}}, {1.0}, {0.7}, {0.0}, {1.0});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto s = sample(d, rng);
    EXPECT_EQ(s.index, 0u);
    EXPECT_EQ(s.x[0], 0.3);
    EXPECT_EQ(s.y, 0.7);
  }
}

TEST(Sampling, AllPositiveLabels) {
  const auto d = FiniteDistribution::classification(uniform_grid(-1, 1, 5), std::vector<double>(5, 0.2),
                                                    std::vector<double>(5, 1.0));
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample(d, rng).y, 1.0);
}

TEST(Sampling, FrequenciesWithinFourStandardErrors) {
  const std::vector<double> probs = {0.05, 0.15, 0.3, 0.1, 0.4};
  const auto d = FiniteDistribution::regression(uniform_grid(0, 1, 5), probs, std::vector<double>(5, 0.0),
                                                {-1.0, 1.0}, {0.25, 0.75});
  Rng rng(3);
  const std::size_t n = 1000000;
  std::vector<std::size_t> counts(5, 0);
  std::size_t plus = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = sample(d, rng);
    ++counts[s.index];
    plus += s.y > 0;
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const double se = std::sqrt(probs[i] * (1 - probs[i]) / n);
    EXPECT_LE(std::abs(static_cast<double>(counts[i]) / n - probs[i]), 4 * se);
  }
  EXPECT_LE(std::abs(static_cast<double>(plus) / n - 0.75), 4 * std::sqrt(0.75 * 0.25 / n));
}

TEST(Sampling, DeterministicPerSeed) {
  const auto d = noisy_regression(7, 0.3);
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    const auto sa = sample(d, a);
    const auto sb = sample(d, b);
    EXPECT_EQ(sa.index, sb.index);
    EXPECT_EQ(sa.y, sb.y);
  }
}

TEST(ExactRisk, Examples) {
  const auto d = FiniteDistribution::regression({Point{0.0}}, {1.0}, {1.0}, {0.0}, {1.0});
  const auto o = solve_f_H(d, LossModel::least_squares(), kGauss);
  EXPECT_DOUBLE_EQ(exact_risk(o, RkhsFunction(kGauss)), 0.5);
}

TEST(ExactRisk, KernelMismatchThrows) {
  const auto o = solve_f_H(noisy_regression(5, 0.1), LossModel::least_squares(), kGauss);
  EXPECT_THROW(exact_risk(o, RkhsFunction(KernelSpec::linear())), InputError);
}

TEST(ExactRisk, MatchesMonteCarlo) {
  const auto d = noisy_regression(5, 0.3);
  for (const auto& loss : {LossModel::least_squares(), LossModel::huber()}) {
    const auto o = solve_f_H(d, loss, kGauss);
    std::mt19937_64 gen(4);
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
      const auto f = random_function(gen, 4, 2.0);
      const double exact = exact_risk(o, f);
      const std::size_t n = 100000;
      double s = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto z = sample(d, rng);
        const double v = loss.value(z.y, evaluate(f, z.x));
        s += v;
        s2 += v * v;
      }
      const double mean = s / n;
      const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
      EXPECT_LE(std::abs(mean - exact), 3 * se + 1e-12) << loss.name();
    }
  }
}

TEST(SolveFH, NoiselessInterpolation) {
  std::vector<double> fstar;
  const auto d = noisy_regression(20, 0.0, &fstar);
  const auto o = solve_f_H(d, LossModel::least_squares(), kGauss);
  for (std::size_t i = 0; i < fstar.size(); ++i) EXPECT_NEAR(o.f_H_values[i], fstar[i], 1e-8);
  EXPECT_NEAR(o.risk_at_f_H, 0.0, 1e-10);
  const auto f_H = RkhsFunction::from_expansion(kGauss, d.support_x, o.f_H_coeffs);
  EXPECT_NEAR(excess_risk(o, f_H), 0.0, 1e-10);
  EXPECT_NEAR(excess_risk(o, RkhsFunction(kGauss)), exact_risk(o, RkhsFunction(kGauss)), 1e-12);
}

TEST(SolveFH, NoisyLeastSquaresBiasVariance) {
  std::vector<double> fstar;
  const double sigma = 0.3;
  const auto d = noisy_regression(20, sigma, &fstar);
  const auto o = solve_f_H(d, LossModel::least_squares(), kGauss);
  EXPECT_NEAR(o.risk_at_f_H, sigma * sigma / 2, 1e-10);
  for (std::size_t i = 0; i < fstar.size(); ++i) EXPECT_NEAR(o.f_H_values[i], fstar[i], 1e-8);
  // Values reproduced by the coefficients.
  const auto f_H = RkhsFunction::from_expansion(kGauss, d.support_x, o.f_H_coeffs);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(evaluate(f_H, d.support_x[i]), o.f_H_values[i], 1e-8);
  EXPECT_NEAR(exact_risk(o, f_H), o.risk_at_f_H, 1e-10);
  EXPECT_NEAR(rkhs_norm_sq(f_H), o.f_H_norm_sq, 1e-8);
}

TEST(SolveFH, SymmetricLogisticIsZero) {
  const auto d = FiniteDistribution::classification(uniform_grid(-1, 1, 6), std::vector<double>(6, 1.0 / 6),
                                                    std::vector<double>(6, 0.5));
  const auto o = solve_f_H(d, LossModel::logistic(), kGauss);
  for (double v : o.f_H_values) EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(SolveFH, LabelModelMustMatchLoss) {
  const auto d = noisy_regression(4, 0.1);
  EXPECT_THROW(solve_f_H(d, LossModel::logistic(), kGauss), InputError);
}

TEST(SolveFH, DuplicateSupportThrows) {
  const auto d = FiniteDistribution::regression({Point{0.0}, Point{0.0}}, {0.5, 0.5}, {1, 2}, {0}, {1});
  EXPECT_THROW(solve_f_H(d, LossModel::least_squares(), kGauss), InputError);
}

TEST(SolveFH, NoFiniteMinimizerIsSolverError) {
  // Labels always +1: the logistic risk decreases forever along f -> +inf.
  const auto d = FiniteDistribution::classification({Point{0.0}}, {1.0}, {1.0});
  EXPECT_THROW(solve_f_H(d, LossModel::logistic(), kGauss), SolverError);
}

// Properties over several losses.

struct Task {
  FiniteDistribution dist;
  LossModel loss;
};

std::vector<Task> tasks() {
  auto grid = uniform_grid(-1, 1, 12);
  std::vector<double> probs(12, 1.0 / 12);
  std::vector<double> p_plus;
  for (std::size_t i = 0; i < 12; ++i) p_plus.push_back(0.15 + 0.7 * i / 11.0);
  const auto cls = FiniteDistribution::classification(grid, probs, p_plus);
  const auto reg = noisy_regression(12, 0.4);
  return {{reg, LossModel::least_squares()}, {reg, LossModel::huber()},
          {reg, LossModel::p_absolute(1.5)}, {cls, LossModel::logistic()},
          {cls, LossModel::smoothed_hinge_sq()}, {cls, LossModel::p_hinge(1.5)}};
}

TEST(OracleProperties, MinimalityOptimalityConvexity) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (const auto& task : tasks()) {
    const auto o = solve_f_H(task.dist, task.loss, kGauss);
    EXPECT_LE(o.coefficient_gradient_norm(o.f_H_values), 1e-10) << task.loss.name();
    EXPECT_LE(o.functional_gradient_norm(o.f_H_values), 1e-8) << task.loss.name();
    for (int rep = 0; rep < 100; ++rep) {
      const auto f = random_function(gen, 5);
      const auto g = random_function(gen, 3);
      EXPECT_GE(exact_risk(o, f) - o.risk_at_f_H, -1e-9);
      // Convexity along the segment, evaluated through values.
      const auto vf = o.values_of(f);
      const auto vg = o.values_of(g);
      const double l = lam(gen);
      std::vector<double> vm(vf.size());
      for (std::size_t i = 0; i < vf.size(); ++i) vm[i] = l * vf[i] + (1 - l) * vg[i];
      EXPECT_LE(o.risk_from_values(vm),
                l * o.risk_from_values(vf) + (1 - l) * o.risk_from_values(vg) + 1e-9);
      EXPECT_NEAR(o.excess_from_values(vf), excess_risk(o, f), 1e-10);
    }
  }
}

TEST(OracleProperties, SupLossesAreFinite) {
  for (const auto& task : tasks()) {
    const auto o = solve_f_H(task.dist, task.loss, kGauss);
    EXPECT_TRUE(std::isfinite(o.sup_loss_at_zero()));
    EXPECT_TRUE(std::isfinite(o.sup_loss_at_f_H()));
    EXPECT_GE(o.sup_loss_at_f_H(), 0.0);
  }
}

}  // namespace
}  // namespace okgd
