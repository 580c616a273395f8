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

#ifndef OKGD_DISTRIBUTION_HPP_
#define OKGD_DISTRIBUTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "okgd/kernel.hpp"
#include "okgd/loss.hpp"
#include "okgd/rkhs_function.hpp"
#include "okgd/rng.hpp"

namespace okgd {

struct LabelAtom {
  double y = 0.0;
  double p = 0.0;
};

// Joint distribution with finite support in both x and y, so E(f) is a finite
// sum and f_H can be solved for. labels[i] is the conditional law of y given
// x = support_x[i].
struct FiniteDistribution {
  std::vector<Point> support_x;
  std::vector<double> probs_x;
  LabelDomain label_kind = LabelDomain::kRegression;
  std::vector<std::vector<LabelAtom>> labels;

  // y = targets[i] + noise, noise drawn from (noise_values, noise_probs).
  static FiniteDistribution regression(std::vector<Point> support,
                                       std::vector<double> probs,
                                       const std::vector<double>& targets,
                                       const std::vector<double>& noise_values,
                                       const std::vector<double>& noise_probs);
  // y in {-1, +1} with P(y = +1 | x_i) = p_plus[i].
  static FiniteDistribution classification(std::vector<Point> support,
                                           std::vector<double> probs,
                                           const std::vector<double>& p_plus);

  std::size_t size() const { return support_x.size(); }
  std::size_t dim() const { return support_x.empty() ? 0 : support_x[0].size(); }
  void validate() const;
  // E[y | x_i].
  std::vector<double> conditional_mean() const;
};

std::vector<Point> uniform_grid(double lo, double hi, std::size_t m);

struct Sample {
  std::size_t index = 0;
  std::span<const double> x;
  double y = 0.0;
};

Sample sample(const FiniteDistribution& dist, Rng& rng);

// Exact population quantities for one (distribution, loss, kernel) task.
struct RiskOracle {
  FiniteDistribution dist;
  LossModel loss = LossModel::least_squares();
  KernelSpec kernel;
  Eigen::MatrixXd gram;            // Gram of dist.support_x
  RkhsFunction f_H{KernelSpec{}};  // expansion over dist.support_x
  std::vector<double> f_H_coeffs;
  std::vector<double> f_H_values;  // f_H(x_i)
  double f_H_norm_sq = 0.0;
  double risk_at_f_H = 0.0;
  double kappa = 1.0;

  // E(f) for f given through its values at the support points.
  double risk_from_values(std::span<const double> values) const;
  double excess_from_values(std::span<const double> values) const;
  std::vector<double> values_of(const RkhsFunction& f) const;

  // d_i = p_i E[phi'(y, f(x_i)) | x_i]; the coefficient-space gradient of
  // E(sum_i c_i K_{x_i}) is G d and the functional gradient is
  // sum_i d_i K_{x_i}.
  std::vector<double> weighted_derivatives(std::span<const double> values) const;
  double coefficient_gradient_norm(std::span<const double> values) const;
  double functional_gradient_norm(std::span<const double> values) const;

  // sup over the label support of phi(y, 0).
  double sup_loss_at_zero() const;
  // sup over the support of (x, y) of phi(y, f_H(x)).
  double sup_loss_at_f_H() const;
};

double exact_risk(const RiskOracle& oracle, const RkhsFunction& f);
// exact_risk(f) - E(f_H), clamped at 0.
double excess_risk(const RiskOracle& oracle, const RkhsFunction& f);

// Minimizes E over span{K_{x_i}}. E depends on f only through the values
// v_i = f(x_i), and is separable in them, so each v_i is the minimizer of the
// one-dimensional convex function v -> E[phi(y, v) | x_i] (the conditional
// mean for least squares). The coefficients then solve G c = v in the
// least-squares sense; every solution represents the same function.
RiskOracle solve_f_H(const FiniteDistribution& dist, const LossModel& loss,
                     const KernelSpec& kernel);

}  // namespace okgd

#endif  // OKGD_DISTRIBUTION_HPP_
