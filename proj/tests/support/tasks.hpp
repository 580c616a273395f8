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

#ifndef OKGD_TESTS_SUPPORT_TASKS_HPP_
#define OKGD_TESTS_SUPPORT_TASKS_HPP_

#include <vector>

#include "okgd/experiment.hpp"

namespace okgd::testing {

// m-point grid on [-1, 1], uniform marginal, f* = sum_j coeffs_j K(centers_j, .)
// plus symmetric two-point noise of size sigma.
inline FiniteDistribution grid_regression(const KernelSpec& kernel, std::size_t m, double sigma,
                                          const std::vector<double>& centers = {-0.5, 0.0, 0.5},
                                          const std::vector<double>& coeffs = {1.0, -0.7, 0.4}) {
  auto support = uniform_grid(-1.0, 1.0, m);
  std::vector<double> targets;
  for (const auto& x : support) {
    double v = 0.0;
    for (std::size_t j = 0; j < centers.size(); ++j) v += coeffs[j] * eval(kernel, Point{centers[j]}, x);
    targets.push_back(v);
  }
  return FiniteDistribution::regression(support, std::vector<double>(m, 1.0 / m), targets,
                                        {-sigma, sigma}, {0.5, 0.5});
}

inline FiniteDistribution grid_classification(std::size_t m) {
  auto support = uniform_grid(-1.0, 1.0, m);
  std::vector<double> p_plus;
  for (std::size_t i = 0; i < m; ++i) p_plus.push_back(0.2 + 0.6 * static_cast<double>(i) / (m - 1));
  return FiniteDistribution::classification(support, std::vector<double>(m, 1.0 / m), p_plus);
}

inline TrialConfig small_trial(std::size_t T_max, std::vector<std::size_t> checkpoints,
                               double theta = 2.0 / 3.0, double eta1 = 0.2) {
  TrialConfig c;
  c.kernel = KernelSpec::gaussian(0.5);
  c.loss = LossModel::least_squares();
  c.distribution = grid_regression(c.kernel, 20, 0.3);
  c.schedule = StepSchedule::polynomial(eta1, theta);
  c.variant = Variant::plain();
  c.T_max = T_max;
  c.checkpoints = std::move(checkpoints);
  c.seeds = {0};
  c.workers = 1;
  return c;
}

}  // namespace okgd::testing

#endif  // OKGD_TESTS_SUPPORT_TASKS_HPP_
