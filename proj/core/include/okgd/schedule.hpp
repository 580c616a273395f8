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

#ifndef OKGD_SCHEDULE_HPP_
#define OKGD_SCHEDULE_HPP_

#include <cstddef>
#include <functional>
#include <string>

namespace okgd {

enum class ScheduleFamily { kPolynomial, kPolyLog, kConstant };

// Step-size families:
//   polynomial  eta_t = eta1 t^-theta
//   poly_log    eta_t = eta1 min{1, (t log^beta t)^(-1/(1+alpha_ref))}
//   constant    eta_t = eta
struct StepSchedule {
  ScheduleFamily family = ScheduleFamily::kPolynomial;
  double eta1 = 0.1;
  double theta = 0.5;
  double beta = 2.0;
  double alpha_ref = 1.0;
  double eta = 0.1;

  static StepSchedule polynomial(double eta1, double theta);
  static StepSchedule poly_log(double eta1, double beta, double alpha_ref);
  static StepSchedule constant(double eta);

  void validate() const;
  std::string name() const;
  // First step size, i.e. step_size(*this, 1).
  double initial() const;
};

// Real-valued t >= 1 is accepted so the closed forms can be probed between
// integers.
double step_size(const StepSchedule& schedule, double t);
inline double step_size(const StepSchedule& schedule, std::size_t t) {
  return step_size(schedule, static_cast<double>(t));
}

enum class Verdict { kHolds, kFails, kBoundary };

std::string to_string(Verdict v);

struct ConditionVerdict {
  Verdict verdict = Verdict::kFails;
  std::string reason;
  bool heuristic = false;

  bool holds() const { return verdict == Verdict::kHolds; }
};

// sum eta_t = inf and eta_t^alpha sum_{k<=t} eta_k^2 -> 0.
ConditionVerdict check_sufficient_expectation(const StepSchedule& schedule,
                                              double alpha);
// sum eta_t = inf.
ConditionVerdict check_necessary(const StepSchedule& schedule);
// sum eta_t = inf and sum eta_t^(1+alpha) < inf.
ConditionVerdict check_almost_sure(const StepSchedule& schedule, double alpha);

enum class StepCondition { kSufficientExpectation, kNecessary, kAlmostSure };

// Partial-sum probe for schedules outside the parametric families: estimates
// the local decay exponent between t = 10^6 and t = 10^7 and applies the
// polynomial-family rule to it. Always flagged heuristic; exponents within
// 0.02 of a threshold come back as kBoundary.
ConditionVerdict check_heuristic(const std::function<double(double)>& eta,
                                 StepCondition condition, double alpha);

}  // namespace okgd

#endif  // OKGD_SCHEDULE_HPP_
