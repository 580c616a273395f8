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

#include "okgd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "okgd/error.hpp"

namespace okgd {

namespace {

constexpr double kEndpointTol = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Shared decision for eta_t ~ t^-theta.
ConditionVerdict polynomial_rule(double theta, StepCondition condition,
                                 double alpha) {
  const bool divergent = theta <= 1.0 + kEndpointTol;
  if (!divergent) {
    return {Verdict::kFails,
            "theta = " + fmt(theta) + " > 1: sum of step sizes converges"};
  }
  switch (condition) {
    case StepCondition::kNecessary:
      return {Verdict::kHolds,
              "theta = " + fmt(theta) + " <= 1: sum of step sizes diverges"};
    case StepCondition::kSufficientExpectation: {
      const double lo = 1.0 / (2.0 + alpha);
      if (std::abs(theta - lo) <= kEndpointTol) {
        return {Verdict::kFails, "theta at excluded endpoint 1/(2+alpha) = " +
                                     fmt(lo) +
                                     ": eta_t^alpha sum eta_k^2 stays bounded "
                                     "away from 0"};
      }
      if (theta < lo) {
        return {Verdict::kFails, "theta = " + fmt(theta) +
                                     " <= 1/(2+alpha) = " + fmt(lo) +
                                     ": eta_t^alpha sum eta_k^2 does not vanish"};
      }
      return {Verdict::kHolds, "theta = " + fmt(theta) + " in (1/(2+alpha), 1] = (" +
                                   fmt(lo) + ", 1]"};
    }
    case StepCondition::kAlmostSure: {
      const double lo = 1.0 / (1.0 + alpha);
      if (std::abs(theta - lo) <= kEndpointTol) {
        return {Verdict::kFails, "theta at excluded endpoint 1/(1+alpha) = " +
                                     fmt(lo) +
                                     ": sum eta_t^(1+alpha) is harmonic"};
      }
      if (theta < lo) {
        return {Verdict::kFails, "theta = " + fmt(theta) +
                                     " < 1/(1+alpha) = " + fmt(lo) +
                                     ": sum eta_t^(1+alpha) diverges"};
      }
      return {Verdict::kHolds, "theta = " + fmt(theta) + " in (1/(1+alpha), 1] = (" +
                                   fmt(lo) + ", 1]"};
    }
  }
  return {Verdict::kFails, "unknown condition"};
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InputError("smoothness exponent alpha must lie in (0, 1]");
  }
}

}  // namespace

StepSchedule StepSchedule::polynomial(double eta1, double theta) {
  StepSchedule s;
  s.family = ScheduleFamily::kPolynomial;
  s.eta1 = eta1;
  s.theta = theta;
  s.validate();
  return s;
}

StepSchedule StepSchedule::poly_log(double eta1, double beta,
                                    double alpha_ref) {
  StepSchedule s;
  s.family = ScheduleFamily::kPolyLog;
  s.eta1 = eta1;
  s.beta = beta;
  s.alpha_ref = alpha_ref;
  s.validate();
  return s;
}

StepSchedule StepSchedule::constant(double eta) {
  StepSchedule s;
  s.family = ScheduleFamily::kConstant;
  s.eta = eta;
  s.validate();
  return s;
}

void StepSchedule::validate() const {
  switch (family) {
    case ScheduleFamily::kPolynomial:
      if (!(eta1 > 0.0) || !std::isfinite(eta1)) {
        throw InputError("polynomial schedule: eta1 must be positive");
      }
      if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw InputError("polynomial schedule: theta must be >= 0");
      }
      break;
    case ScheduleFamily::kPolyLog:
      if (!(eta1 > 0.0) || !std::isfinite(eta1)) {
        throw InputError("poly_log schedule: eta1 must be positive");
      }
      if (!(beta > 1.0) || !std::isfinite(beta)) {
        throw InputError("poly_log schedule: beta must be > 1");
      }
      if (!(alpha_ref > 0.0 && alpha_ref <= 1.0)) {
        throw InputError("poly_log schedule: alpha_ref must lie in (0, 1]");
      }
      break;
    case ScheduleFamily::kConstant:
      if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw InputError("constant schedule: eta must be positive");
      }
      break;
  }
}

std::string StepSchedule::name() const {
  switch (family) {
    case ScheduleFamily::kPolynomial:
      return "polynomial";
    case ScheduleFamily::kPolyLog:
      return "poly_log";
    case ScheduleFamily::kConstant:
      return "constant";
  }
  return "unknown";
}

double StepSchedule::initial() const { return step_size(*this, 1.0); }

double step_size(const StepSchedule& schedule, double t) {
  if (!(t >= 1.0)) throw InputError("step_size: t must be >= 1");
  switch (schedule.family) {
    case ScheduleFamily::kPolynomial:
      return schedule.eta1 * std::pow(t, -schedule.theta);
    case ScheduleFamily::kPolyLog: {
      // t log^beta t < 1 near t = 1 (including the log 1 = 0 singularity);
      // capping at eta1 keeps the family non-increasing.
      const double base = t * std::pow(std::log(t), schedule.beta);
      if (!(base > 1.0)) return schedule.eta1;
      return schedule.eta1 * std::pow(base, -1.0 / (1.0 + schedule.alpha_ref));
    }
    case ScheduleFamily::kConstant:
      return schedule.eta;
  }
  return 0.0;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds:
      return "holds";
    case Verdict::kFails:
      return "fails";
    case Verdict::kBoundary:
      return "boundary";
  }
  return "unknown";
}

ConditionVerdict check_sufficient_expectation(const StepSchedule& schedule,
                                              double alpha) {
  check_alpha(alpha);
  switch (schedule.family) {
    case ScheduleFamily::kPolynomial:
      return polynomial_rule(schedule.theta,
                             StepCondition::kSufficientExpectation, alpha);
    case ScheduleFamily::kPolyLog:
      // Exponent 1/(1+alpha_ref) < 1 makes sum eta_t diverge, while
      // sum eta_t^2 = sum (t log^beta t)^(-2/(1+alpha_ref)) converges for
      // beta > 1, so eta_t^alpha times it vanishes.
      return {Verdict::kHolds,
              "poly_log: sum eta_t diverges and sum eta_t^2 converges (beta > 1)"};
    case ScheduleFamily::kConstant:
      return {Verdict::kFails,
              "constant: eta^alpha sum_{k<=t} eta^2 grows linearly in t"};
  }
  return {Verdict::kFails, "unknown schedule"};
}

ConditionVerdict check_necessary(const StepSchedule& schedule) {
  switch (schedule.family) {
    case ScheduleFamily::kPolynomial:
      return polynomial_rule(schedule.theta, StepCondition::kNecessary, 1.0);
    case ScheduleFamily::kPolyLog:
      return {Verdict::kHolds,
              "poly_log: exponent 1/(1+alpha_ref) < 1, sum eta_t diverges"};
    case ScheduleFamily::kConstant:
      return {Verdict::kHolds, "constant: sum eta_t diverges"};
  }
  return {Verdict::kFails, "unknown schedule"};
}

ConditionVerdict check_almost_sure(const StepSchedule& schedule,
                                   double alpha) {
  check_alpha(alpha);
  switch (schedule.family) {
    case ScheduleFamily::kPolynomial:
      return polynomial_rule(schedule.theta, StepCondition::kAlmostSure, alpha);
    case ScheduleFamily::kPolyLog: {
      // sum eta_t^(1+alpha) = sum (t log^beta t)^(-(1+alpha)/(1+alpha_ref)).
      const double power = (1.0 + alpha) / (1.0 + schedule.alpha_ref);
      if (std::abs(power - 1.0) <= kEndpointTol) {
        return {Verdict::kHolds,
                "poly_log with alpha_ref = alpha: sum 1/(t log^beta t) "
                "converges since beta > 1"};
      }
      if (power > 1.0) {
        return {Verdict::kHolds, "poly_log: sum eta_t^(1+alpha) has exponent " +
                                     fmt(power) + " > 1"};
      }
      return {Verdict::kFails, "poly_log: sum eta_t^(1+alpha) has exponent " +
                                   fmt(power) + " < 1 and diverges"};
    }
    case ScheduleFamily::kConstant:
      return {Verdict::kFails, "constant: sum eta^(1+alpha) diverges"};
  }
  return {Verdict::kFails, "unknown schedule"};
}

ConditionVerdict check_heuristic(const std::function<double(double)>& eta,
                                 StepCondition condition, double alpha) {
  check_alpha(alpha);
  const double t0 = 1e6;
  const double t1 = 1e7;
  const double e0 = eta(t0);
  const double e1 = eta(t1);
  if (!(e0 > 0.0) || !(e1 > 0.0)) {
    return {Verdict::kBoundary, "non-positive step size in probe window", true};
  }
  const double theta = -std::log(e1 / e0) / std::log(t1 / t0);
  ConditionVerdict v = polynomial_rule(std::max(theta, 0.0), condition, alpha);
  v.heuristic = true;
  v.reason = "heuristic (local exponent " + fmt(theta) + "): " + v.reason;
  std::vector<double> thresholds = {1.0};
  if (condition == StepCondition::kSufficientExpectation) {
    thresholds.push_back(1.0 / (2.0 + alpha));
  } else if (condition == StepCondition::kAlmostSure) {
    thresholds.push_back(1.0 / (1.0 + alpha));
  }
  for (double th : thresholds) {
    if (std::abs(theta - th) < 0.02) v.verdict = Verdict::kBoundary;
  }
  return v;
}

}  // namespace okgd
