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

#ifndef OKGD_VERIFY_HPP_
#define OKGD_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "okgd/distribution.hpp"
#include "okgd/experiment.hpp"
#include "okgd/loss.hpp"
#include "okgd/schedule.hpp"

namespace okgd {

struct VerificationReport {
  static constexpr std::size_t kMaxWitnesses = 10;

  std::string check_name;
  std::size_t trials = 0;
  double worst_slack = 0.0;
  std::size_t failures = 0;
  std::vector<std::vector<double>> failure_witnesses;
  double tolerance = 0.0;
  bool negative_control = false;
  bool skipped = false;
  bool proxy = false;  // finite-horizon stand-in for an asymptotic statement
  std::string note;

  // Records one evaluated slack and the inputs that produced it.
  void record(double slack, std::vector<double> witness);

  // Regular checks: no failures. Negative controls: at least one failure.
  bool ok() const;
};

// L |s - s~|^alpha - |phi'(y,s) - phi'(y,s~)| >= -1e-10.
VerificationReport verify_holder(const LossModel& loss, std::size_t n_trials,
                                 std::uint64_t seed = 0);

// Both sides of the Hölder-gradient sandwich for g(s) = phi(y, s):
//   alpha |g'(s) - g'(s~)|^((1+alpha)/alpha) / ((1+alpha) L^(1/alpha))
//     <= g(s) - g(s~) - (s - s~) g'(s~) <= L |s - s~|^(1+alpha) / (1+alpha).
// The reported slack is the smaller of the two; tolerance 1e-9.
VerificationReport verify_smoothness_sandwich(const LossModel& loss,
                                              std::size_t n_trials,
                                              std::uint64_t seed = 0);

// A phi(y,s) + B - |phi'(y,s)|^2 >= -1e-10.
VerificationReport verify_self_bounding(const LossModel& loss,
                                        std::size_t n_trials,
                                        std::uint64_t seed = 0);

// For beta in {alpha, 1} and every iterate (given by its support values),
//   E|phi'(y, f(x))|^(1+beta) <= 2^beta L^(1/alpha) (1+beta) [E(f) - E(f_H)]
//     + 2^beta (1 - alpha beta) / (1 + alpha) + 2^beta E|phi'(y, f_H(x))|^(1+beta)
// evaluated exactly over the finite distribution; tolerance 1e-8.
VerificationReport verify_gradient_bound_lemma(
    const RiskOracle& oracle, const std::vector<std::vector<double>>& iterates);

// r_t = (sum_{k<=t} eta_k)^-1 sum_{k<=t} eta_k^2 at t = 2^j up to horizon:
// decreasing over the second half of the grid and r_H < r_{H/16}. Skipped
// when eta_t does not vanish or sum eta_t converges.
VerificationReport verify_series_lemma(const StepSchedule& schedule,
                                       std::size_t horizon);

// Hölder, sandwich and self-bounding checks for one loss, followed by their
// negative controls: the same checks run against L/2 (Hölder, sandwich) and
// A/4 with B = 0 (self-bounding), which must report failures.
std::vector<VerificationReport> verify_loss_suite(const LossModel& loss,
                                                  std::size_t n_trials,
                                                  std::uint64_t seed = 0);

// Aggregates the per-step slacks monitored by run_trial.
VerificationReport descent_inequality_report(
    const std::vector<TrajectoryRecord>& records);
VerificationReport iterate_bound_report(
    const std::vector<TrajectoryRecord>& records);

}  // namespace okgd

#endif  // OKGD_VERIFY_HPP_
