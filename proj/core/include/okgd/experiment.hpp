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

#ifndef OKGD_EXPERIMENT_HPP_
#define OKGD_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "okgd/distribution.hpp"
#include "okgd/optimizer.hpp"

namespace okgd {

struct TrialConfig {
  FiniteDistribution distribution;
  LossModel loss = LossModel::least_squares();
  KernelSpec kernel;
  StepSchedule schedule;
  Variant variant;
  std::size_t T_max = 1;
  std::vector<std::size_t> checkpoints;  // ascending, unique, last == T_max
  std::vector<std::int64_t> seeds;
  std::uint64_t base_seed = 0;
  double delta = 0.05;
  std::size_t workers = 0;  // 0: hardware concurrency
  bool drop_first_checkpoint = false;

  void validate() const;
};

// Checkpoints base^from, ..., base^to.
std::vector<std::size_t> geometric_checkpoints(std::size_t base, int from,
                                               int to);

// Constants entering the step-size caps and the deterministic iterate bounds.
struct TheoryConstants {
  double kappa = 1.0;
  double alpha = 1.0;
  double holder_L = 1.0;
  double A = 0.0;
  double B = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double eta_max = 0.0;         // 1 / (A kappa^2)
  double eta_necessity = 0.0;   // 1 / (6 L kappa^2)
  double f_H_norm_sq = 0.0;
  double sup_loss_at_zero = 0.0;
  double sup_loss_at_f_H = 0.0;
  double risk_at_f_H = 0.0;
};

TheoryConstants theory_constants(const RiskOracle& oracle,
                                 const StepSchedule& schedule);

struct CheckpointRow {
  std::size_t t = 0;
  double excess_last = 0.0;
  double excess_uniform = 0.0;
  double excess_weighted = 0.0;
  double dist_sq_to_fH = 0.0;
  double max_dist_sq_so_far = 0.0;
  // Minimum slack over the steps since the previous checkpoint; NaN when the
  // monitored inequality's hypotheses do not apply.
  double min_slack_descent = 0.0;
  double min_slack_bound = 0.0;
};

struct TrajectoryRecord {
  std::int64_t seed = 0;
  std::vector<CheckpointRow> rows;
  bool diverged = false;
  std::size_t diverged_at = 0;
  std::string divergence_message;

  // Whole-trajectory minima of each monitored inequality.
  double worst_slack_descent = 0.0;
  double worst_slack_dist_bound = 0.0;
  double worst_slack_norm_bound = 0.0;
  double worst_slack_loss_sum_bound = 0.0;
  bool descent_monitored = false;
  bool bounds_monitored = false;

  // Only filled when requested through TrialOptions.
  std::vector<RkhsFunction> snapshots_last;
  std::vector<RkhsFunction> snapshots_weighted;
  std::vector<RkhsFunction> snapshots_uniform;
};

struct TrialOptions {
  bool keep_snapshots = false;
  // Called once per step with the state *before* the step is applied.
  std::function<void(const OptimizerState&)> observer;
};

TrajectoryRecord run_trial(const TrialConfig& config, const RiskOracle& oracle,
                           std::int64_t seed, const TrialOptions& options = {});
// Solves for f_H first.
TrajectoryRecord run_trial(const TrialConfig& config, std::int64_t seed);

// One trial per seed on a worker pool; results are in seed order.
// Errors other than divergence abort the sweep; the one from the lowest seed
// index is rethrown. An observer in `options` is called from worker threads.
std::vector<TrajectoryRecord> run_sweep(const TrialConfig& config,
                                        const RiskOracle& oracle,
                                        const std::vector<std::int64_t>& seeds,
                                        const TrialOptions& options = {});
std::vector<TrajectoryRecord> run_sweep(const TrialConfig& config,
                                        const std::vector<std::int64_t>& seeds,
                                        const TrialOptions& options = {});

enum class Metric {
  kExcessLast,
  kExcessUniform,
  kExcessWeighted,
  kDistSq,
  kMaxDistSq,
};

std::string to_string(Metric m);
std::optional<Metric> metric_from_string(const std::string& name);
double metric_value(const CheckpointRow& row, Metric m);

using Curve = std::vector<std::pair<std::size_t, double>>;

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  std::size_t dropped = 0;  // non-positive values
  std::size_t clamped = 0;  // raised to the floor by fit_curve
};

// OLS of log(value) on log(T).
RateFit fit_rate(const Curve& points);

// fit_rate after raising values below `floor` to `floor`, optionally without
// the first point.
RateFit fit_curve(Curve points, bool drop_first, double floor = 1e-16);

// Nearest-rank q-quantile across non-diverged records at every checkpoint.
Curve quantile_curve(const std::vector<TrajectoryRecord>& records, Metric metric,
                     double q);
Curve mean_curve(const std::vector<TrajectoryRecord>& records, Metric metric);
Curve record_curve(const TrajectoryRecord& record, Metric metric);

// min of the curve over checkpoints in [floor(T/2), T].
double last_iterate_window_min(const Curve& curve, std::size_t T);
double last_iterate_window_min(const TrajectoryRecord& record, std::size_t T);

}  // namespace okgd

#endif  // OKGD_EXPERIMENT_HPP_
