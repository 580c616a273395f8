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

#ifndef OKGD_OPTIMIZER_HPP_
#define OKGD_OPTIMIZER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "okgd/kernel.hpp"
#include "okgd/loss.hpp"
#include "okgd/rkhs_function.hpp"
#include "okgd/schedule.hpp"

namespace okgd {

enum class VariantKind { kPlain, kRegularized, kProjected };

struct Variant {
  VariantKind kind = VariantKind::kPlain;
  double lambda = 0.0;  // regularized
  double radius = 0.0;  // projected

  static Variant plain() { return {}; }
  static Variant regularized(double lambda);
  static Variant projected(double radius);

  std::string name() const;
};

// 1 / (A kappa^2), the cap on eta_t under which the iterate bounds hold.
double max_step_bound(const LossModel& loss, double kappa);
// 1 / (6 L kappa^2), the cap used by the necessity argument for smooth losses.
double necessity_step_cap(const LossModel& loss, double kappa);

// Everything a monitor needs to reconstruct one update
//   f_{t+1} = r * (shrink * f_t + coeff * K_{x_t}).
struct StepInfo {
  std::size_t t = 0;
  double eta = 0.0;
  std::size_t probe = 0;       // probe id of x_t
  double y = 0.0;
  double value_before = 0.0;   // f_t(x_t)
  double gradient = 0.0;       // phi'(y_t, f_t(x_t))
  double shrink = 1.0;         // 1 or 1 - lambda eta_t
  double coeff = 0.0;          // -eta_t * gradient
  double projection = 1.0;     // ball projection factor
  double k_xx = 0.0;           // K(x_t, x_t)
  double norm_sq_before = 0.0;
  double norm_sq_after = 0.0;
};

// One online gradient descent trajectory. Values of the iterate at
// registered probe points are kept current through
//   f_{t+1}(p) = r (shrink f_t(p) + coeff K(x_t, p)),
// so a step costs O(#probes) once x_t is a probe.
//
// Both running averages hold f_1..f_{t-1} (f_k pushed with weight eta_k
// right before step k).
class OptimizerState {
 public:
  OptimizerState(Variant variant, StepSchedule schedule, LossModel loss,
                 KernelSpec kernel);

  std::size_t register_probe(std::span<const double> x);
  std::optional<std::size_t> find_probe(std::span<const double> x) const;
  std::size_t probe_count() const { return probe_values_.size(); }
  double probe_value(std::size_t id) const { return probe_values_[id]; }
  std::span<const double> probe_values() const { return probe_values_; }
  std::span<const double> probe_point(std::size_t id) const {
    return probe_points_[id];
  }
  double probe_kernel(std::size_t a, std::size_t b) const {
    return kcache_[a][b];
  }

  // Dispatches on the variant.
  StepInfo step(std::span<const double> x, double y);
  StepInfo ogd_step(std::span<const double> x, double y);
  StepInfo regularized_step(std::span<const double> x, double y);
  StepInfo projected_step(std::span<const double> x, double y);

  std::size_t t() const { return t_; }
  const RkhsFunction& model() const { return model_; }
  const Variant& variant() const { return variant_; }
  const StepSchedule& schedule() const { return schedule_; }
  const LossModel& loss() const { return loss_; }
  const KernelSpec& kernel() const { return kernel_; }

  // Maintained |f_t|^2.
  double norm_sq() const { return norm_sq_; }
  // |f_t|^2 = scale sum_j c_j f_t(x_j) through the probe values, O(t).
  double recompute_norm_sq() const;

  const RunningAverage& average(AverageKind kind) const {
    return kind == AverageKind::kUniform ? uniform_ : weighted_;
  }
  // Averages of f_1..f_t, i.e. including the current iterate.
  RkhsFunction average_with_current(AverageKind kind) const;
  // sum_{k<t} w_k f_k(p) for every probe, and the matching total weight.
  std::span<const double> average_sums(AverageKind kind) const {
    return kind == AverageKind::kUniform ? uniform_sums_ : weighted_sums_;
  }
  double average_weight(AverageKind kind) const {
    return average(kind).total_weight();
  }

 private:
  StepInfo apply(std::span<const double> x, double y, double lambda,
                 bool project);

  Variant variant_;
  StepSchedule schedule_;
  LossModel loss_;
  KernelSpec kernel_;
  RkhsFunction model_;
  std::size_t t_ = 1;
  double norm_sq_ = 0.0;

  std::vector<Point> probe_points_;
  std::vector<double> probe_values_;
  std::vector<std::vector<double>> kcache_;
  std::unordered_map<std::string, std::size_t> probe_index_;
  std::vector<std::size_t> term_probe_;

  RunningAverage uniform_;
  RunningAverage weighted_;
  std::vector<double> uniform_sums_;
  std::vector<double> weighted_sums_;
};

}  // namespace okgd

#endif  // OKGD_OPTIMIZER_HPP_
