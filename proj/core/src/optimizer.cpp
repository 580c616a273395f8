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

#include "okgd/optimizer.hpp"

#include <cmath>
#include <cstring>

#include "okgd/error.hpp"

namespace okgd {

Variant Variant::regularized(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("regularized variant: lambda must be >= 0");
  }
  return {VariantKind::kRegularized, lambda, 0.0};
}

Variant Variant::projected(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InputError("projected variant: radius must be positive");
  }
  return {VariantKind::kProjected, 0.0, radius};
}

std::string Variant::name() const {
  switch (kind) {
    case VariantKind::kPlain:
      return "plain";
    case VariantKind::kRegularized:
      return "regularized";
    case VariantKind::kProjected:
      return "projected";
  }
  return "unknown";
}

double max_step_bound(const LossModel& loss, double kappa) {
  if (!(kappa > 0.0)) throw InputError("max_step_bound: kappa must be positive");
  return 1.0 / (loss.self_A() * kappa * kappa);
}

double necessity_step_cap(const LossModel& loss, double kappa) {
  if (!(kappa > 0.0)) {
    throw InputError("necessity_step_cap: kappa must be positive");
  }
  return 1.0 / (6.0 * loss.holder_L() * kappa * kappa);
}

namespace {

std::string probe_key(std::span<const double> x) {
  std::string key(x.size() * sizeof(double), '\0');
  if (!x.empty()) std::memcpy(key.data(), x.data(), key.size());
  return key;
}

}  // namespace

OptimizerState::OptimizerState(Variant variant, StepSchedule schedule,
                               LossModel loss, KernelSpec kernel)
    : variant_(variant),
      schedule_(schedule),
      loss_(loss),
      kernel_(kernel),
      model_(kernel),
      uniform_(AverageKind::kUniform, kernel),
      weighted_(AverageKind::kWeighted, kernel) {
  schedule_.validate();
  kernel_.validate();
}

std::optional<std::size_t> OptimizerState::find_probe(
    std::span<const double> x) const {
  auto it = probe_index_.find(probe_key(x));
  if (it == probe_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t OptimizerState::register_probe(std::span<const double> x) {
  if (auto id = find_probe(x)) return *id;
  if (!probe_points_.empty() && x.size() != probe_points_.front().size()) {
    throw InputError("register_probe: dimension mismatch");
  }
  const std::size_t id = probe_points_.size();
  probe_points_.emplace_back(x.begin(), x.end());
  std::vector<double> row(id + 1);
  for (std::size_t q = 0; q < id; ++q) {
    row[q] = eval(kernel_, probe_points_[q], x);
    kcache_[q].push_back(row[q]);
  }
  row[id] = eval(kernel_, x, x);
  kcache_.push_back(std::move(row));
  probe_values_.push_back(model_.evaluate(x));
  uniform_sums_.push_back(uniform_.evaluate_accumulated(x));
  weighted_sums_.push_back(weighted_.evaluate_accumulated(x));
  probe_index_.emplace(probe_key(x), id);
  return id;
}

StepInfo OptimizerState::step(std::span<const double> x, double y) {
  switch (variant_.kind) {
    case VariantKind::kPlain:
      return ogd_step(x, y);
    case VariantKind::kRegularized:
      return regularized_step(x, y);
    case VariantKind::kProjected:
      return projected_step(x, y);
  }
  throw StateError("unknown optimizer variant");
}

StepInfo OptimizerState::ogd_step(std::span<const double> x, double y) {
  if (variant_.kind != VariantKind::kPlain) {
    throw StateError("ogd_step called on a " + variant_.name() + " optimizer");
  }
  return apply(x, y, 0.0, false);
}

StepInfo OptimizerState::regularized_step(std::span<const double> x,
                                          double y) {
  if (variant_.kind != VariantKind::kRegularized) {
    throw StateError("regularized_step called on a " + variant_.name() +
                     " optimizer");
  }
  return apply(x, y, variant_.lambda, false);
}

StepInfo OptimizerState::projected_step(std::span<const double> x, double y) {
  if (variant_.kind != VariantKind::kProjected) {
    throw StateError("projected_step called on a " + variant_.name() +
                     " optimizer");
  }
  return apply(x, y, 0.0, true);
}

StepInfo OptimizerState::apply(std::span<const double> x, double y,
                               double lambda, bool project) {
  StepInfo info;
  info.t = t_;
  info.y = y;
  info.probe = register_probe(x);
  info.eta = step_size(schedule_, t_);
  info.value_before = probe_values_[info.probe];
  if (!std::isfinite(info.value_before)) {
    throw DivergenceError(t_, info.value_before);
  }
  info.gradient = loss_.derivative(y, info.value_before);
  if (!std::isfinite(info.gradient)) throw DivergenceError(t_, info.gradient);

  info.shrink = 1.0 - lambda * info.eta;
  if (!(info.shrink > 0.0)) {
    throw ConfigError("/variant/lambda",
                      "lambda * eta_t >= 1 at step " + std::to_string(t_) +
                          " flips the sign of the iterate");
  }
  info.coeff = -info.eta * info.gradient;
  info.k_xx = kcache_[info.probe][info.probe];
  info.norm_sq_before = norm_sq_;

  // f_t enters the averages with weight eta_t before it is overwritten.
  uniform_.push(model_, 1.0);
  weighted_.push(model_, info.eta);
  for (std::size_t p = 0; p < probe_values_.size(); ++p) {
    uniform_sums_[p] += probe_values_[p];
    weighted_sums_[p] += info.eta * probe_values_[p];
  }

  model_.scale_then_append(info.shrink, info.coeff, x);
  term_probe_.push_back(info.probe);
  const auto& krow = kcache_[info.probe];
  for (std::size_t p = 0; p < probe_values_.size(); ++p) {
    probe_values_[p] = info.shrink * probe_values_[p] + info.coeff * krow[p];
  }
  norm_sq_ = info.shrink * info.shrink * norm_sq_ +
             2.0 * info.shrink * info.coeff * info.value_before +
             info.coeff * info.coeff * info.k_xx;
  if (norm_sq_ < 0.0) norm_sq_ = 0.0;

  if (project) {
    const double r2 = variant_.radius * variant_.radius;
    if (norm_sq_ > r2) {
      info.projection = variant_.radius / std::sqrt(norm_sq_);
      model_.scale_by(info.projection);
      for (double& v : probe_values_) v *= info.projection;
      norm_sq_ *= info.projection * info.projection;
    }
  }
  if (!std::isfinite(norm_sq_)) throw DivergenceError(t_, norm_sq_);
  info.norm_sq_after = norm_sq_;
  ++t_;
  return info;
}

double OptimizerState::recompute_norm_sq() const {
  double s = 0.0;
  for (std::size_t j = 0; j < term_probe_.size(); ++j) {
    s += model_.raw_coeff(j) * probe_values_[term_probe_[j]];
  }
  return std::max(0.0, model_.scale() * s);
}

RkhsFunction OptimizerState::average_with_current(AverageKind kind) const {
  RunningAverage avg = average(kind);
  avg.push(model_, kind == AverageKind::kUniform ? 1.0
                                                 : step_size(schedule_, t_));
  return avg.finalize();
}

}  // namespace okgd
