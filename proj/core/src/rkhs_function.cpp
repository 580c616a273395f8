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

#include "okgd/rkhs_function.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "okgd/error.hpp"

namespace okgd {

namespace {

std::uint64_t next_lineage() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

RkhsFunction::RkhsFunction(KernelSpec kernel)
    : kernel_(kernel), lineage_(next_lineage()) {
  kernel_.validate();
}

RkhsFunction RkhsFunction::from_expansion(KernelSpec kernel,
                                          const std::vector<Point>& support,
                                          std::vector<double> coeffs,
                                          double scale) {
  if (support.size() != coeffs.size()) {
    throw InputError("from_expansion: support and coefficient counts differ");
  }
  RkhsFunction f(kernel);
  for (std::size_t i = 0; i < support.size(); ++i) {
    f.check_dim(support[i]);
    if (f.dim_ == 0) f.dim_ = support[i].size();
    f.points_.insert(f.points_.end(), support[i].begin(), support[i].end());
  }
  f.coeffs_ = std::move(coeffs);
  f.scale_ = scale;
  return f;
}

void RkhsFunction::check_dim(std::span<const double> x) const {
  if (!coeffs_.empty() && x.size() != dim_) {
    throw InputError("rkhs function: dimension mismatch (" +
                     std::to_string(x.size()) + " vs " + std::to_string(dim_) +
                     ")");
  }
}

double RkhsFunction::evaluate(std::span<const double> x) const {
  if (coeffs_.empty()) return 0.0;
  check_dim(x);
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    s += coeffs_[i] * eval(kernel_, point(i), x);
  }
  return scale_ * s;
}

void RkhsFunction::scale_then_append(double s, double c,
                                     std::span<const double> x) {
  if (!std::isfinite(s) || !std::isfinite(c)) {
    throw InputError("scale_then_append: non-finite factor");
  }
  check_dim(x);
  if (s == 0.0) {
    points_.clear();
    coeffs_.clear();
    scale_ = 1.0;
    ++generation_;
  } else {
    scale_ *= s;
    const double mag = std::abs(scale_);
    if (mag < kMinScale || mag > kMaxScale) fold_scale();
  }
  if (coeffs_.empty()) dim_ = x.size();
  points_.insert(points_.end(), x.begin(), x.end());
  coeffs_.push_back(c / scale_);
}

void RkhsFunction::scale_by(double s) {
  if (!std::isfinite(s)) throw InputError("scale_by: non-finite factor");
  if (s == 0.0) {
    points_.clear();
    coeffs_.clear();
    scale_ = 1.0;
    ++generation_;
    return;
  }
  scale_ *= s;
  const double mag = std::abs(scale_);
  if (mag < kMinScale || mag > kMaxScale) fold_scale();
}

void RkhsFunction::fold_scale() {
  for (double& c : coeffs_) c *= scale_;
  scale_ = 1.0;
  ++generation_;
}

double evaluate(const RkhsFunction& f, std::span<const double> x) {
  return f.evaluate(x);
}

RkhsFunction scale_then_append(RkhsFunction f, double s, double c,
                               std::span<const double> x) {
  f.scale_then_append(s, c, x);
  return f;
}

double inner(const RkhsFunction& f, const RkhsFunction& g) {
  if (!(f.kernel() == g.kernel())) {
    throw InputError("inner: functions use different kernels");
  }
  if (f.empty() || g.empty()) return 0.0;
  if (f.dim() != g.dim()) throw InputError("inner: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      row += g.raw_coeff(j) * eval(f.kernel(), f.point(i), g.point(j));
    }
    s += f.raw_coeff(i) * row;
  }
  return f.scale() * g.scale() * s;
}

double rkhs_norm_sq(const RkhsFunction& f) {
  if (f.empty()) return 0.0;
  // Symmetric double loop over the Gram of the support.
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double ci = f.raw_coeff(i);
    diag += ci * ci * eval(f.kernel(), f.point(i), f.point(i));
    double row = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      row += f.raw_coeff(j) * eval(f.kernel(), f.point(i), f.point(j));
    }
    off += ci * row;
  }
  return std::max(0.0, f.scale() * f.scale() * (diag + 2.0 * off));
}

double distance_sq(const RkhsFunction& f, const RkhsFunction& g) {
  const double d = rkhs_norm_sq(f) - 2.0 * inner(f, g) + rkhs_norm_sq(g);
  return std::max(0.0, d);
}

RunningAverage::RunningAverage(AverageKind kind, KernelSpec kernel)
    : kind_(kind), kernel_(kernel) {}

bool RunningAverage::extends_tracked(const RkhsFunction& f) const {
  if (!tracking_ || f.lineage() != tracked_lineage_ ||
      f.generation() != tracked_generation_ || f.size() < tracked_size_) {
    return false;
  }
  if (tracked_size_ == 0) return true;
  // Spot-check the newest tracked term.
  const std::size_t j = tracked_size_ - 1;
  const std::size_t local = segment_begin_ + j;
  if (f.raw_coeff(j) != raw_[local]) return false;
  const auto p = f.point(j);
  return std::equal(p.begin(), p.end(), points_.begin() + local * dim_);
}

void RunningAverage::materialize() {
  for (std::size_t j = segment_begin_; j < settled_.size(); ++j) {
    settled_[j] += raw_[j] * (prefix_ - marker_[j]);
    raw_[j] = 0.0;
    marker_[j] = 0.0;
  }
  prefix_ = 0.0;
  prefix_abs_ = 0.0;
  segment_begin_ = settled_.size();
  tracked_size_ = 0;
  tracking_ = false;
}

void RunningAverage::rebase() {
  for (std::size_t j = segment_begin_; j < settled_.size(); ++j) {
    settled_[j] += raw_[j] * (prefix_ - marker_[j]);
    marker_[j] = 0.0;
  }
  prefix_ = 0.0;
  prefix_abs_ = 0.0;
}

void RunningAverage::push(const RkhsFunction& f, double weight) {
  if (!(f.kernel() == kernel_)) {
    throw InputError("push_average: kernel mismatch");
  }
  if (kind_ == AverageKind::kUniform) {
    weight = 1.0;
  } else if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InputError("push_average: weighted average needs a positive weight");
  }
  if (!f.empty()) {
    if (dim_ == 0) dim_ = f.dim();
    if (f.dim() != dim_) throw InputError("push_average: dimension mismatch");
  }
  if (!extends_tracked(f)) {
    materialize();
    tracking_ = true;
    tracked_lineage_ = f.lineage();
    tracked_generation_ = f.generation();
  }
  // prefix_ - marker_[j] loses the increments once they fall below rounding
  // of prefix_, which happens as a shrinking scale decays.
  const double increment = weight * f.scale();
  if (std::abs(increment) < kRebaseRatio * prefix_abs_) rebase();
  for (std::size_t j = tracked_size_; j < f.size(); ++j) {
    const auto p = f.point(j);
    points_.insert(points_.end(), p.begin(), p.end());
    settled_.push_back(0.0);
    raw_.push_back(f.raw_coeff(j));
    marker_.push_back(prefix_);
  }
  tracked_size_ = f.size();
  prefix_ += increment;
  prefix_abs_ += std::abs(increment);
  total_weight_ += weight;
  ++pushes_;
}

RkhsFunction RunningAverage::accumulated() const {
  std::vector<Point> support;
  std::vector<double> coeffs;
  support.reserve(settled_.size());
  coeffs.reserve(settled_.size());
  for (std::size_t j = 0; j < settled_.size(); ++j) {
    support.emplace_back(points_.begin() + j * dim_,
                         points_.begin() + (j + 1) * dim_);
    double c = settled_[j];
    if (j >= segment_begin_) c += raw_[j] * (prefix_ - marker_[j]);
    coeffs.push_back(c);
  }
  return RkhsFunction::from_expansion(kernel_, support, std::move(coeffs));
}

double RunningAverage::evaluate_accumulated(std::span<const double> x) const {
  if (settled_.empty()) return 0.0;
  if (x.size() != dim_) throw InputError("running average: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < settled_.size(); ++j) {
    double c = settled_[j];
    if (j >= segment_begin_) c += raw_[j] * (prefix_ - marker_[j]);
    s += c * eval(kernel_, std::span<const double>(points_.data() + j * dim_, dim_), x);
  }
  return s;
}

RkhsFunction RunningAverage::finalize() const {
  if (!(total_weight_ > 0.0)) {
    throw StateError("finalize_average: no weight accumulated");
  }
  RkhsFunction f = accumulated();
  f.scale_by(1.0 / total_weight_);
  return f;
}

RunningAverage push_average(RunningAverage avg, const RkhsFunction& f,
                            double weight) {
  avg.push(f, weight);
  return avg;
}

RkhsFunction finalize_average(const RunningAverage& avg) {
  return avg.finalize();
}

}  // namespace okgd
