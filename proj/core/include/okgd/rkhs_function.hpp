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

#ifndef OKGD_RKHS_FUNCTION_HPP_
#define OKGD_RKHS_FUNCTION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "okgd/kernel.hpp"

namespace okgd {

// f(.) = scale * sum_i coeffs[i] K(support[i], .)
//
// The global scale turns the regularized update (1 - lambda eta) f + c K_x
// into an O(1) operation. Raw coefficients of existing terms only change
// when the scale is folded back into them, which bumps generation().
class RkhsFunction {
 public:
  // |scale| outside [kMinScale, kMaxScale] triggers a fold.
  static constexpr double kMinScale = 1e-150;
  static constexpr double kMaxScale = 1e150;

  explicit RkhsFunction(KernelSpec kernel);

  static RkhsFunction from_expansion(KernelSpec kernel,
                                     const std::vector<Point>& support,
                                     std::vector<double> coeffs,
                                     double scale = 1.0);

  const KernelSpec& kernel() const { return kernel_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }
  double raw_coeff(std::size_t i) const { return coeffs_[i]; }
  std::span<const double> raw_coeffs() const { return coeffs_; }
  double scale() const { return scale_; }
  // scale * raw coefficient.
  double coeff(std::size_t i) const { return scale_ * coeffs_[i]; }

  double evaluate(std::span<const double> x) const;

  // *this <- s * (*this) + c K_x.  s == 0 clears the expansion first.
  void scale_then_append(double s, double c, std::span<const double> x);
  // *this <- s * (*this).
  void scale_by(double s);
  // Folds the global scale into the raw coefficients (scale becomes 1).
  void fold_scale();

  std::uint64_t lineage() const { return lineage_; }
  std::uint64_t generation() const { return generation_; }

 private:
  void check_dim(std::span<const double> x) const;

  KernelSpec kernel_;
  std::size_t dim_ = 0;
  std::vector<double> points_;  // size() * dim_, row-major
  std::vector<double> coeffs_;
  double scale_ = 1.0;
  std::uint64_t lineage_;
  std::uint64_t generation_ = 0;
};

double evaluate(const RkhsFunction& f, std::span<const double> x);
RkhsFunction scale_then_append(RkhsFunction f, double s, double c,
                               std::span<const double> x);
double rkhs_norm_sq(const RkhsFunction& f);
double inner(const RkhsFunction& f, const RkhsFunction& g);
// |f - g|^2, clamped at 0 from below.
double distance_sq(const RkhsFunction& f, const RkhsFunction& g);

enum class AverageKind { kUniform, kWeighted };

// Running (weighted) average of successive iterates of one evolving
// expansion. Pushing f_{t+1} after f_t only touches the new terms: a term
// that enters at push k carries coefficient c_j * sum_{i >= k} w_i s_i, which
// is tracked through one prefix sum. Functions that do not extend the
// previously pushed one are folded in term by term.
class RunningAverage {
 public:
  RunningAverage(AverageKind kind, KernelSpec kernel);

  // weight must be > 0 for the weighted kind; ignored (taken as 1) for the
  // uniform kind.
  void push(const RkhsFunction& f, double weight = 1.0);

  AverageKind kind() const { return kind_; }
  double total_weight() const { return total_weight_; }
  std::size_t pushes() const { return pushes_; }

  // sum_k w_k f_k as an expansion.
  RkhsFunction accumulated() const;
  // (sum_k w_k f_k)(x) without building the expansion.
  double evaluate_accumulated(std::span<const double> x) const;
  // accumulated() / total_weight(). Throws StateError before the first push.
  RkhsFunction finalize() const;

 private:
  // Settles the tracked coefficients and restarts the prefix sum when an
  // increment is this small relative to it.
  static constexpr double kRebaseRatio = 1e-4;

  void materialize();
  void rebase();
  bool extends_tracked(const RkhsFunction& f) const;

  AverageKind kind_;
  KernelSpec kernel_;
  std::size_t dim_ = 0;
  std::vector<double> points_;
  std::vector<double> settled_;  // materialized part of each coefficient
  std::vector<double> raw_;      // raw coefficient of the tracked lineage
  std::vector<double> marker_;   // prefix sum when the term entered
  double prefix_ = 0.0;
  double prefix_abs_ = 0.0;  // sum of |increments| since the last rebase
  std::size_t segment_begin_ = 0;
  std::size_t tracked_size_ = 0;
  std::uint64_t tracked_lineage_ = 0;
  std::uint64_t tracked_generation_ = 0;
  bool tracking_ = false;
  double total_weight_ = 0.0;
  std::size_t pushes_ = 0;
};

RunningAverage push_average(RunningAverage avg, const RkhsFunction& f,
                            double weight);
RkhsFunction finalize_average(const RunningAverage& avg);

}  // namespace okgd

#endif  // OKGD_RKHS_FUNCTION_HPP_
