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

#ifndef OKGD_LOSS_HPP_
#define OKGD_LOSS_HPP_

#include <string>
#include <utility>

namespace okgd {

enum class LossFamily {
  kLeastSquares,
  kHuber,
  kLogistic,
  kSmoothedHingeSq,
  kPHinge,
  kPAbsolute,
};

enum class LabelDomain { kRegression, kClassification };

/// Convex loss phi(y, a) with an (alpha, L)-Hölder continuous derivative in
/// the second argument, together with the self-bounding constants
///
///   A = 2 alpha^((1-alpha)/(1+alpha)) L^(2/(1+alpha)) (1+alpha)
///   B = alpha^(-2 alpha/(1+alpha)) L^(2/(1+alpha)) (1-alpha^2)
///
/// for which |phi'(y,s)|^2 <= A phi(y,s) + B.
///
/// Declared Hölder pairs: least_squares (1, 1), huber (1, 1), logistic
/// (1, 1/4), smoothed_hinge_sq (1, 2), p_hinge (p-1, p), p_absolute
/// (p-1, p 2^(2-p)).
class LossModel {
 public:
  static LossModel least_squares();
  static LossModel huber();  // threshold fixed at 1
  static LossModel logistic();
  static LossModel smoothed_hinge_sq();
  static LossModel p_hinge(double p);
  static LossModel p_absolute(double p);

  double value(double y, double a) const;
  double derivative(double y, double a) const;

  LossFamily family() const { return family_; }
  LabelDomain domain() const;
  std::string name() const;
  double p() const { return p_; }

  double alpha() const { return alpha_; }
  double holder_L() const { return holder_L_; }
  double self_A() const { return self_A_; }
  double self_B() const { return self_B_; }
  std::pair<double, double> holder_params() const { return {alpha_, holder_L_}; }
  std::pair<double, double> self_bounding_constants() const {
    return {self_A_, self_B_};
  }

  // Copy with a replaced Hölder constant; A and B follow. Used for negative
  // controls in the verification suite.
  LossModel with_holder_L(double holder_L) const;
  // Copy with replaced self-bounding constants, leaving (alpha, L) alone.
  LossModel with_self_bounding(double a, double b) const;

 private:
  LossModel(LossFamily family, double p, double alpha, double holder_L);

  LossFamily family_;
  double p_;
  double alpha_;
  double holder_L_;
  double self_A_;
  double self_B_;
};

// Closed forms of the self-bounding constants at (alpha, L).
double self_bounding_A(double alpha, double holder_L);
double self_bounding_B(double alpha, double holder_L);

}  // namespace okgd

#endif  // OKGD_LOSS_HPP_
