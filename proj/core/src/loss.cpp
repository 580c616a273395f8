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

#include "okgd/loss.hpp"

#include <algorithm>
#include <cmath>

#include "okgd/error.hpp"

namespace okgd {

double self_bounding_A(double alpha, double holder_L) {
  return 2.0 * std::pow(alpha, (1.0 - alpha) / (1.0 + alpha)) *
         std::pow(holder_L, 2.0 / (1.0 + alpha)) * (1.0 + alpha);
}

double self_bounding_B(double alpha, double holder_L) {
  return std::pow(alpha, -2.0 * alpha / (1.0 + alpha)) *
         std::pow(holder_L, 2.0 / (1.0 + alpha)) * (1.0 - alpha * alpha);
}

LossModel::LossModel(LossFamily family, double p, double alpha,
                     double holder_L)
    : family_(family),
      p_(p),
      alpha_(alpha),
      holder_L_(holder_L),
      self_A_(self_bounding_A(alpha, holder_L)),
      self_B_(self_bounding_B(alpha, holder_L)) {}

LossModel LossModel::least_squares() {
  return LossModel(LossFamily::kLeastSquares, 2.0, 1.0, 1.0);
}

LossModel LossModel::huber() {
  return LossModel(LossFamily::kHuber, 2.0, 1.0, 1.0);
}

// phi'' = sigma(ya)(1 - sigma(ya)) y^2 <= 1/4 for y in {-1, +1}.
LossModel LossModel::logistic() {
  return LossModel(LossFamily::kLogistic, 2.0, 1.0, 0.25);
}

LossModel LossModel::smoothed_hinge_sq() {
  return LossModel(LossFamily::kSmoothedHingeSq, 2.0, 1.0, 2.0);
}

namespace {

void check_p(double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InputError("loss exponent p must lie in (1, 2]");
  }
}

void check_finite(double y, double a) {
  if (!std::isfinite(y) || !std::isfinite(a)) {
    throw InputError("loss evaluated at a non-finite argument");
  }
}

}  // namespace

// u -> max(0, u)^(p-1) is (p-1, 1)-Hölder, so the derivative is (p-1, p).
LossModel LossModel::p_hinge(double p) {
  check_p(p);
  return LossModel(LossFamily::kPHinge, p, p - 1.0, p);
}

// u -> sign(u)|u|^q is (q, 2^(1-q))-Hölder for q in (0, 1].
LossModel LossModel::p_absolute(double p) {
  check_p(p);
  return LossModel(LossFamily::kPAbsolute, p, p - 1.0,
                   p * std::pow(2.0, 2.0 - p));
}

LossModel LossModel::with_holder_L(double holder_L) const {
  return LossModel(family_, p_, alpha_, holder_L);
}

LossModel LossModel::with_self_bounding(double a, double b) const {
  LossModel copy = *this;
  copy.self_A_ = a;
  copy.self_B_ = b;
  return copy;
}

LabelDomain LossModel::domain() const {
  switch (family_) {
    case LossFamily::kLogistic:
    case LossFamily::kSmoothedHingeSq:
    case LossFamily::kPHinge:
      return LabelDomain::kClassification;
    default:
      return LabelDomain::kRegression;
  }
}

std::string LossModel::name() const {
  switch (family_) {
    case LossFamily::kLeastSquares:
      return "least_squares";
    case LossFamily::kHuber:
      return "huber";
    case LossFamily::kLogistic:
      return "logistic";
    case LossFamily::kSmoothedHingeSq:
      return "smoothed_hinge_sq";
    case LossFamily::kPHinge:
      return "p_hinge";
    case LossFamily::kPAbsolute:
      return "p_absolute";
  }
  return "unknown";
}

double LossModel::value(double y, double a) const {
  check_finite(y, a);
  switch (family_) {
    case LossFamily::kLeastSquares: {
      const double r = y - a;
      return 0.5 * r * r;
    }
    case LossFamily::kHuber: {
      const double r = std::abs(y - a);
      return r <= 1.0 ? 0.5 * r * r : r - 0.5;
    }
    case LossFamily::kLogistic: {
      // log(1 + exp(-z)) without overflow.
      const double z = y * a;
      return std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    }
    case LossFamily::kSmoothedHingeSq: {
      const double m = std::max(0.0, 1.0 - y * a);
      return m * m;
    }
    case LossFamily::kPHinge: {
      const double m = std::max(0.0, 1.0 - y * a);
      return m == 0.0 ? 0.0 : std::pow(m, p_);
    }
    case LossFamily::kPAbsolute: {
      const double r = std::abs(y - a);
      return r == 0.0 ? 0.0 : std::pow(r, p_);
    }
  }
  return 0.0;
}

double LossModel::derivative(double y, double a) const {
  check_finite(y, a);
  switch (family_) {
    case LossFamily::kLeastSquares:
      return a - y;
    case LossFamily::kHuber: {
      const double r = a - y;
      return std::clamp(r, -1.0, 1.0);
    }
    case LossFamily::kLogistic: {
      const double z = y * a;
      // -y / (1 + exp(z)), evaluated on the stable side.
      if (z >= 0.0) {
        const double e = std::exp(-z);
        return -y * e / (1.0 + e);
      }
      return -y / (1.0 + std::exp(z));
    }
    case LossFamily::kSmoothedHingeSq: {
      const double m = std::max(0.0, 1.0 - y * a);
      return -2.0 * y * m;
    }
    case LossFamily::kPHinge: {
      const double m = std::max(0.0, 1.0 - y * a);
      return m == 0.0 ? 0.0 : -p_ * y * std::pow(m, p_ - 1.0);
    }
    case LossFamily::kPAbsolute: {
      const double r = a - y;
      if (r == 0.0) return 0.0;
      const double mag = p_ * std::pow(std::abs(r), p_ - 1.0);
      return r > 0.0 ? mag : -mag;
    }
  }
  return 0.0;
}

}  // namespace okgd
