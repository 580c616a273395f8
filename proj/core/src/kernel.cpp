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

#include "okgd/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "okgd/error.hpp"

namespace okgd {

KernelSpec KernelSpec::gaussian(double bandwidth) {
  KernelSpec k;
  k.family = KernelFamily::kGaussian;
  k.bandwidth = bandwidth;
  k.validate();
  return k;
}

KernelSpec KernelSpec::linear() {
  KernelSpec k;
  k.family = KernelFamily::kLinear;
  return k;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  KernelSpec k;
  k.family = KernelFamily::kPolynomial;
  k.degree = degree;
  k.offset = offset;
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::kGaussian:
      if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InputError("gaussian kernel bandwidth must be positive");
      }
      break;
    case KernelFamily::kLinear:
      break;
    case KernelFamily::kPolynomial:
      if (degree < 1) throw InputError("polynomial kernel degree must be >= 1");
      if (!(offset >= 0.0) || !std::isfinite(offset)) {
        throw InputError("polynomial kernel offset must be >= 0");
      }
      break;
  }
}

std::string KernelSpec::name() const {
  switch (family) {
    case KernelFamily::kGaussian:
      return "gaussian";
    case KernelFamily::kLinear:
      return "linear";
    case KernelFamily::kPolynomial:
      return "polynomial";
  }
  return "unknown";
}

namespace {

double dot(std::span<const double> x, std::span<const double> x2) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * x2[i];
  return s;
}

}  // namespace

double eval(const KernelSpec& kernel, std::span<const double> x,
            std::span<const double> x2) {
  if (x.size() != x2.size()) {
    throw InputError("kernel eval: dimension mismatch (" +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(x2.size()) + ")");
  }
  switch (kernel.family) {
    case KernelFamily::kGaussian: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - x2[i];
        d2 += d * d;
      }
      return std::exp(-d2 / (2.0 * kernel.bandwidth * kernel.bandwidth));
    }
    case KernelFamily::kLinear:
      return dot(x, x2);
    case KernelFamily::kPolynomial: {
      const double base = dot(x, x2) + kernel.offset;
      double r = 1.0;
      for (int i = 0; i < kernel.degree; ++i) r *= base;
      return r;
    }
  }
  return 0.0;
}

Eigen::MatrixXd gram(const KernelSpec& kernel,
                     const std::vector<Point>& points) {
  if (points.empty()) throw InputError("gram: empty point list");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = eval(kernel, points[i], points[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = eval(kernel, points[i], points[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

double kappa_bound(const KernelSpec& kernel,
                   const std::vector<Point>& support) {
  if (kernel.family == KernelFamily::kGaussian) return 1.0;
  if (support.empty()) {
    throw InputError("kappa_bound: non-gaussian kernel needs a nonempty support");
  }
  double best = 0.0;
  for (const auto& x : support) best = std::max(best, eval(kernel, x, x));
  return std::sqrt(best);
}

}  // namespace okgd
