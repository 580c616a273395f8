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

#ifndef OKGD_KERNEL_HPP_
#define OKGD_KERNEL_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace okgd {

using Point = std::vector<double>;

enum class KernelFamily { kGaussian, kLinear, kPolynomial };

// Mercer kernel description. Immutable value type; every operation on it is
// pure.
//
//   gaussian:   K(x, x') = exp(-|x - x'|^2 / (2 bandwidth^2))
//   linear:     K(x, x') = <x, x'>
//   polynomial: K(x, x') = (<x, x'> + offset)^degree
struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  double bandwidth = 1.0;
  int degree = 1;
  double offset = 0.0;

  static KernelSpec gaussian(double bandwidth);
  static KernelSpec linear();
  static KernelSpec polynomial(int degree, double offset);

  // Throws InputError when a parameter is out of range.
  void validate() const;

  std::string name() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

double eval(const KernelSpec& kernel, std::span<const double> x,
            std::span<const double> x2);

// G(i, j) = K(points[i], points[j]).
Eigen::MatrixXd gram(const KernelSpec& kernel, const std::vector<Point>& points);

// sup over the support of sqrt(K(x, x)). Exactly 1 for the gaussian kernel,
// whose support may then be empty.
double kappa_bound(const KernelSpec& kernel, const std::vector<Point>& support);

}  // namespace okgd

#endif  // OKGD_KERNEL_HPP_
