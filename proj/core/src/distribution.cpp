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

#include "okgd/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "okgd/error.hpp"

namespace okgd {

namespace {

constexpr double kProbTol = 1e-12;

void check_probs(const std::vector<double>& probs, const char* what) {
  double s = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InputError(std::string(what) + ": probabilities must be >= 0");
    }
    s += p;
  }
  if (std::abs(s - 1.0) > kProbTol) {
    throw InputError(std::string(what) + ": probabilities sum to " +
                     std::to_string(s) + ", not 1");
  }
}

std::size_t draw_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double cdf = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cdf += probs[i];
    if (u < cdf) return i;
  }
  // Rounding in the cdf: fall back to the last point with positive mass.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return probs.size() - 1;
}

}  // namespace

FiniteDistribution FiniteDistribution::regression(
    std::vector<Point> support, std::vector<double> probs,
    const std::vector<double>& targets, const std::vector<double>& noise_values,
    const std::vector<double>& noise_probs) {
  if (targets.size() != support.size()) {
    throw InputError("regression distribution: one target per support point");
  }
  if (noise_values.size() != noise_probs.size() || noise_values.empty()) {
    throw InputError("regression distribution: malformed noise law");
  }
  FiniteDistribution d;
  d.support_x = std::move(support);
  d.probs_x = std::move(probs);
  d.label_kind = LabelDomain::kRegression;
  d.labels.resize(d.support_x.size());
  for (std::size_t i = 0; i < d.support_x.size(); ++i) {
    for (std::size_t j = 0; j < noise_values.size(); ++j) {
      d.labels[i].push_back({targets[i] + noise_values[j], noise_probs[j]});
    }
  }
  d.validate();
  return d;
}

FiniteDistribution FiniteDistribution::classification(
    std::vector<Point> support, std::vector<double> probs,
    const std::vector<double>& p_plus) {
  if (p_plus.size() != support.size()) {
    throw InputError("classification distribution: one p_plus per point");
  }
  FiniteDistribution d;
  d.support_x = std::move(support);
  d.probs_x = std::move(probs);
  d.label_kind = LabelDomain::kClassification;
  d.labels.resize(d.support_x.size());
  for (std::size_t i = 0; i < d.support_x.size(); ++i) {
    if (!(p_plus[i] >= 0.0 && p_plus[i] <= 1.0)) {
      throw InputError("classification distribution: p_plus must lie in [0, 1]");
    }
    d.labels[i] = {{1.0, p_plus[i]}, {-1.0, 1.0 - p_plus[i]}};
  }
  d.validate();
  return d;
}

void FiniteDistribution::validate() const {
  if (support_x.empty()) throw InputError("distribution: empty support");
  if (probs_x.size() != support_x.size() || labels.size() != support_x.size()) {
    throw InputError("distribution: support, probabilities and labels differ in length");
  }
  const std::size_t d = support_x[0].size();
  for (const auto& x : support_x) {
    if (x.size() != d) throw InputError("distribution: mixed point dimensions");
    for (double v : x) {
      if (!std::isfinite(v)) throw InputError("distribution: non-finite point");
    }
  }
  check_probs(probs_x, "distribution marginal");
  for (const auto& atoms : labels) {
    if (atoms.empty()) throw InputError("distribution: empty label law");
    std::vector<double> ps;
    for (const auto& a : atoms) {
      if (!std::isfinite(a.y)) throw InputError("distribution: non-finite label");
      ps.push_back(a.p);
    }
    check_probs(ps, "distribution label law");
  }
}

std::vector<double> FiniteDistribution::conditional_mean() const {
  std::vector<double> m(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (const auto& a : labels[i]) m[i] += a.p * a.y;
  }
  return m;
}

std::vector<Point> uniform_grid(double lo, double hi, std::size_t m) {
  if (m == 0) throw InputError("uniform_grid: need at least one point");
  std::vector<Point> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = m == 1 ? 0.5 : static_cast<double>(i) / (m - 1);
    pts.push_back({lo + (hi - lo) * u});
  }
  return pts;
}

Sample sample(const FiniteDistribution& dist, Rng& rng) {
  Sample s;
  s.index = draw_index(dist.probs_x, rng);
  s.x = dist.support_x[s.index];
  const auto& atoms = dist.labels[s.index];
  if (atoms.size() == 1) {
    s.y = atoms[0].y;
  } else {
    const double u = rng.uniform();
    double cdf = 0.0;
    s.y = atoms.back().y;
    for (const auto& a : atoms) {
      cdf += a.p;
      if (u < cdf) {
        s.y = a.y;
        break;
      }
    }
  }
  return s;
}

double RiskOracle::risk_from_values(std::span<const double> values) const {
  if (values.size() != dist.size()) {
    throw InputError("risk_from_values: one value per support point expected");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.probs_x[i] == 0.0) continue;
    double c = 0.0;
    for (const auto& a : dist.labels[i]) {
      if (a.p > 0.0) c += a.p * loss.value(a.y, values[i]);
    }
    r += dist.probs_x[i] * c;
  }
  return r;
}

double RiskOracle::excess_from_values(std::span<const double> values) const {
  return std::max(0.0, risk_from_values(values) - risk_at_f_H);
}

std::vector<double> RiskOracle::values_of(const RkhsFunction& f) const {
  if (!(f.kernel() == kernel)) {
    throw InputError("risk oracle: function uses a different kernel");
  }
  std::vector<double> v(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) v[i] = f.evaluate(dist.support_x[i]);
  return v;
}

std::vector<double> RiskOracle::weighted_derivatives(
    std::span<const double> values) const {
  std::vector<double> d(dist.size(), 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double c = 0.0;
    for (const auto& a : dist.labels[i]) {
      if (a.p > 0.0) c += a.p * loss.derivative(a.y, values[i]);
    }
    d[i] = dist.probs_x[i] * c;
  }
  return d;
}

double RiskOracle::coefficient_gradient_norm(
    std::span<const double> values) const {
  const auto d = weighted_derivatives(values);
  const Eigen::Map<const Eigen::VectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
  return (gram * dv).norm();
}

double RiskOracle::functional_gradient_norm(
    std::span<const double> values) const {
  const auto d = weighted_derivatives(values);
  const Eigen::Map<const Eigen::VectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
  return std::sqrt(std::max(0.0, dv.dot(gram * dv)));
}

double RiskOracle::sup_loss_at_zero() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.probs_x[i] == 0.0) continue;
    for (const auto& a : dist.labels[i]) {
      if (a.p > 0.0) s = std::max(s, loss.value(a.y, 0.0));
    }
  }
  return s;
}

double RiskOracle::sup_loss_at_f_H() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.probs_x[i] == 0.0) continue;
    for (const auto& a : dist.labels[i]) {
      if (a.p > 0.0) s = std::max(s, loss.value(a.y, f_H_values[i]));
    }
  }
  return s;
}

double exact_risk(const RiskOracle& oracle, const RkhsFunction& f) {
  return oracle.risk_from_values(oracle.values_of(f));
}

double excess_risk(const RiskOracle& oracle, const RkhsFunction& f) {
  return oracle.excess_from_values(oracle.values_of(f));
}

namespace {

// argmin_v sum_a p_a phi(y_a, v) for a convex differentiable phi.
double minimize_conditional(const LossModel& loss,
                            const std::vector<LabelAtom>& atoms) {
  auto slope = [&](double v) {
    double s = 0.0;
    for (const auto& a : atoms) {
      if (a.p > 0.0) s += a.p * loss.derivative(a.y, v);
    }
    return s;
  };
  if (loss.family() == LossFamily::kLeastSquares) {
    double m = 0.0;
    for (const auto& a : atoms) m += a.p * a.y;
    return m;
  }
  if (loss.family() == LossFamily::kLogistic) {
    // One-sided labels: the risk decreases forever but its slope underflows
    // around |v| ~ 745, which the bracketing below would take for a minimum.
    bool plus = false;
    bool minus = false;
    for (const auto& a : atoms) {
      if (a.p > 0.0) (a.y > 0.0 ? plus : minus) = true;
    }
    if (plus != minus) {
      throw SolverError("solve_f_H: logistic risk has no minimizer when one label "
                        "has all the conditional mass", 0.0);
    }
  }
  constexpr double kLimit = 1e8;
  double lo = -1.0;
  double hi = 1.0;
  while (slope(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -kLimit) {
      throw SolverError("solve_f_H: conditional risk has no minimizer (decreasing "
                        "towards -inf)", slope(lo));
    }
  }
  while (slope(hi) < 0.0) {
    hi *= 2.0;
    if (hi > kLimit) {
      throw SolverError("solve_f_H: conditional risk has no minimizer (decreasing "
                        "towards +inf)", slope(hi));
    }
  }
  // Bisection on the sign of the slope converges to the left end of the
  // minimizer set when the risk is flat there.
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::abs(slope(lo)) < std::abs(slope(hi)) ? lo : hi;
}

}  // namespace

RiskOracle solve_f_H(const FiniteDistribution& dist, const LossModel& loss,
                     const KernelSpec& kernel) {
  dist.validate();
  kernel.validate();
  if ((loss.domain() == LabelDomain::kClassification) !=
      (dist.label_kind == LabelDomain::kClassification)) {
    throw InputError("solve_f_H: loss " + loss.name() +
                     " does not match the distribution's label model");
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (dist.support_x[i] == dist.support_x[j]) {
        throw InputError("solve_f_H: duplicate support points make the Gram "
                         "matrix singular");
      }
    }
  }

  RiskOracle o;
  o.dist = dist;
  o.loss = loss;
  o.kernel = kernel;
  o.gram = gram(kernel, dist.support_x);
  o.kappa = kappa_bound(kernel, dist.support_x);

  const auto m = static_cast<Eigen::Index>(dist.size());
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    target(i) = minimize_conditional(loss, dist.labels[static_cast<std::size_t>(i)]);
  }

  // Rank-revealing solve: smooth kernels on dense grids give Grams that are
  // singular to working precision, but every least-squares solution of
  // G c = v represents the same function wherever v lies in the range.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(o.gram,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd c = svd.solve(target);
  c += svd.solve(target - o.gram * c);
  const Eigen::VectorXd fitted = o.gram * c;
  const double scale = std::max(1.0, target.lpNorm<Eigen::Infinity>());
  const double residual = (fitted - target).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-8 * scale)) {
    throw SolverError("solve_f_H: minimizing values are not representable in the "
                      "span of the support (residual " + std::to_string(residual) +
                      ")", residual);
  }

  o.f_H_coeffs.assign(c.data(), c.data() + m);
  o.f_H_values.assign(fitted.data(), fitted.data() + m);
  o.f_H = RkhsFunction::from_expansion(kernel, dist.support_x, o.f_H_coeffs);
  o.f_H_norm_sq = std::max(0.0, c.dot(fitted));
  o.risk_at_f_H = o.risk_from_values(o.f_H_values);

  const double grad = o.coefficient_gradient_norm(o.f_H_values);
  if (!(grad <= 1e-10)) {
    throw SolverError("solve_f_H: first-order optimality not reached (gradient " +
                      std::to_string(grad) + ")", grad);
  }
  return o;
}

}  // namespace okgd
