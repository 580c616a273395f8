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

#include "okgd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "okgd/error.hpp"
#include "okgd/rng.hpp"

namespace okgd {

void VerificationReport::record(double slack, std::vector<double> witness) {
  if (trials == 0 || slack < worst_slack) worst_slack = slack;
  ++trials;
  if (!(slack >= -tolerance)) {
    ++failures;
    if (failure_witnesses.size() < kMaxWitnesses) {
      failure_witnesses.push_back(std::move(witness));
    }
  }
}

bool VerificationReport::ok() const {
  if (skipped) return !negative_control;
  return negative_control ? failures > 0 : failures == 0;
}

namespace {

constexpr double kRange = 10.0;

struct LossSampler {
  const LossModel& loss;
  Rng rng;

  double label() {
    if (loss.domain() == LabelDomain::kClassification) {
      return rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    return rng.uniform(-2.0, 2.0);
  }

  // Points where phi' or phi'' is not smooth.
  std::vector<double> kinks(double y) const {
    switch (loss.family()) {
      case LossFamily::kHuber:
        return {y - 1.0, y + 1.0};
      case LossFamily::kSmoothedHingeSq:
      case LossFamily::kPHinge:
        return {1.0 / y};
      case LossFamily::kPAbsolute:
      case LossFamily::kLeastSquares:
        return {y};
      case LossFamily::kLogistic:
        return {0.0};
    }
    return {0.0};
  }

  double near(double k) {
    const double mag = std::pow(10.0, rng.uniform(-8.0, 0.0));
    return k + (rng.uniform() < 0.5 ? -mag : mag);
  }

  // A quarter of the draws straddle a kink.
  std::pair<double, double> arguments(double y) {
    const double mode = rng.uniform();
    if (mode < 0.75) {
      return {rng.uniform(-kRange, kRange), rng.uniform(-kRange, kRange)};
    }
    const auto ks = kinks(y);
    const double k = ks[rng.below(ks.size())];
    if (mode < 0.875) return {near(k), near(k)};
    return {near(k), rng.uniform(-kRange, kRange)};
  }
};

void require_trials(std::size_t n) {
  if (n == 0) throw InputError("verification needs at least one trial");
}

}  // namespace

VerificationReport verify_holder(const LossModel& loss, std::size_t n_trials,
                                 std::uint64_t seed) {
  require_trials(n_trials);
  VerificationReport rep;
  rep.check_name = "holder/" + loss.name();
  rep.tolerance = 1e-10;
  LossSampler smp{loss, Rng(seed)};
  const double alpha = loss.alpha();
  const double L = loss.holder_L();
  for (std::size_t i = 0; i < n_trials; ++i) {
    const double y = smp.label();
    const auto [s, st] = smp.arguments(y);
    const double lhs = std::abs(loss.derivative(y, s) - loss.derivative(y, st));
    const double rhs = L * std::pow(std::abs(s - st), alpha);
    rep.record(rhs - lhs, {y, s, st});
  }
  return rep;
}

VerificationReport verify_smoothness_sandwich(const LossModel& loss,
                                              std::size_t n_trials,
                                              std::uint64_t seed) {
  require_trials(n_trials);
  VerificationReport rep;
  rep.check_name = "smoothness_sandwich/" + loss.name();
  rep.tolerance = 1e-9;
  LossSampler smp{loss, Rng(seed)};
  const double alpha = loss.alpha();
  const double L = loss.holder_L();
  for (std::size_t i = 0; i < n_trials; ++i) {
    const double y = smp.label();
    const auto [s, st] = smp.arguments(y);
    const double gs = loss.derivative(y, s);
    const double gst = loss.derivative(y, st);
    const double bregman = loss.value(y, s) - loss.value(y, st) - (s - st) * gst;
    const double lower = alpha * std::pow(std::abs(gs - gst), (1.0 + alpha) / alpha) /
                         ((1.0 + alpha) * std::pow(L, 1.0 / alpha));
    const double upper = L * std::pow(std::abs(s - st), 1.0 + alpha) / (1.0 + alpha);
    rep.record(std::min(bregman - lower, upper - bregman), {y, s, st});
  }
  return rep;
}

VerificationReport verify_self_bounding(const LossModel& loss,
                                        std::size_t n_trials,
                                        std::uint64_t seed) {
  require_trials(n_trials);
  VerificationReport rep;
  rep.check_name = "self_bounding/" + loss.name();
  rep.tolerance = 1e-10;
  LossSampler smp{loss, Rng(seed)};
  for (std::size_t i = 0; i < n_trials; ++i) {
    const double y = smp.label();
    const double s = smp.arguments(y).first;
    const double g = loss.derivative(y, s);
    rep.record(loss.self_A() * loss.value(y, s) + loss.self_B() - g * g, {y, s});
  }
  return rep;
}

VerificationReport verify_gradient_bound_lemma(
    const RiskOracle& oracle, const std::vector<std::vector<double>>& iterates) {
  VerificationReport rep;
  rep.check_name = "gradient_bound/" + oracle.loss.name();
  rep.tolerance = 1e-8;
  const double alpha = oracle.loss.alpha();
  const double L = oracle.loss.holder_L();

  auto moment = [&](std::span<const double> values, double power) {
    double s = 0.0;
    for (std::size_t i = 0; i < oracle.dist.size(); ++i) {
      double c = 0.0;
      for (const auto& a : oracle.dist.labels[i]) {
        if (a.p > 0.0) {
          c += a.p * std::pow(std::abs(oracle.loss.derivative(a.y, values[i])), power);
        }
      }
      s += oracle.dist.probs_x[i] * c;
    }
    return s;
  };

  std::vector<double> betas = {alpha};
  if (alpha != 1.0) betas.push_back(1.0);
  for (const auto& v : iterates) {
    if (v.size() != oracle.dist.size()) {
      throw InputError("verify_gradient_bound_lemma: iterate has the wrong length");
    }
    const double excess = oracle.risk_from_values(v) - oracle.risk_at_f_H;
    for (double beta : betas) {
      const double lhs = moment(v, 1.0 + beta);
      const double two_b = std::pow(2.0, beta);
      const double rhs = two_b * std::pow(L, 1.0 / alpha) * (1.0 + beta) * excess +
                         two_b * (1.0 - alpha * beta) / (1.0 + alpha) +
                         two_b * moment(oracle.f_H_values, 1.0 + beta);
      std::vector<double> w = {beta};
      w.insert(w.end(), v.begin(), v.end());
      rep.record(rhs - lhs, std::move(w));
    }
  }
  return rep;
}

VerificationReport verify_series_lemma(const StepSchedule& schedule,
                                       std::size_t horizon) {
  VerificationReport rep;
  rep.check_name = "series_ratio/" + schedule.name();
  rep.tolerance = 0.0;
  rep.proxy = true;
  const bool vanishing =
      (schedule.family == ScheduleFamily::kPolynomial && schedule.theta > 0.0) ||
      schedule.family == ScheduleFamily::kPolyLog;
  if (!vanishing) {
    rep.skipped = true;
    rep.note = "skipped: step sizes do not tend to 0";
    return rep;
  }
  if (!check_necessary(schedule).holds()) {
    rep.skipped = true;
    rep.note = "skipped: sum of step sizes converges";
    return rep;
  }
  if (horizon < 32) throw InputError("verify_series_lemma: horizon must be >= 32");

  std::vector<std::pair<std::size_t, double>> ratios;
  double s1 = 0.0;
  double s2 = 0.0;
  std::size_t next = 1;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double e = step_size(schedule, t);
    s1 += e;
    s2 += e * e;
    if (t == next) {
      ratios.emplace_back(t, s2 / s1);
      next *= 2;
    }
  }
  const std::size_t half = ratios.size() / 2;
  for (std::size_t i = half + 1; i < ratios.size(); ++i) {
    rep.record(ratios[i - 1].second - ratios[i].second,
               {static_cast<double>(ratios[i].first), ratios[i].second});
  }
  const auto& last = ratios.back();
  const auto& earlier = ratios[ratios.size() - 5];  // 16x smaller t
  rep.record(earlier.second - last.second,
             {static_cast<double>(last.first), last.second, earlier.second});
  // Strict decrease is the claim; zero slack counts as a failure.
  if (rep.worst_slack <= 0.0 && rep.failures == 0) ++rep.failures;
  rep.note = "finite-horizon proxy for r_t -> 0; r(" + std::to_string(last.first) +
             ") = " + std::to_string(last.second);
  return rep;
}

std::vector<VerificationReport> verify_loss_suite(const LossModel& loss,
                                                  std::size_t n_trials,
                                                  std::uint64_t seed) {
  std::vector<VerificationReport> out;
  out.push_back(verify_holder(loss, n_trials, seed));
  out.push_back(verify_smoothness_sandwich(loss, n_trials, seed + 1));
  out.push_back(verify_self_bounding(loss, n_trials, seed + 2));

  const LossModel half_L = loss.with_holder_L(loss.holder_L() / 2.0);
  // B is dropped too: for p_absolute the closed-form pair is loose enough
  // that A/4, B/4 still holds, while B = 0 fails near the kink for p < 2.
  const LossModel quarter_A = loss.with_self_bounding(loss.self_A() / 4.0, 0.0);
  std::vector<VerificationReport> controls = {
      verify_holder(half_L, n_trials, seed + 3),
      verify_smoothness_sandwich(half_L, n_trials, seed + 4),
      verify_self_bounding(quarter_A, n_trials, seed + 5)};
  for (auto& c : controls) {
    c.negative_control = true;
    c.check_name += "/negative_control";
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

VerificationReport slack_report(const std::string& name,
                                const std::vector<TrajectoryRecord>& records,
                                bool bounds) {
  VerificationReport rep;
  rep.check_name = name;
  rep.tolerance = 1e-8;
  for (const auto& r : records) {
    if (bounds) {
      if (!r.bounds_monitored) continue;
      for (double s : {r.worst_slack_dist_bound, r.worst_slack_norm_bound,
                       r.worst_slack_loss_sum_bound}) {
        if (!std::isnan(s)) rep.record(s, {static_cast<double>(r.seed)});
      }
    } else {
      if (!r.descent_monitored || std::isnan(r.worst_slack_descent)) continue;
      rep.record(r.worst_slack_descent, {static_cast<double>(r.seed)});
    }
  }
  if (rep.trials == 0) {
    rep.skipped = true;
    rep.note = "no trajectory satisfied the monitor's hypotheses";
  }
  return rep;
}

}  // namespace

VerificationReport descent_inequality_report(
    const std::vector<TrajectoryRecord>& records) {
  return slack_report("descent_inequality", records, false);
}

VerificationReport iterate_bound_report(
    const std::vector<TrajectoryRecord>& records) {
  return slack_report("iterate_bounds", records, true);
}

}  // namespace okgd
