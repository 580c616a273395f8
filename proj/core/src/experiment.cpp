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

#include "okgd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "okgd/error.hpp"

namespace okgd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void TrialConfig::validate() const {
  distribution.validate();
  kernel.validate();
  schedule.validate();
  if (T_max < 1) throw InputError("trial config: T_max must be >= 1");
  if (checkpoints.empty()) throw InputError("trial config: no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1) throw InputError("trial config: checkpoints start at 1");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw InputError("trial config: checkpoints must be strictly ascending");
    }
  }
  if (checkpoints.back() != T_max) {
    throw InputError("trial config: T_max must equal the last checkpoint");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InputError("trial config: delta must lie in (0, 1)");
  }
}

std::vector<std::size_t> geometric_checkpoints(std::size_t base, int from,
                                               int to) {
  if (base < 2 || from < 0 || to < from) {
    throw InputError("geometric_checkpoints: need base >= 2 and 0 <= from <= to");
  }
  std::vector<std::size_t> cps;
  for (int k = from; k <= to; ++k) {
    std::size_t v = 1;
    for (int i = 0; i < k; ++i) v *= base;
    cps.push_back(v);
  }
  return cps;
}

TheoryConstants theory_constants(const RiskOracle& oracle,
                                 const StepSchedule& schedule) {
  TheoryConstants c;
  c.kappa = oracle.kappa;
  c.alpha = oracle.loss.alpha();
  c.holder_L = oracle.loss.holder_L();
  c.A = oracle.loss.self_A();
  c.B = oracle.loss.self_B();
  c.f_H_norm_sq = oracle.f_H_norm_sq;
  c.sup_loss_at_zero = oracle.sup_loss_at_zero();
  c.sup_loss_at_f_H = oracle.sup_loss_at_f_H();
  c.risk_at_f_H = oracle.risk_at_f_H;
  c.C1 = c.f_H_norm_sq + c.B / c.A +
         2.0 * std::max(c.sup_loss_at_zero, c.sup_loss_at_f_H);
  c.C2 = 2.0 * c.sup_loss_at_f_H + schedule.initial() * c.kappa * c.kappa * c.B;
  c.eta_max = max_step_bound(oracle.loss, c.kappa);
  c.eta_necessity = necessity_step_cap(oracle.loss, c.kappa);
  return c;
}

namespace {

// Tracks |f_t - f_H|^2 and |f_t|^2 along a trajectory and the slack of
//   |f_{t+1} - f_H|^2 <= |f_t - f_H|^2 + eta^2 phi'^2 kappa^2
//                        + 2 eta [phi(y, f_H(x)) - phi(y, f_t(x))]
// and of the crude iterate bounds that follow from it when eta_t <= 1/(A k^2).
class SlackMonitor {
 public:
  SlackMonitor(const RiskOracle& oracle, const TheoryConstants& constants,
               const Variant& variant)
      : oracle_(oracle),
        c_(constants),
        plain_(variant.kind == VariantKind::kPlain),
        dist_sq_(oracle.f_H_norm_sq) {}

  double dist_sq() const { return dist_sq_; }
  bool plain() const { return plain_; }
  bool bounds_active() const { return plain_ && bounds_ok_; }

  // <f, f_H> = sum_i c^H_i f(x_i) from the support probe values.
  double inner_with_f_H(std::span<const double> values) const {
    double s = 0.0;
    for (std::size_t i = 0; i < oracle_.f_H_coeffs.size(); ++i) {
      s += oracle_.f_H_coeffs[i] * values[i];
    }
    return s;
  }

  struct Slacks {
    double descent = kNaN;
    double dist_bound = kNaN;
    double norm_bound = kNaN;
    double loss_sum_bound = kNaN;
  };

  Slacks observe(const StepInfo& info, const OptimizerState& state,
                 double prev_eta) {
    Slacks s;
    const double before = dist_sq_;
    const double norm_after = state.norm_sq();
    dist_sq_ = std::max(0.0, norm_after -
                                 2.0 * inner_with_f_H(state.probe_values()) +
                                 oracle_.f_H_norm_sq);

    if (!plain_) return s;
    const double fh_x = oracle_.f_H_values[info.probe];
    const double loss_t = oracle_.loss.value(info.y, info.value_before);
    const double rhs = before +
                       info.eta * info.eta * info.gradient * info.gradient *
                           c_.kappa * c_.kappa +
                       2.0 * info.eta * (oracle_.loss.value(info.y, fh_x) - loss_t);
    s.descent = rhs - dist_sq_;

    if (info.eta > c_.eta_max * (1.0 + 1e-12)) bounds_ok_ = false;
    if (info.t > 1 && info.eta > prev_eta) monotone_ = false;
    eta_sum_ += info.eta;
    eta_sq_sum_ += info.eta * info.eta;
    loss_sum_ += info.eta * info.eta * loss_t;
    if (!bounds_ok_) return s;
    s.dist_bound = c_.C1 * (1.0 + eta_sum_) - dist_sq_;
    s.norm_bound = c_.C1 * eta_sum_ - norm_after;
    if (monotone_) {
      s.loss_sum_bound = state.schedule().initial() * c_.f_H_norm_sq +
                         c_.C2 * eta_sq_sum_ - loss_sum_;
    }
    return s;
  }

 private:
  const RiskOracle& oracle_;
  TheoryConstants c_;
  bool plain_;
  bool bounds_ok_ = true;
  bool monotone_ = true;
  double dist_sq_;
  double eta_sum_ = 0.0;
  double eta_sq_sum_ = 0.0;
  double loss_sum_ = 0.0;
};

double nan_min(double a, double b) {
  if (std::isnan(a)) return b;
  if (std::isnan(b)) return a;
  return std::min(a, b);
}

}  // namespace

TrajectoryRecord run_trial(const TrialConfig& config, const RiskOracle& oracle,
                           std::int64_t seed, const TrialOptions& options) {
  config.validate();
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.worst_slack_descent = kNaN;
  rec.worst_slack_dist_bound = kNaN;
  rec.worst_slack_norm_bound = kNaN;
  rec.worst_slack_loss_sum_bound = kNaN;

  const TheoryConstants constants = theory_constants(oracle, config.schedule);
  OptimizerState state(config.variant, config.schedule, config.loss,
                       config.kernel);
  const std::size_t m = oracle.dist.size();
  for (const auto& x : oracle.dist.support_x) state.register_probe(x);

  SlackMonitor monitor(oracle, constants, config.variant);
  rec.descent_monitored = monitor.plain();
  Rng rng(config.base_seed + static_cast<std::uint64_t>(seed));

  double max_dist = monitor.dist_sq();
  double window_descent = kNaN;
  double window_bound = kNaN;
  double prev_eta = 0.0;
  std::size_t next_cp = 0;
  std::vector<double> avg_values(m);

  try {
    for (std::size_t t = 1; t <= config.T_max; ++t) {
      const bool is_cp = next_cp < config.checkpoints.size() &&
                         config.checkpoints[next_cp] == t;
      CheckpointRow row;
      if (is_cp) {
        const auto values = state.probe_values().subspan(0, m);
        row.t = t;
        row.excess_last = oracle.excess_from_values(values);
        const double eta_t = step_size(config.schedule, t);
        const auto usum = state.average_sums(AverageKind::kUniform);
        const auto wsum = state.average_sums(AverageKind::kWeighted);
        const double uw = state.average_weight(AverageKind::kUniform) + 1.0;
        const double ww = state.average_weight(AverageKind::kWeighted) + eta_t;
        for (std::size_t i = 0; i < m; ++i) avg_values[i] = (usum[i] + values[i]) / uw;
        row.excess_uniform = oracle.excess_from_values(avg_values);
        for (std::size_t i = 0; i < m; ++i) {
          avg_values[i] = (wsum[i] + eta_t * values[i]) / ww;
        }
        row.excess_weighted = oracle.excess_from_values(avg_values);
        row.dist_sq_to_fH = monitor.dist_sq();
        row.max_dist_sq_so_far = max_dist;
        if (!std::isfinite(row.excess_last) || !std::isfinite(row.dist_sq_to_fH) ||
            !std::isfinite(row.excess_weighted) || !std::isfinite(row.excess_uniform)) {
          throw DivergenceError(t, row.excess_last);
        }
        if (options.keep_snapshots) {
          rec.snapshots_last.push_back(state.model());
          rec.snapshots_uniform.push_back(
              state.average_with_current(AverageKind::kUniform));
          rec.snapshots_weighted.push_back(
              state.average_with_current(AverageKind::kWeighted));
        }
      }

      if (options.observer) options.observer(state);
      const Sample z = sample(oracle.dist, rng);
      const StepInfo info = state.step(z.x, z.y);
      const auto slacks = monitor.observe(info, state, prev_eta);
      prev_eta = info.eta;
      if (!std::isfinite(monitor.dist_sq())) {
        throw DivergenceError(t, monitor.dist_sq());
      }
      max_dist = std::max(max_dist, monitor.dist_sq());

      const double bound = nan_min(nan_min(slacks.dist_bound, slacks.norm_bound),
                                   slacks.loss_sum_bound);
      window_descent = nan_min(window_descent, slacks.descent);
      window_bound = nan_min(window_bound, bound);
      rec.worst_slack_descent = nan_min(rec.worst_slack_descent, slacks.descent);
      rec.worst_slack_dist_bound =
          nan_min(rec.worst_slack_dist_bound, slacks.dist_bound);
      rec.worst_slack_norm_bound =
          nan_min(rec.worst_slack_norm_bound, slacks.norm_bound);
      rec.worst_slack_loss_sum_bound =
          nan_min(rec.worst_slack_loss_sum_bound, slacks.loss_sum_bound);

      if (is_cp) {
        row.min_slack_descent = window_descent;
        row.min_slack_bound = window_bound;
        window_descent = kNaN;
        window_bound = kNaN;
        rec.rows.push_back(row);
        ++next_cp;
      }
    }
  } catch (const DivergenceError& e) {
    rec.diverged = true;
    rec.diverged_at = e.step();
    rec.divergence_message = e.what();
  }
  rec.bounds_monitored = monitor.bounds_active();
  return rec;
}

TrajectoryRecord run_trial(const TrialConfig& config, std::int64_t seed) {
  const RiskOracle oracle =
      solve_f_H(config.distribution, config.loss, config.kernel);
  return run_trial(config, oracle, seed);
}

std::vector<TrajectoryRecord> run_sweep(const TrialConfig& config,
                                        const RiskOracle& oracle,
                                        const std::vector<std::int64_t>& seeds,
                                        const TrialOptions& options) {
  if (seeds.empty()) throw InputError("run_sweep: need at least one seed");
  config.validate();
  std::vector<TrajectoryRecord> out(seeds.size());
  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, seeds.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  std::size_t error_index = seeds.size();
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < seeds.size();
         i = next.fetch_add(1)) {
      try {
        out[i] = run_trial(config, oracle, seeds[i], options);
      } catch (...) {
        // Report the lowest failing seed index so the error is stable.
        std::lock_guard lock(error_mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<TrajectoryRecord> run_sweep(const TrialConfig& config,
                                        const std::vector<std::int64_t>& seeds,
                                        const TrialOptions& options) {
  const RiskOracle oracle =
      solve_f_H(config.distribution, config.loss, config.kernel);
  return run_sweep(config, oracle, seeds, options);
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::kExcessLast:
      return "excess_last";
    case Metric::kExcessUniform:
      return "excess_uniform";
    case Metric::kExcessWeighted:
      return "excess_weighted";
    case Metric::kDistSq:
      return "dist_sq_to_fH";
    case Metric::kMaxDistSq:
      return "max_dist_sq_so_far";
  }
  return "unknown";
}

std::optional<Metric> metric_from_string(const std::string& name) {
  for (Metric m : {Metric::kExcessLast, Metric::kExcessUniform,
                   Metric::kExcessWeighted, Metric::kDistSq, Metric::kMaxDistSq}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

double metric_value(const CheckpointRow& row, Metric m) {
  switch (m) {
    case Metric::kExcessLast:
      return row.excess_last;
    case Metric::kExcessUniform:
      return row.excess_uniform;
    case Metric::kExcessWeighted:
      return row.excess_weighted;
    case Metric::kDistSq:
      return row.dist_sq_to_fH;
    case Metric::kMaxDistSq:
      return row.max_dist_sq_so_far;
  }
  return kNaN;
}

RateFit fit_rate(const Curve& points) {
  std::vector<std::pair<double, double>> logs;
  RateFit fit;
  for (const auto& [t, v] : points) {
    if (t == 0) throw InputError("fit_rate: T must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) {
      ++fit.dropped;
      continue;
    }
    logs.emplace_back(std::log(static_cast<double>(t)), std::log(v));
  }
  if (logs.size() < 2) {
    throw InputError("fit_rate: fewer than 2 usable points (" +
                     std::to_string(fit.dropped) + " dropped)");
  }
  const double n = static_cast<double>(logs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw InputError("fit_rate: all points share one T");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // Constant data fits exactly.
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.points_used = logs.size();
  return fit;
}

RateFit fit_curve(Curve points, bool drop_first, double floor) {
  if (drop_first && !points.empty()) points.erase(points.begin());
  std::size_t clamped = 0;
  for (auto& [t, v] : points) {
    if (v < floor) {
      v = floor;
      ++clamped;
    }
  }
  RateFit fit = fit_rate(points);
  fit.clamped = clamped;
  return fit;
}

namespace {

std::vector<const TrajectoryRecord*> usable(
    const std::vector<TrajectoryRecord>& records) {
  std::vector<const TrajectoryRecord*> ok;
  for (const auto& r : records) {
    if (!r.diverged) ok.push_back(&r);
  }
  if (ok.empty()) throw InputError("no non-diverged records to aggregate");
  for (const auto* r : ok) {
    if (r->rows.size() != ok.front()->rows.size()) {
      throw InputError("records have different checkpoint grids");
    }
  }
  return ok;
}

}  // namespace

Curve quantile_curve(const std::vector<TrajectoryRecord>& records,
                     Metric metric, double q) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("quantile_curve: q must lie in (0, 1)");
  const auto ok = usable(records);
  Curve curve;
  std::vector<double> vals(ok.size());
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(ok.size()) - 1e-12));
  for (std::size_t c = 0; c < ok.front()->rows.size(); ++c) {
    for (std::size_t i = 0; i < ok.size(); ++i) {
      vals[i] = metric_value(ok[i]->rows[c], metric);
    }
    std::sort(vals.begin(), vals.end());
    curve.emplace_back(ok.front()->rows[c].t, vals[std::max<std::size_t>(rank, 1) - 1]);
  }
  return curve;
}

Curve mean_curve(const std::vector<TrajectoryRecord>& records, Metric metric) {
  const auto ok = usable(records);
  Curve curve;
  for (std::size_t c = 0; c < ok.front()->rows.size(); ++c) {
    double s = 0.0;
    for (const auto* r : ok) s += metric_value(r->rows[c], metric);
    curve.emplace_back(ok.front()->rows[c].t, s / static_cast<double>(ok.size()));
  }
  return curve;
}

Curve record_curve(const TrajectoryRecord& record, Metric metric) {
  Curve curve;
  for (const auto& row : record.rows) curve.emplace_back(row.t, metric_value(row, metric));
  return curve;
}

double last_iterate_window_min(const Curve& curve, std::size_t T) {
  const std::size_t lo = T / 2;
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& [t, v] : curve) {
    if (t >= lo && t <= T) {
      best = std::min(best, v);
      any = true;
    }
  }
  if (!any) {
    throw InputError("last_iterate_window_min: no checkpoint in [" +
                     std::to_string(lo) + ", " + std::to_string(T) + "]");
  }
  return best;
}

double last_iterate_window_min(const TrajectoryRecord& record, std::size_t T) {
  return last_iterate_window_min(record_curve(record, Metric::kExcessLast), T);
}

}  // namespace okgd
