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

#include "okgd/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "okgd/error.hpp"

namespace okgd {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectories_csv(const std::vector<TrajectoryRecord>& records) {
  std::string out =
      "seed,T,excess_last,excess_uniform,excess_weighted,dist_sq_to_fH,"
      "max_dist_sq_so_far,min_slack_descent,min_slack_bound,diverged\n";
  for (const auto& r : records) {
    for (const auto& row : r.rows) {
      out += std::to_string(r.seed);
      out += ',';
      out += std::to_string(row.t);
      for (double v : {row.excess_last, row.excess_uniform, row.excess_weighted,
                       row.dist_sq_to_fH, row.max_dist_sq_so_far,
                       row.min_slack_descent, row.min_slack_bound}) {
        out += ',';
        out += format_double(v);
      }
      out += r.diverged ? ",1\n" : ",0\n";
    }
  }
  return out;
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json curve_json(const Curve& c) {
  Json arr = Json::array();
  for (const auto& [t, v] : c) arr.push_back({{"T", t}, {"value", finite_or_null(v)}});
  return arr;
}

Json verdict_json(const ConditionVerdict& v) {
  return {{"verdict", to_string(v.verdict)}, {"reason", v.reason}, {"heuristic", v.heuristic}};
}

}  // namespace

Json summary_json(const Experiment& experiment, const RiskOracle& oracle,
                  const std::vector<TrajectoryRecord>& records) {
  const TrialConfig& tc = experiment.trial;
  const TheoryConstants k = theory_constants(oracle, tc.schedule);
  Json s;
  s["config"] = experiment.normalized;
  s["constants"] = {{"kappa", k.kappa},
                    {"alpha", k.alpha},
                    {"L", k.holder_L},
                    {"A", k.A},
                    {"B", k.B},
                    {"C1", finite_or_null(k.C1)},
                    {"C2", finite_or_null(k.C2)},
                    {"eta_max", finite_or_null(k.eta_max)},
                    {"eta_necessity_cap", finite_or_null(k.eta_necessity)},
                    {"eta1", tc.schedule.initial()},
                    {"f_H_norm_sq", k.f_H_norm_sq},
                    {"risk_at_f_H", k.risk_at_f_H},
                    {"sup_loss_at_zero", k.sup_loss_at_zero},
                    {"sup_loss_at_f_H", k.sup_loss_at_f_H}};
  s["schedule_verdicts"] = {
      {"sufficient_expectation", verdict_json(check_sufficient_expectation(tc.schedule, k.alpha))},
      {"necessary", verdict_json(check_necessary(tc.schedule))},
      {"almost_sure", verdict_json(check_almost_sure(tc.schedule, k.alpha))}};

  std::size_t diverged = 0;
  for (const auto& r : records) diverged += r.diverged ? 1 : 0;
  s["trials"] = records.size();
  s["diverged"] = diverged;

  const double q_high = 1.0 - tc.delta;
  Json metrics = Json::object();
  if (diverged < records.size()) {
    for (Metric m : experiment.fit.metrics) {
      Json mj;
      const Curve median = quantile_curve(records, m, 0.5);
      const Curve high = quantile_curve(records, m, q_high);
      mj["median"] = curve_json(median);
      mj["quantile_high"] = {{"q", q_high}, {"curve", curve_json(high)}};
      mj["mean"] = curve_json(mean_curve(records, m));
      for (const auto& [name, curve] : {std::pair{"fit_median", &median},
                                        std::pair{"fit_quantile_high", &high}}) {
        try {
          const RateFit f = fit_curve(*curve, experiment.fit.drop_first);
          mj[name] = {{"slope", f.slope},       {"intercept", f.intercept},
                      {"r_squared", f.r_squared}, {"points_used", f.points_used},
                      {"dropped", f.dropped},   {"clamped", f.clamped}};
        } catch (const InputError& e) {
          mj[name] = {{"error", e.what()}};
        }
      }
      metrics[to_string(m)] = std::move(mj);
    }
  }
  s["metrics"] = std::move(metrics);

  const auto desc = descent_inequality_report(records);
  const auto bounds = iterate_bound_report(records);
  s["monitored"] = {report_json(desc), report_json(bounds)};
  return s;
}

Json report_json(const VerificationReport& r) {
  Json w = Json::array();
  for (const auto& x : r.failure_witnesses) {
    Json row = Json::array();
    for (double v : x) row.push_back(finite_or_null(v));
    w.push_back(std::move(row));
  }
  return {{"check", r.check_name},
          {"trials", r.trials},
          {"worst_slack", finite_or_null(r.worst_slack)},
          {"failures", r.failures},
          {"tolerance", r.tolerance},
          {"negative_control", r.negative_control},
          {"skipped", r.skipped},
          {"proxy", r.proxy},
          {"ok", r.ok()},
          {"note", r.note},
          {"failure_witnesses", std::move(w)}};
}

Json function_json(const RkhsFunction& f) {
  Json centers = Json::array();
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto p = f.point(i);
    centers.push_back(std::vector<double>(p.begin(), p.end()));
    coeffs.push_back(f.coeff(i));
  }
  return {{"kernel", f.kernel().name()}, {"centers", centers}, {"coeffs", coeffs}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  if (s == "nan") return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InputError(where + ": '" + s + "' is not a number");
  }
  return v;
}

}  // namespace

Curve read_curve_csv(const std::filesystem::path& path, Metric metric, double q) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + " is empty");
  const auto header = split_csv(line);
  auto column = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto t_col = column("T");
  if (t_col < 0) throw InputError(path.string() + ": no 'T' column");
  const auto v_col = column("value");
  const bool trajectories = v_col < 0;

  std::vector<TrajectoryRecord> records;
  std::map<std::int64_t, std::size_t> by_seed;
  Curve direct;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const double t = parse_number(cells[t_col], where);
    if (!(t >= 1.0) || t != std::floor(t)) throw InputError(where + ": T must be a positive integer");
    if (!trajectories) {
      direct.emplace_back(static_cast<std::size_t>(t), parse_number(cells[v_col], where));
      continue;
    }
    const auto seed_col = column("seed");
    const auto m_col = column(to_string(metric));
    const auto d_col = column("diverged");
    if (seed_col < 0 || m_col < 0) {
      throw InputError(path.string() + ": needs 'value' or 'seed' and '" +
                       to_string(metric) + "' columns");
    }
    const auto seed = static_cast<std::int64_t>(parse_number(cells[seed_col], where));
    auto [it, fresh] = by_seed.emplace(seed, records.size());
    if (fresh) {
      records.emplace_back();
      records.back().seed = seed;
    }
    TrajectoryRecord& rec = records[it->second];
    if (d_col >= 0 && cells[d_col] == "1") rec.diverged = true;
    CheckpointRow row;
    row.t = static_cast<std::size_t>(t);
    const double v = parse_number(cells[m_col], where);
    switch (metric) {
      case Metric::kExcessLast: row.excess_last = v; break;
      case Metric::kExcessUniform: row.excess_uniform = v; break;
      case Metric::kExcessWeighted: row.excess_weighted = v; break;
      case Metric::kDistSq: row.dist_sq_to_fH = v; break;
      case Metric::kMaxDistSq: row.max_dist_sq_so_far = v; break;
    }
    rec.rows.push_back(row);
  }
  if (!trajectories) return direct;
  if (records.empty()) throw InputError(path.string() + " has no data rows");
  return quantile_curve(records, metric, q);
}

}  // namespace okgd
