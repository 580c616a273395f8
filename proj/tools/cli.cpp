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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "okgd/config.hpp"
#include "okgd/error.hpp"
#include "okgd/experiment.hpp"
#include "okgd/report.hpp"
#include "okgd/verify.hpp"

namespace okgd::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string seeds;
};

std::string default_out_dir() {
  const char* env = std::getenv("OKGD_OUT_DIR");
  return env && *env ? env : "okgd_out";
}

// File, then --set overrides in order, then --seeds.
Json assemble(const Common& c, bool config_required) {
  Json cfg = Json::object();
  if (!c.config_path.empty()) {
    cfg = load_config_file(c.config_path);
  } else if (config_required) {
    throw ConfigError("", "--config is required");
  }
  for (const auto& o : c.overrides) apply_override(cfg, o);
  if (!c.seeds.empty()) apply_override(cfg, "seeds=\"" + c.seeds + "\"");
  return cfg;
}

struct RunOutput {
  std::vector<TrajectoryRecord> records;
  RiskOracle oracle;
};

RunOutput execute(const Experiment& ex, bool keep_snapshots) {
  RunOutput r{{}, solve_f_H(ex.trial.distribution, ex.trial.loss, ex.trial.kernel)};
  TrialOptions opts;
  opts.keep_snapshots = keep_snapshots;
  r.records = run_sweep(ex.trial, r.oracle, ex.trial.seeds, opts);
  return r;
}

void write_run(const fs::path& dir, const Experiment& ex, const RunOutput& r,
               bool dump_models) {
  write_file_atomic(dir / "trajectories.csv", trajectories_csv(r.records));
  write_file_atomic(dir / "summary.json", summary_json(ex, r.oracle, r.records).dump(2) + "\n");
  if (!dump_models) return;
  write_file_atomic(dir / "models" / "f_H.json",
                    function_json(RkhsFunction::from_expansion(
                                      ex.trial.kernel, ex.trial.distribution.support_x,
                                      r.oracle.f_H_coeffs))
                            .dump(2) +
                        "\n");
  for (const auto& rec : r.records) {
    if (rec.snapshots_last.empty()) continue;
    Json j = {{"seed", rec.seed},
              {"T", rec.rows.back().t},
              {"last", function_json(rec.snapshots_last.back())},
              {"uniform_average", function_json(rec.snapshots_uniform.back())},
              {"weighted_average", function_json(rec.snapshots_weighted.back())}};
    write_file_atomic(dir / "models" / ("seed_" + std::to_string(rec.seed) + ".json"),
                      j.dump(2) + "\n");
  }
}

int cmd_run(const Common& c, bool dump_models, std::ostream& out) {
  const Experiment ex = build_experiment(assemble(c, true));
  const RunOutput r = execute(ex, dump_models);
  const fs::path dir = c.out_dir;
  write_run(dir, ex, r, dump_models);
  std::size_t diverged = 0;
  for (const auto& rec : r.records) diverged += rec.diverged;
  out << "trials " << r.records.size() << ", diverged " << diverged << "\n"
      << "wrote " << (dir / "trajectories.csv").string() << " and "
      << (dir / "summary.json").string() << "\n";
  return kOk;
}

int cmd_sweep(const Common& c, std::ostream& out) {
  const Json cfg = assemble(c, true);
  const auto points = expand_sweep(cfg);
  // Every grid point must validate before anything runs.
  std::vector<Experiment> exps;
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      exps.push_back(build_experiment(points[i]));
    } catch (const ConfigError& e) {
      throw ConfigError(e.path(), "sweep point " + std::to_string(i) + ": " + e.message());
    }
  }
  Json index = Json::array();
  const fs::path dir = c.out_dir;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    std::ostringstream name;
    name << "point_" << std::setw(3) << std::setfill('0') << i;
    const RunOutput r = execute(exps[i], false);
    write_run(dir / name.str(), exps[i], r, false);
    Json entry = {{"dir", name.str()}};
    if (cfg.contains("sweep")) {
      for (auto it = cfg["sweep"].begin(); it != cfg["sweep"].end(); ++it) {
        Json v = points[i];
        for (const auto& part : [&] {
               std::vector<std::string> ps;
               std::stringstream ss(it.key());
               for (std::string p; std::getline(ss, p, '.');) ps.push_back(p);
               return ps;
             }()) {
          v = v.is_object() && v.contains(part) ? v[part] : Json(nullptr);
        }
        entry["values"][it.key()] = v;
      }
    }
    index.push_back(std::move(entry));
    out << name.str() << " done\n";
  }
  write_file_atomic(dir / "sweep.json", index.dump(2) + "\n");
  out << "wrote " << exps.size() << " sweep points under " << dir.string() << "\n";
  return kOk;
}

std::string file_name(std::string check) {
  for (char& ch : check) {
    if (ch == '/' || ch == ' ') ch = '.';
  }
  return check + ".json";
}

int cmd_verify(const Common& c, std::ostream& out) {
  const Experiment ex = build_experiment(assemble(c, true));
  const RunOutput r = execute(ex, true);

  std::vector<VerificationReport> reports =
      verify_loss_suite(ex.trial.loss, ex.verify.samples, ex.verify.seed);

  std::vector<std::vector<double>> iterates = {std::vector<double>(r.oracle.dist.size(), 0.0),
                                               r.oracle.f_H_values};
  for (const auto& rec : r.records) {
    for (const auto& f : rec.snapshots_last) iterates.push_back(r.oracle.values_of(f));
  }
  reports.push_back(verify_gradient_bound_lemma(r.oracle, iterates));
  reports.push_back(verify_series_lemma(ex.trial.schedule, ex.verify.series_horizon));
  reports.push_back(descent_inequality_report(r.records));
  reports.push_back(iterate_bound_report(r.records));

  const fs::path dir = fs::path(c.out_dir) / "verify";
  Json all = Json::array();
  bool pass = true;
  for (const auto& rep : reports) {
    const Json j = report_json(rep);
    write_file_atomic(dir / file_name(rep.check_name), j.dump(2) + "\n");
    all.push_back(j);
    std::string status = rep.skipped ? "SKIP" : (rep.ok() ? "PASS" : "FAIL");
    if (rep.negative_control && !rep.ok()) status = "WARN";  // control did not trip
    if (!rep.negative_control && !rep.ok()) pass = false;
    out << std::left << std::setw(5) << status << rep.check_name << "  trials="
        << rep.trials << " failures=" << rep.failures
        << " worst_slack=" << format_double(rep.worst_slack) << "\n";
  }
  write_file_atomic(fs::path(c.out_dir) / "verify.json",
                    Json{{"pass", pass}, {"reports", all}}.dump(2) + "\n");
  out << (pass ? "all checks passed" : "verification failed") << "\n";
  return pass ? kOk : kCheckFailed;
}

int cmd_fit_rate(const std::string& input, const std::string& metric_name, double q,
                 bool drop_first, std::ostream& out) {
  const auto metric = metric_from_string(metric_name);
  if (!metric) throw InputError("unknown metric '" + metric_name + "'");
  const Curve curve = read_curve_csv(input, *metric, q);
  const RateFit f = fit_curve(curve, drop_first);
  out << std::fixed << std::setprecision(4) << "slope " << f.slope << "\n"
      << "intercept " << f.intercept << "\n"
      << "r_squared " << f.r_squared << "\n"
      << "points_used " << f.points_used << "\n"
      << "dropped " << f.dropped << "\n"
      << "clamped " << f.clamped << "\n";
  return kOk;
}

int cmd_check_schedule(const Common& c, double alpha_flag, std::ostream& out) {
  Json cfg = assemble(c, false);
  // Only the schedule and the loss matter here, so a placeholder task is
  // supplied when the config has none.
  if (!cfg.contains("distribution")) {
    cfg["distribution"] = {
        {"support", {{"points", {{0.0}}}}},
        {"labels", {{"model", "regression"}, {"target", {{"values", {0.0}}}}}}};
    const std::string family = cfg.value("/loss/family"_json_pointer, std::string());
    if (family == "logistic" || family == "smoothed_hinge_sq" || family == "p_hinge") {
      cfg["distribution"]["labels"] = {{"model", "classification"}, {"p_plus", {0.5}}};
    }
  }
  const Experiment ex = build_experiment(cfg);
  const double alpha = alpha_flag > 0.0 ? alpha_flag : ex.trial.loss.alpha();
  const auto& s = ex.trial.schedule;
  auto v = [](const ConditionVerdict& cv) {
    return Json{{"verdict", to_string(cv.verdict)}, {"reason", cv.reason}};
  };
  const Json j = {{"schedule", s.name()},
                  {"alpha", alpha},
                  {"sufficient_expectation", v(check_sufficient_expectation(s, alpha))},
                  {"necessary", v(check_necessary(s))},
                  {"almost_sure", v(check_almost_sure(s, alpha))}};
  out << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online gradient descent in RKHS: experiments and checks", "okgd"};
  app.require_subcommand(1);

  Common c;
  c.out_dir = default_out_dir();
  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config,-c", c.config_path, "JSON experiment config");
    sub->add_option("--set", c.overrides, "Override a config key: a.b=value")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--seeds", c.seeds, "Seed range a..b (half-open) or one seed");
    if (needs_out) {
      sub->add_option("--out-dir,-o", c.out_dir, "Output directory (default $OKGD_OUT_DIR)");
    }
  };

  bool dump_models = false;
  auto* run = app.add_subcommand("run", "Run all seeds of one config");
  add_common(run, true);
  run->add_flag("--dump-models", dump_models, "Write final iterates as JSON");

  auto* sweep = app.add_subcommand("sweep", "Run every point of the config's sweep grid");
  add_common(sweep, true);

  auto* verify = app.add_subcommand("verify", "Randomized inequality checks");
  add_common(verify, true);

  std::string input;
  std::string metric = "excess_last";
  double q = 0.5;
  bool drop_first = false;
  auto* fit = app.add_subcommand("fit-rate", "Log-log slope of a (T, value) CSV");
  fit->add_option("input", input, "CSV with T,value or a trajectories.csv")->required();
  fit->add_option("--metric", metric, "Metric column for trajectories input");
  fit->add_option("--quantile", q, "Across-seed quantile for trajectories input");
  fit->add_flag("--drop-first", drop_first, "Ignore the smallest T");

  double alpha = 0.0;
  auto* check = app.add_subcommand("check-schedule", "Step-size condition verdicts");
  add_common(check, false);
  check->add_option("--alpha", alpha, "Hölder exponent (default: the loss's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (run->parsed()) return cmd_run(c, dump_models, out);
    if (sweep->parsed()) return cmd_sweep(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (fit->parsed()) return cmd_fit_rate(input, metric, q, drop_first, out);
    if (check->parsed()) return cmd_check_schedule(c, alpha, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace okgd::cli
