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

#include "okgd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "okgd/error.hpp"
#include "okgd/optimizer.hpp"

namespace okgd {

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", "'" + path + "' is not valid JSON: " + e.what());
  }
}

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// Reads one JSON object, tracking which keys were consumed so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const Json& node, std::string pointer)
      : node_(node), pointer_(std::move(pointer)) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  const std::string& pointer() const { return pointer_; }
  std::string child(const std::string& key) const {
    return pointer_ + "/" + escape_token(key);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(key.empty() ? pointer_ : child(key), msg);
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return node_.contains(key);
  }

  const Json& at(const std::string& key) {
    if (!has(key)) fail(key, "missing required key");
    return node_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : fallback;
  }
  std::size_t count(const std::string& key, std::size_t fallback, std::size_t lo) {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(fallback));
    if (v < static_cast<std::int64_t>(lo)) {
      fail(key, "must be >= " + std::to_string(lo));
    }
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = node_.at(key);
    if (!v.is_boolean()) fail(key, "expected a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError(child(key) + "/" + std::to_string(i), "expected a number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<Point> points(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of points");
    std::vector<Point> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string here = child(key) + "/" + std::to_string(i);
      const Json& p = v[i];
      Point pt;
      if (p.is_number()) {
        pt.push_back(p.get<double>());
      } else if (p.is_array() && !p.empty()) {
        for (std::size_t d = 0; d < p.size(); ++d) {
          if (!p[d].is_number()) {
            throw ConfigError(here + "/" + std::to_string(d), "expected a number");
          }
          pt.push_back(p[d].get<double>());
        }
      } else {
        throw ConfigError(here, "expected a number or an array of numbers");
      }
      if (!out.empty() && pt.size() != out.front().size()) {
        throw ConfigError(here, "dimension differs from the first point");
      }
      out.push_back(std::move(pt));
    }
    return out;
  }

  Section object(const std::string& key) { return Section(at(key), child(key)); }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!used_.count(it.key())) fail(it.key(), "unknown key");
    }
  }

 private:
  const Json& node_;
  std::string pointer_;
  std::set<std::string> used_;
};

// Rethrows library validation errors against the section they came from.
template <typename F>
auto guarded(const std::string& pointer, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw ConfigError(pointer, e.what());
  }
}

KernelSpec read_kernel(Section s, Json& out) {
  const std::string family = s.string("family", "gaussian");
  out["family"] = family;
  KernelSpec k;
  if (family == "gaussian") {
    const double bw = s.number("bandwidth", 1.0);
    out["bandwidth"] = bw;
    k = guarded(s.child("bandwidth"), [&] { return KernelSpec::gaussian(bw); });
  } else if (family == "linear") {
    k = KernelSpec::linear();
  } else if (family == "polynomial") {
    const std::int64_t degree = s.integer("degree", 2);
    const double offset = s.number("offset", 1.0);
    out["degree"] = degree;
    out["offset"] = offset;
    k = guarded(s.pointer(), [&] {
      return KernelSpec::polynomial(static_cast<int>(degree), offset);
    });
  } else {
    s.fail("family", "unknown kernel family '" + family + "'");
  }
  s.finish();
  return k;
}

LossModel read_loss(Section s, Json& out) {
  const std::string family = s.string("family", "least_squares");
  out["family"] = family;
  LossModel loss = LossModel::least_squares();
  if (family == "least_squares") {
    loss = LossModel::least_squares();
  } else if (family == "huber") {
    loss = LossModel::huber();
  } else if (family == "logistic") {
    loss = LossModel::logistic();
  } else if (family == "smoothed_hinge_sq") {
    loss = LossModel::smoothed_hinge_sq();
  } else if (family == "p_hinge" || family == "p_absolute") {
    const double p = s.number("p");
    out["p"] = p;
    loss = guarded(s.child("p"), [&] {
      return family == "p_hinge" ? LossModel::p_hinge(p) : LossModel::p_absolute(p);
    });
  } else {
    s.fail("family", "unknown loss family '" + family + "'");
  }
  // Declared constants can be replaced, e.g. to probe the randomized checks.
  if (s.has("holder_L")) {
    const double L = s.number("holder_L");
    if (!(L > 0.0)) s.fail("holder_L", "must be positive");
    out["holder_L"] = L;
    loss = loss.with_holder_L(L);
  }
  if (s.has("A") || s.has("B")) {
    const double a = s.number("A", loss.self_A());
    const double b = s.number("B", loss.self_B());
    if (!(a > 0.0)) s.fail("A", "must be positive");
    if (!(b >= 0.0)) s.fail("B", "must be non-negative");
    out["A"] = a;
    out["B"] = b;
    loss = loss.with_self_bounding(a, b);
  }
  s.finish();
  return loss;
}

FiniteDistribution read_distribution(Section s, const KernelSpec& kernel,
                                     Json& out) {
  std::vector<Point> support;
  {
    Section sup = s.object("support");
    Json& o = out["support"];
    if (sup.has("grid")) {
      Section g = sup.object("grid");
      const double lo = g.number("lo");
      const double hi = g.number("hi");
      const std::size_t m = g.count("m", 0, 1);
      g.finish();
      o["grid"] = {{"lo", lo}, {"hi", hi}, {"m", m}};
      support = guarded(g.pointer(), [&] { return uniform_grid(lo, hi, m); });
    } else if (sup.has("points")) {
      support = sup.points("points");
      o["points"] = support;
    } else {
      sup.fail("", "needs 'grid' or 'points'");
    }
    sup.finish();
  }
  const std::size_t m = support.size();

  std::vector<double> probs;
  if (!s.has("probs") || (s.at("probs").is_string() && s.string("probs") == "uniform")) {
    probs.assign(m, 1.0 / static_cast<double>(m));
    out["probs"] = "uniform";
  } else {
    probs = s.numbers("probs");
    if (probs.size() != m) s.fail("probs", "needs one probability per support point");
    out["probs"] = probs;
  }

  Section lab = s.object("labels");
  Json& lo = out["labels"];
  const std::string model = lab.string("model");
  lo["model"] = model;
  FiniteDistribution dist;
  if (model == "regression") {
    std::vector<double> targets;
    Section tg = lab.object("target");
    if (tg.has("values")) {
      targets = tg.numbers("values");
      if (targets.size() != m) tg.fail("values", "needs one value per support point");
      lo["target"]["values"] = targets;
    } else if (tg.has("centers")) {
      const auto centers = tg.points("centers");
      const auto coeffs = tg.numbers("coeffs");
      if (coeffs.size() != centers.size()) {
        tg.fail("coeffs", "needs one coefficient per center");
      }
      if (centers.front().size() != support.front().size()) {
        tg.fail("centers", "dimension differs from the support");
      }
      lo["target"]["centers"] = centers;
      lo["target"]["coeffs"] = coeffs;
      for (const auto& x : support) {
        double v = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
          v += coeffs[j] * eval(kernel, centers[j], x);
        }
        targets.push_back(v);
      }
    } else {
      tg.fail("", "needs 'values' or 'centers' with 'coeffs'");
    }
    tg.finish();
    std::vector<double> noise_values = {0.0};
    std::vector<double> noise_probs = {1.0};
    if (lab.has("noise")) {
      Section nz = lab.object("noise");
      noise_values = nz.numbers("values");
      if (nz.has("probs")) {
        noise_probs = nz.numbers("probs");
      } else {
        noise_probs.assign(noise_values.size(),
                           1.0 / static_cast<double>(noise_values.size()));
      }
      nz.finish();
    }
    lo["noise"] = {{"values", noise_values}, {"probs", noise_probs}};
    dist = guarded(lab.pointer(), [&] {
      return FiniteDistribution::regression(support, probs, targets, noise_values,
                                            noise_probs);
    });
  } else if (model == "classification") {
    const auto p_plus = lab.numbers("p_plus");
    if (p_plus.size() != m) lab.fail("p_plus", "needs one probability per support point");
    lo["p_plus"] = p_plus;
    dist = guarded(lab.pointer(), [&] {
      return FiniteDistribution::classification(support, probs, p_plus);
    });
  } else {
    lab.fail("model", "unknown label model '" + model + "'");
  }
  lab.finish();
  guarded(s.pointer(), [&] {
    dist.validate();
    return 0;
  });
  s.finish();
  return dist;
}

// Step sizes may be absolute or a fraction of 1 / (A kappa^2).
double step_value(Section& s, const std::string& key, double fallback,
                  double eta_max, Json& out) {
  const std::string rel = key + "_relative";
  const bool abs_given = s.has(key);
  const bool rel_given = s.has(rel);
  if (abs_given && rel_given) s.fail(rel, "give either '" + key + "' or '" + rel + "'");
  if (rel_given) {
    const double r = s.number(rel);
    out[rel] = r;
    if (!std::isfinite(eta_max)) s.fail(rel, "the step bound is infinite (B-only loss)");
    return r * eta_max;
  }
  const double v = s.number(key, fallback);
  out[key] = v;
  return v;
}

StepSchedule read_schedule(Section s, const LossModel& loss, double eta_max,
                           Json& out) {
  const std::string family = s.string("family", "polynomial");
  out["family"] = family;
  StepSchedule sched;
  if (family == "polynomial") {
    const double eta1 = step_value(s, "eta1", 0.1, eta_max, out);
    const double theta = s.number("theta", 0.5);
    out["theta"] = theta;
    sched = StepSchedule::polynomial(eta1, theta);
  } else if (family == "poly_log") {
    const double eta1 = step_value(s, "eta1", 0.1, eta_max, out);
    const double beta = s.number("beta", 2.0);
    const double alpha_ref = s.number("alpha_ref", loss.alpha());
    out["beta"] = beta;
    out["alpha_ref"] = alpha_ref;
    sched = StepSchedule::poly_log(eta1, beta, alpha_ref);
  } else if (family == "constant") {
    sched = StepSchedule::constant(step_value(s, "eta", 0.1, eta_max, out));
  } else {
    s.fail("family", "unknown schedule family '" + family + "'");
  }
  guarded(s.pointer(), [&] {
    sched.validate();
    return 0;
  });
  s.finish();
  return sched;
}

Variant read_variant(Section s, Json& out) {
  const std::string kind = s.string("variant", "plain");
  out["variant"] = kind;
  Variant v;
  if (kind == "plain") {
    v = Variant::plain();
  } else if (kind == "regularized") {
    const double lambda = s.number("lambda");
    out["lambda"] = lambda;
    v = guarded(s.child("lambda"), [&] { return Variant::regularized(lambda); });
  } else if (kind == "projected") {
    const double radius = s.number("radius");
    out["radius"] = radius;
    v = guarded(s.child("radius"), [&] { return Variant::projected(radius); });
  } else {
    s.fail("variant", "unknown variant '" + kind + "'");
  }
  s.finish();
  return v;
}

std::vector<std::int64_t> read_seeds(Section& root) {
  if (!root.has("seeds")) return {0};
  const Json& v = root.at("seeds");
  const std::string ptr = root.child("seeds");
  if (v.is_string()) {
    return guarded(ptr, [&] { return parse_seed_range(v.get<std::string>()); });
  }
  if (v.is_number_integer()) return {v.get<std::int64_t>()};
  if (v.is_array() && !v.empty()) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        throw ConfigError(ptr + "/" + std::to_string(i), "expected an integer");
      }
      out.push_back(v[i].get<std::int64_t>());
    }
    return out;
  }
  throw ConfigError(ptr, "expected \"a..b\", an integer or a non-empty integer array");
}

}  // namespace

void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("", "override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &config;
  const auto parts = split_key(key);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw ConfigError("", "override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError("", "override key '" + key + "' descends into a non-object");
      }
      *node = Json::object();
    }
    node = &(*node)[parts[i]];
  }
  *node = std::move(value);
}

std::vector<std::int64_t> parse_seed_range(const std::string& text) {
  auto parse_int = [&](std::string_view sv) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || sv.empty()) {
      throw InputError("seed range '" + text + "' is malformed");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_int(text)};
  const std::int64_t a = parse_int(std::string_view(text).substr(0, dots));
  const std::int64_t b = parse_int(std::string_view(text).substr(dots + 2));
  if (b <= a) throw InputError("seed range '" + text + "' is empty");
  std::vector<std::int64_t> out;
  for (std::int64_t s = a; s < b; ++s) out.push_back(s);
  return out;
}

Experiment build_experiment(const Json& config) {
  Section root(config, "");
  Experiment ex;
  Json& out = ex.normalized;
  out = Json::object();
  TrialConfig& tc = ex.trial;

  const Json empty = Json::object();
  tc.kernel = read_kernel(root.has("kernel") ? root.object("kernel") : Section(empty, "/kernel"),
                          out["kernel"]);
  tc.loss = read_loss(root.has("loss") ? root.object("loss") : Section(empty, "/loss"),
                      out["loss"]);
  tc.distribution = read_distribution(root.object("distribution"), tc.kernel,
                                      out["distribution"]);
  if (tc.loss.domain() != tc.distribution.label_kind) {
    throw ConfigError("/distribution/labels/model",
                      "label model does not match loss '" + tc.loss.name() + "'");
  }
  const double kappa = guarded("/kernel", [&] {
    return kappa_bound(tc.kernel, tc.distribution.support_x);
  });
  const double eta_max = max_step_bound(tc.loss, kappa);
  tc.schedule = read_schedule(
      root.has("schedule") ? root.object("schedule") : Section(empty, "/schedule"),
      tc.loss, eta_max, out["schedule"]);
  tc.variant = read_variant(
      root.has("variant") ? root.object("variant") : Section(empty, "/variant"),
      out["variant"]);

  // Checkpoints beyond T_max are dropped and T_max itself is always recorded.
  std::vector<std::size_t> cps;
  if (!root.has("checkpoints") || root.at("checkpoints").is_object()) {
    std::size_t base = 2;
    std::int64_t from = 8;
    std::int64_t to = 14;
    if (root.has("checkpoints")) {
      Section c = root.object("checkpoints");
      Section g = c.object("geometric");
      base = g.count("base", 2, 2);
      from = g.integer("from", 8);
      to = g.integer("to", 14);
      g.finish();
      c.finish();
    }
    out["checkpoints"]["geometric"] = {{"base", base}, {"from", from}, {"to", to}};
    cps = guarded("/checkpoints/geometric", [&] {
      return geometric_checkpoints(base, static_cast<int>(from), static_cast<int>(to));
    });
  } else {
    const Json& v = root.at("checkpoints");
    if (!v.is_array() || v.empty()) {
      throw ConfigError("/checkpoints", "expected a non-empty array or {\"geometric\": ...}");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < 1) {
        throw ConfigError("/checkpoints/" + std::to_string(i), "expected a positive integer");
      }
      const auto c = static_cast<std::size_t>(v[i].get<std::int64_t>());
      if (!cps.empty() && c <= cps.back()) {
        throw ConfigError("/checkpoints/" + std::to_string(i), "checkpoints must increase");
      }
      cps.push_back(c);
    }
    out["checkpoints"] = cps;
  }
  tc.T_max = root.has("T_max") ? root.count("T_max", 1, 1) : cps.back();
  out["T_max"] = tc.T_max;
  std::erase_if(cps, [&](std::size_t c) { return c > tc.T_max; });
  if (cps.empty() || cps.back() != tc.T_max) cps.push_back(tc.T_max);
  tc.checkpoints = cps;

  tc.seeds = read_seeds(root);
  out["seeds"] = tc.seeds;
  const std::int64_t base_seed = root.integer("base_seed", 0);
  if (base_seed < 0) root.fail("base_seed", "must be >= 0");
  tc.base_seed = static_cast<std::uint64_t>(base_seed);
  out["base_seed"] = base_seed;
  tc.delta = root.number("delta", 0.05);
  if (!(tc.delta > 0.0 && tc.delta < 1.0)) root.fail("delta", "must lie in (0, 1)");
  out["delta"] = tc.delta;
  tc.workers = root.count("workers", 0, 0);
  out["workers"] = tc.workers;

  if (root.has("fit")) {
    Section f = root.object("fit");
    ex.fit.drop_first = f.boolean("drop_first", false);
    if (f.has("metrics")) {
      const Json& ms = f.at("metrics");
      if (!ms.is_array()) f.fail("metrics", "expected an array of metric names");
      ex.fit.metrics.clear();
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto m = ms[i].is_string() ? metric_from_string(ms[i].get<std::string>())
                                         : std::nullopt;
        if (!m) throw ConfigError(f.child("metrics") + "/" + std::to_string(i), "unknown metric");
        ex.fit.metrics.push_back(*m);
      }
    }
    f.finish();
  }
  tc.drop_first_checkpoint = ex.fit.drop_first;
  out["fit"]["drop_first"] = ex.fit.drop_first;
  for (Metric m : ex.fit.metrics) out["fit"]["metrics"].push_back(to_string(m));

  if (root.has("verify")) {
    Section v = root.object("verify");
    ex.verify.samples = v.count("samples", ex.verify.samples, 1);
    ex.verify.seed = static_cast<std::uint64_t>(v.count("seed", 0, 0));
    ex.verify.series_horizon = v.count("series_horizon", ex.verify.series_horizon, 32);
    v.finish();
  }
  out["verify"] = {{"samples", ex.verify.samples},
                   {"seed", ex.verify.seed},
                   {"series_horizon", ex.verify.series_horizon}};

  // Only checked for shape here; expand_sweep resolves it.
  if (root.has("sweep") && !root.at("sweep").is_object()) {
    root.fail("sweep", "expected an object of key -> value list");
  }
  root.finish();

  guarded("", [&] {
    tc.validate();
    return 0;
  });
  return ex;
}

std::vector<Json> expand_sweep(const Json& config) {
  if (!config.is_object() || !config.contains("sweep")) return {config};
  const Json& grid = config.at("sweep");
  if (!grid.is_object()) throw ConfigError("/sweep", "expected an object of key -> value list");
  Json base = config;
  base.erase("sweep");
  std::vector<std::pair<std::string, std::vector<Json>>> axes;
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    const std::string ptr = "/sweep/" + escape_token(it.key());
    if (!it.value().is_array() || it.value().empty()) {
      throw ConfigError(ptr, "expected a non-empty array of values");
    }
    axes.emplace_back(it.key(), std::vector<Json>(it.value().begin(), it.value().end()));
  }
  std::vector<Json> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    Json c = base;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      apply_override(c, axes[a].first + "=" + axes[a].second[idx[a]].dump());
    }
    out.push_back(std::move(c));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

}  // namespace okgd
