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

#ifndef OKGD_CONFIG_HPP_
#define OKGD_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "okgd/experiment.hpp"

namespace okgd {

using Json = nlohmann::json;

struct FitOptions {
  bool drop_first = false;
  std::vector<Metric> metrics = {Metric::kExcessLast, Metric::kExcessUniform,
                                 Metric::kExcessWeighted, Metric::kDistSq,
                                 Metric::kMaxDistSq};
};

struct VerifyOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::size_t series_horizon = std::size_t{1} << 20;
};

// A fully resolved experiment. `normalized` is the input document with every
// default written out; it is what summary.json echoes.
struct Experiment {
  TrialConfig trial;
  FitOptions fit;
  VerifyOptions verify;
  Json normalized;
};

// Throws ConfigError with an empty path when the file is unreadable or not
// JSON.
Json load_config_file(const std::string& path);

// "a.b.c=value": value is parsed as JSON when possible and taken as a string
// otherwise. Intermediate objects are created. The key is validated when the
// document is built, like any other key.
void apply_override(Json& config, const std::string& assignment);

// Validates every key (unknown keys are errors) and resolves defaults and
// relative step sizes. Errors carry the JSON pointer of the offending node.
Experiment build_experiment(const Json& config);

// "a..b" is the half-open range [a, b); a single integer is one seed.
std::vector<std::int64_t> parse_seed_range(const std::string& text);

// One config per point of the cartesian product declared under "sweep"
// (a map from override key to a list of values), with "sweep" removed and the
// overrides applied in key order. Without a sweep block: {config}.
std::vector<Json> expand_sweep(const Json& config);

}  // namespace okgd

#endif  // OKGD_CONFIG_HPP_
