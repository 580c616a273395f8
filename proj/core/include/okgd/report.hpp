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

#ifndef OKGD_REPORT_HPP_
#define OKGD_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "okgd/config.hpp"
#include "okgd/distribution.hpp"
#include "okgd/experiment.hpp"
#include "okgd/verify.hpp"

namespace okgd {

// Shortest decimal text that parses back to the same double; "nan", "inf"
// and "-inf" for non-finite values.
std::string format_double(double v);

std::string trajectories_csv(const std::vector<TrajectoryRecord>& records);

Json summary_json(const Experiment& experiment, const RiskOracle& oracle,
                  const std::vector<TrajectoryRecord>& records);

Json report_json(const VerificationReport& report);

// Coefficients and centers of an expansion.
Json function_json(const RkhsFunction& f);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Reads (T, value) pairs from a CSV. Either two columns named T and value, or
// a trajectories file, in which case `metric` is aggregated across seeds by
// the q-quantile.
Curve read_curve_csv(const std::filesystem::path& path, Metric metric, double q);

}  // namespace okgd

#endif  // OKGD_REPORT_HPP_
