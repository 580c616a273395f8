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

#ifndef OKGD_ERROR_HPP_
#define OKGD_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace okgd {

// Bad argument or malformed data handed to an operation.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on an object that is not in a usable state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid experiment configuration. `path` names the offending JSON path
// when one is known (e.g. "/schedule/theta").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)),
        message_(message) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

// Numerical solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double residual)
      : std::runtime_error(message), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A trajectory produced a non-finite quantity at step `step`.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t step, double value)
      : std::runtime_error("trajectory diverged at step " +
                           std::to_string(step) + " (value " +
                           std::to_string(value) + ")"),
        step_(step),
        value_(value) {}

  std::size_t step() const noexcept { return step_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t step_;
  double value_;
};

}  // namespace okgd

#endif  // OKGD_ERROR_HPP_
