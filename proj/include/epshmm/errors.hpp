// epshmm/errors.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPSHMM_ERRORS_HPP_
#define EPSHMM_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epshmm {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model or input fails a structural constraint. Carries every issue found,
// not just the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(Join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string> &issues() const { return issues_; }

 private:
  static std::string Join(const std::vector<std::string> &issues) {
    std::string out;
    for (const auto &issue : issues) {
      if (!out.empty()) out += "; ";
      out += issue;
    }
    return out.empty() ? std::string("validation failed") : out;
  }

  std::vector<std::string> issues_;
};

// The epsilon system is not contractive (I - A_eps singular or no
// certificate). An accepted model never produces this.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

// Kleene iteration hit its contraction-derived cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string &what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// No positive-probability path explains the observation.
class NoExplanationError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an observation of probability zero.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed its path budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// An invariant that the theory guarantees did not hold. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

// A training sequence lost all probability mass.
class TrainingError : public Error {
 public:
  TrainingError(const std::string &what, std::size_t sequence)
      : Error(what), sequence_(sequence) {}
  std::size_t sequence() const { return sequence_; }

 private:
  std::size_t sequence_;
};

}  // namespace epshmm

#endif  // EPSHMM_ERRORS_HPP_
