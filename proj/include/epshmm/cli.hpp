// epshmm/cli.hpp
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
//
// The four commands of the epshmm tool. Each writes results to `out`,
// diagnostics to `err`, and returns the process exit status.

#ifndef EPSHMM_CLI_HPP_
#define EPSHMM_CLI_HPP_

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "epshmm/fixpoint.hpp"

namespace epshmm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;  // some lines failed
inline constexpr int kExitInput = 2;    // unreadable or invalid input

struct ValidateOptions {
  std::string model;
};

struct ProbOptions {
  std::string model;
  std::string obs;
  SolveMethod method = SolveMethod::kDirect;
  double tol = kSolverTolerance;
};

enum class ExplainFormat { kPath, kJson };

struct ExplainOptions {
  std::string model;
  std::string obs;
  ExplainFormat format = ExplainFormat::kPath;
};

struct LearnOptions {
  std::string model;
  std::string obs;
  std::string out;
  std::size_t max_iters = 100;
  double stop = 1e-7;
  std::optional<std::string> trace;
};

int Validate(const ValidateOptions &options, std::ostream &out, std::ostream &err);
int Prob(const ProbOptions &options, std::ostream &out, std::ostream &err);
int Explain(const ExplainOptions &options, std::ostream &out, std::ostream &err);
int Learn(const LearnOptions &options, std::ostream &out, std::ostream &err);

}  // namespace epshmm::cli

#endif  // EPSHMM_CLI_HPP_
