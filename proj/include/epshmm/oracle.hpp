// epshmm/oracle.hpp
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
// Ground truth by brute force: depth-first enumeration of every path with
// n observable steps, each run of consecutive epsilon steps capped at L.
// The cap is chosen from the sup-norms a_r = ||A_eps^r||, and prefixes of
// negligible probability are cut off, so that the mass of everything left out
// is provably small. Results are certified brackets rather than point
// estimates. Test-only; nothing here calls the fixpoint solvers.

#ifndef EPSHMM_ORACLE_HPP_
#define EPSHMM_ORACLE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "epshmm/model.hpp"
#include "epshmm/path.hpp"

namespace epshmm::oracle {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;

  // lo - slack <= x <= hi + slack. `slack` absorbs floating-point rounding.
  bool Contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
};

struct EnumerationOptions {
  double tail_target = 1e-9;
  // Limit on visited prefixes, enumerated paths included.
  std::size_t path_budget = 10'000'000;
  bool keep_paths = false;
};

struct EnumeratedPath {
  PathSample path;
  double probability;
};

struct EnumerationResult {
  std::size_t observations = 0;     // n
  std::size_t epsilon_run_cap = 0;  // L
  std::size_t path_count = 0;
  std::vector<EnumeratedPath> paths;  // only with keep_paths

  double mass_lower = 0.0;
  // Upper bound on the total probability of paths that were not enumerated.
  double tail_bound = 0.0;
  // Upper bound on sum over non-enumerated paths z of |z| * P(z), where |z|
  // counts transitions. Bounds every single X_t contribution too.
  double traversal_tail_bound = 0.0;
  // Upper bound on the probability of any single non-enumerated path.
  double max_skipped_probability = 0.0;

  // T_delta order of the model; traversal_mass[i] = sum X_{t_i}(z) P(z) over
  // enumerated z.
  std::vector<Transition> transitions;
  std::vector<double> traversal_mass;

  std::optional<EnumeratedPath> best;

  Bracket MassBracket() const { return {mass_lower, mass_lower + tail_bound}; }
};

// Paths with Y = obs. Throws BudgetExceededError past the path budget and
// InvalidModelError if no cap reaches the tail target.
EnumerationResult EnumeratePaths(const Model &model, const ObservationSequence &obs,
                                 const EnumerationOptions &options = {});

// All of the n-observation sample space, regardless of Y.
EnumerationResult EnumerateSampleSpace(const Model &model, std::size_t n,
                                       const EnumerationOptions &options = {});

Bracket OracleLikelihood(const EnumerationResult &result);

enum class Verdict { kExact, kInconclusive };

struct BestPathOracle {
  Verdict status = Verdict::kInconclusive;
  std::optional<EnumeratedPath> path;
  // Always contains the true maximum path probability.
  Bracket probability;
};

// Exact when the best enumerated path beats every path left out.
BestPathOracle OracleBestPath(const EnumerationResult &result);

// Bracket on E[X_t ; Y = obs] = E[X_t | Y = obs] * P(Y = obs).
Bracket OracleJointCount(const EnumerationResult &result, const Transition &t);
// Bracket on E[X_t | Y = obs].
Bracket OracleConditionalCount(const EnumerationResult &result,
                               const Transition &t);
// Bracket on E[number of transitions | Y = obs].
Bracket OracleExpectedLength(const EnumerationResult &result);

}  // namespace epshmm::oracle

#endif  // EPSHMM_ORACLE_HPP_
