// epshmm/inference.hpp
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

#ifndef EPSHMM_INFERENCE_HPP_
#define EPSHMM_INFERENCE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "epshmm/fixpoint.hpp"
#include "epshmm/model.hpp"
#include "epshmm/path.hpp"

namespace epshmm {

enum class Scaling {
  kAutomatic,  // scale when the sequence is long or a level underflows
  kAlways,
  kNever,
};

inline constexpr std::size_t kScalingLengthThreshold = 64;
inline constexpr double kScalingUnderflowThreshold = 1e-300;

struct LikelihoodOptions {
  SolveMethod method = SolveMethod::kDirect;
  double tol = kSolverTolerance;
  Scaling scaling = Scaling::kAutomatic;
};

// Backward table over suffixes. alpha[j](s) is P_s(Y = obs[j..n)), divided by
// exp(log_scale[j]) when scaled; alpha[n] is all ones. In scaled mode each
// level j < n was normalized to sum 1 by its factor scale[j], and
// log_scale[j] = sum_{i >= j} log scale[i].
struct LikelihoodTable {
  std::vector<Eigen::VectorXd> alpha;
  std::vector<double> scale;
  std::vector<double> log_scale;
  bool scaled = false;

  std::size_t levels() const { return alpha.size(); }
  // log P_s(Y = obs[j..n)), undoing the scaling.
  double LogAlpha(std::size_t j, StateIndex s) const;
};

struct Likelihood {
  double value = 0.0;  // underflows to 0 for very long observations
  double log_value = 0.0;
  LikelihoodTable table;
};

Likelihood ObservationLikelihood(const Model &model,
                                 const ObservationSequence &obs,
                                 const LikelihoodOptions &options = {});

// E^a(from, to): best probability of a path from -> to that emits exactly
// one symbol, a, on its last step. via[from][to] is the state that takes the
// a-step (from itself for the direct edge).
struct SymbolMaxTable {
  SymbolIndex symbol = 0;
  Eigen::MatrixXd value;
  std::vector<std::vector<std::optional<StateIndex>>> via;
};

SymbolMaxTable SingleSymbolMax(const Model &model, const EpsilonClosure &closure,
                               SymbolIndex a);
SymbolMaxTable SingleSymbolMax(const Model &model, SymbolIndex a);

// The path realizing E^a(from, to). Throws NoExplanationError when
// E^a(from, to) = 0, InternalError if the path repeats an intermediate
// state.
PathSample SingleSymbolPath(const Model &model, const EpsilonClosure &closure,
                            const SymbolMaxTable &table, StateIndex from,
                            StateIndex to);
PathSample SingleSymbolPath(const Model &model, SymbolIndex a, StateIndex from,
                            StateIndex to);

// Log-space scores. log_v[j](s) is the log of the best joint probability of
// a path explaining obs[0..j) and ending in s; back[j][s] is the level j-1
// state it came from and log_step[j](s) the log E^{a_j} factor taken.
struct ViterbiTable {
  std::vector<Eigen::VectorXd> log_v;
  std::vector<std::vector<std::optional<StateIndex>>> back;
  std::vector<Eigen::VectorXd> log_step;
};

ViterbiTable ComputeViterbi(const Model &model,
                            const std::vector<SymbolMaxTable> &tables,
                            const ObservationSequence &obs);
ViterbiTable ComputeViterbi(const Model &model, const ObservationSequence &obs);

struct Explanation {
  PathSample path;
  double probability = 0.0;      // P(Z = path, Y = obs)
  double log_probability = 0.0;
  double conditional = 0.0;      // P(Z = path | Y = obs)
  double log_conditional = 0.0;
};

// Most probable path with epsilon steps explicit. Throws NoExplanationError
// when the observation has probability zero.
Explanation BestExplanation(const Model &model, const ObservationSequence &obs,
                            const LikelihoodOptions &options = {});

// Throws ValidationError if a symbol is outside the model's alphabet.
void CheckObservation(const Model &model, const ObservationSequence &obs);

}  // namespace epshmm

#endif  // EPSHMM_INFERENCE_HPP_
