// epshmm/learning.hpp
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
// Expected transition traversals given an observation, and the EM
// re-estimation built on them. Epsilon cycles mean a transition can be
// crossed any number of times while a single symbol is read, so counts come
// from the same per-level fixpoint systems as the likelihood rather than
// from a forward-backward pass.

#ifndef EPSHMM_LEARNING_HPP_
#define EPSHMM_LEARNING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "epshmm/inference.hpp"
#include "epshmm/model.hpp"

namespace epshmm {

inline constexpr double kMonotonicityTolerance = 1e-9;

struct CountTable {
  // T_delta of the model the counts were taken under, in model order.
  std::vector<Transition> transitions;
  // E[X_t | Y = obs].
  std::vector<double> counts;
  Likelihood likelihood;
  // levels[j](s, i): E_s[X_{t_i} | suffix obs[j..n)] times P_s(suffix), scaled
  // exactly like likelihood.table.alpha[j].
  std::vector<Eigen::MatrixXd> levels;

  // 0 for transitions outside the table.
  double Count(const Transition &t) const;
  double Total() const;
};

// Throws ConditioningError when the observation has probability zero.
CountTable ExpectedCounts(const Model &model, const ObservationSequence &obs,
                          const LikelihoodOptions &options = {});

// sum_t log delta(t | theta) * count(t), with 0 * log 0 taken as 0. May be
// -infinity.
double QFunction(const Model &theta, const CountTable &counts);
double QFunction(const Model &theta, std::span<const Transition> transitions,
                 std::span<const double> counts);

struct EmStep {
  Model old_model;
  Model new_model;
  double old_loglik = 0.0;
  double new_loglik = 0.0;
  // States with no expected traversals; their distributions were kept.
  std::vector<StateIndex> frozen_states;
};

// One re-estimation with counts pooled over all sequences. Throws
// TrainingError naming a sequence of probability zero, and InternalError if
// the likelihood drops by more than kMonotonicityTolerance or the new model
// fails validation.
EmStep EmUpdate(const Model &model, std::span<const ObservationSequence> observations,
                const LikelihoodOptions &options = {});
EmStep EmUpdate(const Model &model, const ObservationSequence &obs,
                const LikelihoodOptions &options = {});

struct TrainOptions {
  std::size_t max_iters = 100;
  double epsilon_stop = 1e-7;
  LikelihoodOptions likelihood;
};

// Repeats EmUpdate until the total log-likelihood improves by less than
// epsilon_stop or max_iters steps ran.
std::vector<EmStep> Train(const Model &model,
                          std::span<const ObservationSequence> observations,
                          const TrainOptions &options = {});

}  // namespace epshmm

#endif  // EPSHMM_LEARNING_HPP_
