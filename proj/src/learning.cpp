// learning.cpp
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

#include "epshmm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "epshmm/errors.hpp"
#include "format.hpp"

namespace epshmm {
namespace {

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

double CountTable::Count(const Transition &t) const {
  auto it = std::lower_bound(transitions.begin(), transitions.end(), t);
  if (it == transitions.end() || *it != t) return 0.0;
  return counts[static_cast<std::size_t>(it - transitions.begin())];
}

double CountTable::Total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

CountTable ExpectedCounts(const Model &model, const ObservationSequence &obs,
                          const LikelihoodOptions &options) {
  CountTable table;
  table.likelihood = ObservationLikelihood(model, obs, options);
  const LikelihoodTable &alpha = table.likelihood.table;
  if (table.likelihood.log_value == -std::numeric_limits<double>::infinity())
    throw ConditioningError("cannot condition on observation '" +
                            FormatObservation(model, obs) +
                            "': it has probability zero");

  const auto transitions = model.transitions();
  const auto probabilities = model.probabilities();
  table.transitions.assign(transitions.begin(), transitions.end());
  const std::size_t n = obs.size();
  const auto states = Idx(model.num_states());
  const auto columns = Idx(transitions.size());

  // One factorization of (I - A_eps) serves every level and every
  // transition column.
  const LevelSolver solver(model.epsilon_matrix(), options.method, options.tol);
  table.levels.assign(n + 1, Eigen::MatrixXd::Zero(states, columns));
  for (std::size_t j = n; j-- > 0;) {
    const double scale = alpha.scaled ? alpha.scale[j] : 1.0;
    Eigen::MatrixXd rhs = model.symbol_matrix(obs[j]) * table.levels[j + 1];
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      const Transition &t = transitions[i];
      const auto src = Idx(t.source);
      const auto dst = Idx(t.target);
      if (t.label.is_epsilon()) {
        rhs(src, Idx(i)) += probabilities[i] * alpha.alpha[j](dst) * scale;
      } else if (t.label.symbol() == obs[j]) {
        rhs(src, Idx(i)) += probabilities[i] * alpha.alpha[j + 1](dst);
      }
    }
    table.levels[j] = solver.Solve(rhs).cwiseMax(0.0) / scale;
  }

  const auto start = Idx(model.start());
  const double denominator = alpha.alpha[0](start);
  table.counts.resize(transitions.size());
  for (std::size_t i = 0; i < transitions.size(); ++i)
    table.counts[i] = table.levels[0](start, Idx(i)) / denominator;
  return table;
}

double QFunction(const Model &theta, std::span<const Transition> transitions,
                 std::span<const double> counts) {
  double q = 0.0;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    if (counts[i] == 0.0) continue;
    const double p = TransitionProbability(theta, transitions[i]);
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    q += std::log(p) * counts[i];
  }
  return q;
}

double QFunction(const Model &theta, const CountTable &counts) {
  return QFunction(theta, counts.transitions, counts.counts);
}

EmStep EmUpdate(const Model &model,
                std::span<const ObservationSequence> observations,
                const LikelihoodOptions &options) {
  std::vector<double> pooled(model.num_transitions(), 0.0);
  double old_loglik = 0.0;
  for (std::size_t k = 0; k < observations.size(); ++k) {
    CountTable counts;
    try {
      counts = ExpectedCounts(model, observations[k], options);
    } catch (const ConditioningError &e) {
      throw TrainingError("sequence " + std::to_string(k) + ": " + e.what(), k);
    }
    for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] += counts.counts[i];
    old_loglik += counts.likelihood.log_value;
  }

  std::vector<StateIndex> frozen;
  std::vector<double> updated(model.probabilities().begin(),
                              model.probabilities().end());
  for (StateIndex s = 0; s < model.num_states(); ++s) {
    const auto [begin, end] = model.transitions_of(s);
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) total += pooled[i];
    if (!(total > 0.0)) {
      frozen.push_back(s);
      continue;
    }
    for (std::size_t i = begin; i < end; ++i) updated[i] = pooled[i] / total;
  }

  std::optional<Model> next;
  try {
    next = model.Reweighted(updated, Check::kFull);
  } catch (const ValidationError &e) {
    throw InternalError(std::string("EM update produced an invalid model: ") +
                        e.what());
  }

  double new_loglik = 0.0;
  for (const auto &obs : observations)
    new_loglik += ObservationLikelihood(*next, obs, options).log_value;
  if (new_loglik < old_loglik - kMonotonicityTolerance)
    throw InternalError("EM update decreased the log-likelihood from " +
                        internal::FormatReal(old_loglik) + " to " +
                        internal::FormatReal(new_loglik));

  return EmStep{model, std::move(*next), old_loglik, new_loglik,
                std::move(frozen)};
}

EmStep EmUpdate(const Model &model, const ObservationSequence &obs,
                const LikelihoodOptions &options) {
  return EmUpdate(model, std::span<const ObservationSequence>(&obs, 1), options);
}

std::vector<EmStep> Train(const Model &model,
                          std::span<const ObservationSequence> observations,
                          const TrainOptions &options) {
  std::vector<EmStep> trace;
  std::optional<Model> current = model;
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    trace.push_back(EmUpdate(*current, observations, options.likelihood));
    const EmStep &step = trace.back();
    if (step.new_loglik - step.old_loglik < options.epsilon_stop) break;
    current = step.new_model;
  }
  return trace;
}

}  // namespace epshmm
