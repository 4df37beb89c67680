// inference.cpp
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

#include "epshmm/inference.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "epshmm/errors.hpp"

namespace epshmm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Fills the table bottom-up. Returns false (unfinished) when unscaled mode
// meets a level whose largest entry is positive but below the underflow
// threshold.
bool FillBackward(const Model &model, const ObservationSequence &obs,
                  const LevelSolver &solver, bool scaled, bool allow_bail,
                  LikelihoodTable &table) {
  const std::size_t n = obs.size();
  const auto states = Idx(model.num_states());
  table = LikelihoodTable{};
  table.scaled = scaled;
  table.alpha.assign(n + 1, Eigen::VectorXd());
  table.log_scale.assign(n + 1, 0.0);
  if (scaled) table.scale.assign(n, 1.0);
  table.alpha[n] = Eigen::VectorXd::Ones(states);
  for (std::size_t j = n; j-- > 0;) {
    const Eigen::VectorXd rhs = model.symbol_matrix(obs[j]) * table.alpha[j + 1];
    Eigen::VectorXd level = solver.Solve(rhs).cwiseMax(0.0);
    if (scaled) {
      const double c = level.sum();
      table.scale[j] = c;
      if (c > 0.0) {
        level /= c;
        table.log_scale[j] = table.log_scale[j + 1] + std::log(c);
      } else {
        table.log_scale[j] = kNegInf;
      }
    } else if (allow_bail) {
      const double top = level.maxCoeff();
      if (top > 0.0 && top < kScalingUnderflowThreshold) return false;
    }
    table.alpha[j] = std::move(level);
  }
  return true;
}

}  // namespace

void CheckObservation(const Model &model, const ObservationSequence &obs) {
  for (std::size_t i = 0; i < obs.size(); ++i)
    if (obs[i] >= model.num_symbols())
      throw ValidationError({"observation position " + std::to_string(i) +
                             ": symbol index " + std::to_string(obs[i]) +
                             " is outside the alphabet"});
}

double LikelihoodTable::LogAlpha(std::size_t j, StateIndex s) const {
  const double a = alpha.at(j)(Idx(s));
  if (!(a > 0.0)) return kNegInf;
  return std::log(a) + log_scale.at(j);
}

Likelihood ObservationLikelihood(const Model &model,
                                 const ObservationSequence &obs,
                                 const LikelihoodOptions &options) {
  CheckObservation(model, obs);
  const LevelSolver solver(model.epsilon_matrix(), options.method, options.tol);
  Likelihood result;
  bool scaled = options.scaling == Scaling::kAlways ||
                (options.scaling == Scaling::kAutomatic &&
                 obs.size() > kScalingLengthThreshold);
  const bool allow_bail = options.scaling == Scaling::kAutomatic;
  if (!FillBackward(model, obs, solver, scaled, allow_bail, result.table)) {
    scaled = true;
    FillBackward(model, obs, solver, scaled, false, result.table);
  }
  if (result.table.scaled) {
    result.log_value = result.table.LogAlpha(0, model.start());
    result.value = std::exp(result.log_value);
  } else {
    result.value = result.table.alpha[0](Idx(model.start()));
    result.log_value = result.value > 0.0 ? std::log(result.value) : kNegInf;
  }
  return result;
}

SymbolMaxTable SingleSymbolMax(const Model &model, const EpsilonClosure &closure,
                               SymbolIndex a) {
  if (a >= model.num_symbols())
    throw ValidationError({"symbol index " + std::to_string(a) +
                           " is outside the alphabet"});
  const std::size_t n = model.num_states();
  const Eigen::MatrixXd &step = model.symbol_matrix(a);
  SymbolMaxTable table;
  table.symbol = a;
  table.value = Eigen::MatrixXd::Zero(Idx(n), Idx(n));
  table.via.assign(n, std::vector<std::optional<StateIndex>>(n));
  for (StateIndex from = 0; from < n; ++from) {
    for (StateIndex to = 0; to < n; ++to) {
      // The direct edge (empty epsilon prefix) is tried first, so it wins
      // ties; then prefixes ending in ascending state order.
      double best = step(Idx(from), Idx(to));
      std::optional<StateIndex> via;
      if (best > 0.0) via = from;
      for (StateIndex x = 0; x < n; ++x) {
        if (x == from) continue;
        const double candidate =
            closure.best(Idx(from), Idx(x)) * step(Idx(x), Idx(to));
        if (candidate > best) {
          best = candidate;
          via = x;
        }
      }
      table.value(Idx(from), Idx(to)) = best;
      table.via[from][to] = via;
    }
  }
  return table;
}

SymbolMaxTable SingleSymbolMax(const Model &model, SymbolIndex a) {
  return SingleSymbolMax(model, SolveMaxLevel(model), a);
}

PathSample SingleSymbolPath(const Model &model, const EpsilonClosure &closure,
                            const SymbolMaxTable &table, StateIndex from,
                            StateIndex to) {
  if (from >= model.num_states() || to >= model.num_states())
    throw ValidationError({"state index outside the model"});
  const auto &via = table.via[from][to];
  if (!via || !(table.value(Idx(from), Idx(to)) > 0.0))
    throw NoExplanationError("no path from " + model.state_name(from) +
                             " to " + model.state_name(to) + " emitting '" +
                             model.symbol_name(table.symbol) + "'");
  PathSample path = closure.Path(from, *via);
  path.Append(Label::Observable(table.symbol), to);

  // Intermediate states (all but the final one) must be pairwise distinct.
  std::set<StateIndex> seen;
  const auto &states = path.states();
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    if (!seen.insert(states[i]).second)
      throw InternalError("single-symbol path repeats state " +
                          model.state_name(states[i]));
  return path;
}

PathSample SingleSymbolPath(const Model &model, SymbolIndex a, StateIndex from,
                            StateIndex to) {
  const EpsilonClosure closure = SolveMaxLevel(model);
  return SingleSymbolPath(model, closure, SingleSymbolMax(model, closure, a),
                          from, to);
}

ViterbiTable ComputeViterbi(const Model &model,
                            const std::vector<SymbolMaxTable> &tables,
                            const ObservationSequence &obs) {
  CheckObservation(model, obs);
  const std::size_t n = model.num_states();
  std::map<SymbolIndex, const SymbolMaxTable *> by_symbol;
  for (const auto &t : tables) by_symbol[t.symbol] = &t;

  ViterbiTable v;
  v.log_v.assign(obs.size() + 1, Eigen::VectorXd::Constant(Idx(n), kNegInf));
  v.log_step.assign(obs.size() + 1, Eigen::VectorXd::Constant(Idx(n), kNegInf));
  v.back.assign(obs.size() + 1, std::vector<std::optional<StateIndex>>(n));
  v.log_v[0](Idx(model.start())) = 0.0;
  for (std::size_t j = 1; j <= obs.size(); ++j) {
    const auto it = by_symbol.find(obs[j - 1]);
    if (it == by_symbol.end())
      throw std::invalid_argument("missing single-symbol table");
    const Eigen::MatrixXd &e = it->second->value;
    for (StateIndex s = 0; s < n; ++s) {
      double best = kNegInf;
      for (StateIndex prev = 0; prev < n; ++prev) {
        const double from = v.log_v[j - 1](Idx(prev));
        const double step = e(Idx(prev), Idx(s));
        if (from == kNegInf || !(step > 0.0)) continue;
        const double candidate = from + std::log(step);
        if (candidate > best) {
          best = candidate;
          v.back[j][s] = prev;
          v.log_step[j](Idx(s)) = std::log(step);
        }
      }
      v.log_v[j](Idx(s)) = best;
    }
  }
  return v;
}

ViterbiTable ComputeViterbi(const Model &model, const ObservationSequence &obs) {
  CheckObservation(model, obs);
  const EpsilonClosure closure = SolveMaxLevel(model);
  std::vector<SymbolMaxTable> tables;
  for (SymbolIndex a : std::set<SymbolIndex>(obs.begin(), obs.end()))
    tables.push_back(SingleSymbolMax(model, closure, a));
  return ComputeViterbi(model, tables, obs);
}

Explanation BestExplanation(const Model &model, const ObservationSequence &obs,
                            const LikelihoodOptions &options) {
  CheckObservation(model, obs);
  if (obs.empty()) {
    return {PathSample(model.start()), 1.0, 0.0, 1.0, 0.0};
  }
  const EpsilonClosure closure = SolveMaxLevel(model);
  std::vector<SymbolMaxTable> tables;
  std::map<SymbolIndex, std::size_t> slot;
  for (SymbolIndex a : std::set<SymbolIndex>(obs.begin(), obs.end())) {
    slot[a] = tables.size();
    tables.push_back(SingleSymbolMax(model, closure, a));
  }
  const ViterbiTable v = ComputeViterbi(model, tables, obs);

  const std::size_t n = obs.size();
  StateIndex last = 0;
  double best = kNegInf;
  for (StateIndex s = 0; s < model.num_states(); ++s) {
    if (v.log_v[n](Idx(s)) > best) {
      best = v.log_v[n](Idx(s));
      last = s;
    }
  }
  if (best == kNegInf)
    throw NoExplanationError("observation '" + FormatObservation(model, obs) +
                             "' has probability zero");

  std::vector<PathSample> segments;
  StateIndex s = last;
  for (std::size_t j = n; j >= 1; --j) {
    const StateIndex prev = *v.back[j][s];
    segments.push_back(SingleSymbolPath(model, closure,
                                        tables[slot.at(obs[j - 1])], prev, s));
    s = prev;
  }
  PathSample path(model.start());
  for (auto it = segments.rbegin(); it != segments.rend(); ++it)
    path = path.Concat(*it);

  const Likelihood likelihood = ObservationLikelihood(model, obs, options);
  Explanation out{std::move(path), std::exp(best), best, 0.0, 0.0};
  out.log_conditional = best - likelihood.log_value;
  out.conditional = std::exp(out.log_conditional);
  return out;
}

}  // namespace epshmm
