// model.cpp
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

#include "epshmm/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "epshmm/errors.hpp"
#include "format.hpp"

namespace epshmm {

EpsilonMatrix::EpsilonMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols())
    throw ValidationError({"epsilon matrix is not square"});
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (!(m_(i, j) >= 0.0))
        throw ValidationError({"epsilon matrix has a negative entry"});
      sum += m_(i, j);
    }
    if (sum > 1.0 + kRowSumSlack)
      throw ValidationError({"epsilon matrix row sum exceeds 1"});
  }
}

Model::Model(std::vector<std::string> states, std::vector<std::string> symbols,
             StateIndex start,
             std::vector<std::pair<Transition, double>> transitions)
    : state_names_(std::move(states)),
      symbol_names_(std::move(symbols)),
      start_(start) {
  std::erase_if(transitions, [](const auto &tp) { return tp.second == 0.0; });
  std::sort(transitions.begin(), transitions.end(),
            [](const auto &x, const auto &y) { return x.first < y.first; });

  const std::size_t n = state_names_.size();
  offsets_.assign(n + 1, 0);
  Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(n, n);
  symbol_matrices_.assign(symbol_names_.size(), Eigen::MatrixXd::Zero(n, n));
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const auto &[t, p] = transitions[i];
    transitions_.push_back(t);
    probabilities_.push_back(p);
    arcs_.push_back({t.label, t.target, p, i});
    ++offsets_[t.source + 1];
    const auto row = static_cast<Eigen::Index>(t.source);
    const auto col = static_cast<Eigen::Index>(t.target);
    if (t.label.is_epsilon())
      eps(row, col) = p;
    else
      symbol_matrices_[t.label.symbol()](row, col) = p;
  }
  for (std::size_t s = 0; s < n; ++s) offsets_[s + 1] += offsets_[s];
  epsilon_ = EpsilonMatrix(std::move(eps));
}

std::string Model::label_name(Label label) const {
  if (label.is_epsilon()) return std::string(kEpsilonToken);
  return symbol_name(label.symbol());
}

std::optional<StateIndex> Model::find_state(std::string_view name) const {
  for (std::size_t s = 0; s < state_names_.size(); ++s)
    if (state_names_[s] == name) return s;
  return std::nullopt;
}

std::optional<SymbolIndex> Model::find_symbol(std::string_view name) const {
  for (std::size_t a = 0; a < symbol_names_.size(); ++a)
    if (symbol_names_[a] == name) return a;
  return std::nullopt;
}

std::optional<std::size_t> Model::find_transition(const Transition &t) const {
  auto it = std::lower_bound(transitions_.begin(), transitions_.end(), t);
  if (it == transitions_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - transitions_.begin());
}

Model Model::Reweighted(std::span<const double> probabilities,
                        Check check) const {
  if (probabilities.size() != transitions_.size())
    throw ValidationError({"reweighting needs one probability per transition"});
  ModelBuilder builder;
  for (const auto &s : state_names_) builder.AddState(s);
  for (const auto &a : symbol_names_) builder.AddSymbol(a);
  builder.SetStart(state_names_[start_]);
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const Transition &t = transitions_[i];
    builder.AddTransition(state_names_[t.source], label_name(t.label),
                          state_names_[t.target], probabilities[i]);
  }
  return builder.Build(check);
}

ModelBuilder &ModelBuilder::AddState(std::string name) {
  states_.push_back(std::move(name));
  return *this;
}

ModelBuilder &ModelBuilder::AddSymbol(std::string name) {
  symbols_.push_back(std::move(name));
  return *this;
}

ModelBuilder &ModelBuilder::SetStart(std::string name) {
  start_ = std::move(name);
  return *this;
}

ModelBuilder &ModelBuilder::AddTransition(std::string from, std::string label,
                                          std::string to, double probability) {
  entries_.push_back({std::move(from), std::move(label), std::move(to),
                      probability});
  return *this;
}

std::vector<std::string> ModelBuilder::Diagnose() const {
  std::vector<std::string> issues;
  std::set<std::string> state_set, symbol_set;
  if (states_.empty()) issues.push_back("model has no states");
  for (const auto &s : states_) {
    if (s.empty()) issues.push_back("state names must be non-empty");
    if (!state_set.insert(s).second)
      issues.push_back("duplicate state '" + s + "'");
  }
  for (const auto &a : symbols_) {
    if (a.empty()) issues.push_back("symbol names must be non-empty");
    if (a == kEpsilonToken)
      issues.push_back("'" + std::string(kEpsilonToken) +
                       "' is reserved and cannot be an alphabet symbol");
    if (!symbol_set.insert(a).second)
      issues.push_back("duplicate symbol '" + a + "'");
  }
  if (!start_)
    issues.push_back("no start state");
  else if (!state_set.count(*start_))
    issues.push_back("start state '" + *start_ + "' is not a declared state");

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry &e = entries_[i];
    const std::string where = "transition " + std::to_string(i) + " (" +
                              e.from + ", " + e.label + ", " + e.to + ")";
    if (!state_set.count(e.from))
      issues.push_back(where + ": unknown source state");
    if (!state_set.count(e.to))
      issues.push_back(where + ": unknown target state");
    if (e.label != kEpsilonToken && !symbol_set.count(e.label))
      issues.push_back(where + ": unknown label");
    if (!std::isfinite(e.probability) || e.probability < 0.0 ||
        e.probability > 1.0)
      issues.push_back(where + ": probability " +
                       internal::FormatReal(e.probability) +
                       " is outside [0, 1]");
    if (!seen.insert({e.from, e.label, e.to}).second)
      issues.push_back(where + ": duplicate transition");
  }

  for (const auto &[state, sum] : StateSums()) {
    if (std::abs(sum - 1.0) > kDistributionTolerance)
      issues.push_back("state " + state + ": outgoing probabilities sum to " +
                       internal::FormatReal(sum) + ", expected 1");
  }
  return issues;
}

std::vector<std::pair<std::string, double>> ModelBuilder::StateSums() const {
  std::map<std::string, double> sums;
  for (const auto &e : entries_)
    if (std::isfinite(e.probability)) sums[e.from] += e.probability;
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> done;
  for (const auto &s : states_) {
    if (!done.insert(s).second) continue;
    out.emplace_back(s, sums.count(s) ? sums[s] : 0.0);
  }
  return out;
}

Model ModelBuilder::Build(Check check) const {
  auto issues = Diagnose();
  if (!issues.empty()) throw ValidationError(std::move(issues));

  auto index_of = [](const std::vector<std::string> &names,
                     const std::string &name) {
    return static_cast<std::size_t>(
        std::find(names.begin(), names.end(), name) - names.begin());
  };
  std::vector<std::pair<Transition, double>> transitions;
  transitions.reserve(entries_.size());
  for (const auto &e : entries_) {
    Label label = e.label == kEpsilonToken
                      ? Label::Epsilon()
                      : Label::Observable(index_of(symbols_, e.label));
    transitions.push_back(
        {{index_of(states_, e.from), label, index_of(states_, e.to)},
         e.probability});
  }
  Model model(states_, symbols_, index_of(states_, *start_),
              std::move(transitions));
  if (check == Check::kFull) {
    const auto report = ValidateReachability(model);
    if (!report.accepted()) {
      std::vector<std::string> unreachable;
      for (StateIndex s : report.offending)
        unreachable.push_back(
            "state " + model.state_name(s) +
            ": no positive-probability path carries an observable symbol "
            "(reachability condition)");
      throw ValidationError(std::move(unreachable));
    }
  }
  return model;
}

ReachabilityReport ValidateReachability(const Model &model) {
  const std::size_t n = model.num_states();
  std::vector<bool> good(n, false);
  for (StateIndex s = 0; s < n; ++s)
    for (const Arc &arc : model.arcs(s))
      if (arc.label.is_observable()) good[s] = true;

  ReachabilityReport report;
  for (bool changed = true; changed;) {
    changed = false;
    ++report.rounds;
    for (StateIndex s = 0; s < n; ++s) {
      if (good[s]) continue;
      for (const Arc &arc : model.arcs(s)) {
        if (arc.label.is_epsilon() && good[arc.target]) {
          good[s] = true;
          changed = true;
          break;
        }
      }
    }
  }
  for (StateIndex s = 0; s < n; ++s)
    if (!good[s]) report.offending.push_back(s);
  return report;
}

namespace {

void CheckTransitionDomain(const Model &model, const Transition &t) {
  std::vector<std::string> issues;
  if (t.source >= model.num_states())
    issues.push_back("unknown source state index " + std::to_string(t.source));
  if (t.target >= model.num_states())
    issues.push_back("unknown target state index " + std::to_string(t.target));
  if (t.label.is_observable() && t.label.symbol() >= model.num_symbols())
    issues.push_back("unknown symbol index " + std::to_string(t.label.symbol()));
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace

double TransitionProbability(const Model &model, const Transition &t) {
  CheckTransitionDomain(model, t);
  const auto index = model.find_transition(t);
  return index ? model.probabilities()[*index] : 0.0;
}

double TransitionProbability(const Model &model, std::string_view from,
                             std::string_view label, std::string_view to) {
  std::vector<std::string> issues;
  const auto source = model.find_state(from);
  const auto target = model.find_state(to);
  std::optional<Label> l;
  if (label == kEpsilonToken) {
    l = Label::Epsilon();
  } else if (auto a = model.find_symbol(label)) {
    l = Label::Observable(*a);
  }
  if (!source) issues.push_back("unknown state '" + std::string(from) + "'");
  if (!target) issues.push_back("unknown state '" + std::string(to) + "'");
  if (!l) issues.push_back("unknown symbol '" + std::string(label) + "'");
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return TransitionProbability(model, Transition{*source, *l, *target});
}

ObservationSequence ParseObservation(const Model &model,
                                     std::string_view text) {
  std::vector<SymbolIndex> symbols;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto a = model.find_symbol(token);
    if (!a)
      throw ValidationError({"symbol '" + token + "' is not in the alphabet"});
    symbols.push_back(*a);
  }
  return ObservationSequence(std::move(symbols));
}

std::string FormatObservation(const Model &model,
                              const ObservationSequence &obs) {
  std::string out;
  for (SymbolIndex a : obs) {
    if (!out.empty()) out += ' ';
    out += model.symbol_name(a);
  }
  return out;
}

std::string ToString(const Model &model, const Transition &t) {
  return "(" + model.state_name(t.source) + ", " + model.label_name(t.label) +
         ", " + model.state_name(t.target) + ")";
}

}  // namespace epshmm
