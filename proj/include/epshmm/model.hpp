// epshmm/model.hpp
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
// Hidden Markov models whose observations sit on transitions and whose
// transitions may be unobservable (epsilon), including epsilon cycles.
// Names are kept for I/O only; everything else is index-addressed.

#ifndef EPSHMM_MODEL_HPP_
#define EPSHMM_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "epshmm/epsilon_matrix.hpp"

namespace epshmm {

using StateIndex = std::size_t;
using SymbolIndex = std::size_t;

// Reserved spelling of the epsilon label in every textual format.
inline constexpr std::string_view kEpsilonToken = "eps";

// Outgoing distributions must sum to 1 within this absolute tolerance.
inline constexpr double kDistributionTolerance = 1e-9;

// Either an observable alphabet symbol or epsilon. Orders observable
// symbols by index, then epsilon.
class Label {
 public:
  static constexpr Label Epsilon() { return Label(kEpsilonCode); }
  static constexpr Label Observable(SymbolIndex symbol) { return Label(symbol); }

  constexpr bool is_epsilon() const { return code_ == kEpsilonCode; }
  constexpr bool is_observable() const { return code_ != kEpsilonCode; }
  // Precondition: is_observable().
  constexpr SymbolIndex symbol() const { return code_; }

  friend constexpr auto operator<=>(Label, Label) = default;

 private:
  static constexpr std::size_t kEpsilonCode =
      std::numeric_limits<std::size_t>::max();
  constexpr explicit Label(std::size_t code) : code_(code) {}
  std::size_t code_;
};

struct Transition {
  StateIndex source = 0;
  Label label = Label::Epsilon();
  StateIndex target = 0;

  friend constexpr auto operator<=>(const Transition &,
                                    const Transition &) = default;
};

// One positive-probability outgoing edge. `transition` indexes
// Model::transitions().
struct Arc {
  Label label;
  StateIndex target;
  double probability;
  std::size_t transition;
};

class ObservationSequence {
 public:
  ObservationSequence() = default;
  explicit ObservationSequence(std::vector<SymbolIndex> symbols)
      : symbols_(std::move(symbols)) {}

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  SymbolIndex operator[](std::size_t i) const { return symbols_[i]; }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }
  const std::vector<SymbolIndex> &symbols() const { return symbols_; }

  friend bool operator==(const ObservationSequence &,
                         const ObservationSequence &) = default;

 private:
  std::vector<SymbolIndex> symbols_;
};

enum class Check {
  kStructure,  // distributions, names and support only
  kFull,       // additionally every state must reach an observable symbol
};

class ModelBuilder;

// Immutable after construction; construct through ModelBuilder or
// Model::Reweighted.
class Model {
 public:
  std::size_t num_states() const { return state_names_.size(); }
  std::size_t num_symbols() const { return symbol_names_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }
  StateIndex start() const { return start_; }

  const std::string &state_name(StateIndex s) const { return state_names_.at(s); }
  const std::string &symbol_name(SymbolIndex a) const { return symbol_names_.at(a); }
  std::string label_name(Label label) const;
  const std::vector<std::string> &state_names() const { return state_names_; }
  const std::vector<std::string> &symbol_names() const { return symbol_names_; }

  std::optional<StateIndex> find_state(std::string_view name) const;
  std::optional<SymbolIndex> find_symbol(std::string_view name) const;

  // T_delta, sorted by (source, label, target). The outgoing transitions of
  // state s occupy the contiguous index range transitions_of(s).
  std::span<const Transition> transitions() const { return transitions_; }
  std::span<const double> probabilities() const { return probabilities_; }
  std::pair<std::size_t, std::size_t> transitions_of(StateIndex s) const {
    return {offsets_.at(s), offsets_.at(s + 1)};
  }
  std::span<const Arc> arcs(StateIndex s) const {
    return std::span<const Arc>(arcs_).subspan(
        offsets_.at(s), offsets_.at(s + 1) - offsets_.at(s));
  }
  std::optional<std::size_t> find_transition(const Transition &t) const;

  const EpsilonMatrix &epsilon_matrix() const { return epsilon_; }
  // Entry (s, s') = delta(s)(a, s').
  const Eigen::MatrixXd &symbol_matrix(SymbolIndex a) const {
    return symbol_matrices_.at(a);
  }

  // Same states, alphabet, start and candidate support, new probabilities
  // (indexed like transitions()). Zero entries leave the support.
  Model Reweighted(std::span<const double> probabilities,
                   Check check = Check::kFull) const;

 private:
  friend class ModelBuilder;
  Model(std::vector<std::string> states, std::vector<std::string> symbols,
        StateIndex start,
        std::vector<std::pair<Transition, double>> transitions);

  std::vector<std::string> state_names_;
  std::vector<std::string> symbol_names_;
  StateIndex start_ = 0;
  std::vector<Transition> transitions_;
  std::vector<double> probabilities_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> offsets_;
  EpsilonMatrix epsilon_;
  std::vector<Eigen::MatrixXd> symbol_matrices_;
};

// Name-based model construction. Labels are alphabet names or "eps".
class ModelBuilder {
 public:
  ModelBuilder &AddState(std::string name);
  ModelBuilder &AddSymbol(std::string name);
  ModelBuilder &SetStart(std::string name);
  ModelBuilder &AddTransition(std::string from, std::string label,
                               std::string to, double probability);

  // Every structural issue, in a stable order; empty means the structure
  // is sound. Reachability is not part of this.
  std::vector<std::string> Diagnose() const;

  // Sum of outgoing probabilities for each declared state, in declaration
  // order. Transitions naming unknown states are ignored.
  std::vector<std::pair<std::string, double>> StateSums() const;

  // Throws ValidationError listing every issue.
  Model Build(Check check = Check::kFull) const;

 private:
  struct Entry {
    std::string from, label, to;
    double probability;
  };
  std::vector<std::string> states_;
  std::vector<std::string> symbols_;
  std::optional<std::string> start_;
  std::vector<Entry> entries_;
};

struct ReachabilityReport {
  // States from which no positive-probability path carries an observable
  // label, ascending.
  std::vector<StateIndex> offending;
  // Backward propagation rounds until stable (<= num_states).
  std::size_t rounds = 0;

  bool accepted() const { return offending.empty(); }
};

ReachabilityReport ValidateReachability(const Model &model);

// delta(t.source)(t.label, t.target); 0 for triples outside T_delta. Throws
// ValidationError for out-of-range states or symbols.
double TransitionProbability(const Model &model, const Transition &t);
double TransitionProbability(const Model &model, std::string_view from,
                             std::string_view label, std::string_view to);

// Whitespace-separated symbol names. Throws ValidationError naming the
// first unknown token.
ObservationSequence ParseObservation(const Model &model, std::string_view text);
std::string FormatObservation(const Model &model, const ObservationSequence &obs);

std::string ToString(const Model &model, const Transition &t);

}  // namespace epshmm

#endif  // EPSHMM_MODEL_HPP_
