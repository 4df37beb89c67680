// epshmm/path.hpp
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

#ifndef EPSHMM_PATH_HPP_
#define EPSHMM_PATH_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "epshmm/model.hpp"

namespace epshmm {

// Alternating sequence s0 a1 s1 ... am sm. Always holds at least one state.
class PathSample {
 public:
  explicit PathSample(StateIndex start) : states_{start} {}

  // Appends "label target".
  void Append(Label label, StateIndex target) {
    labels_.push_back(label);
    states_.push_back(target);
  }

  // u followed by Tail(v). Throws std::invalid_argument unless v starts
  // where u ends.
  PathSample Concat(const PathSample &v) const;

  std::size_t length() const { return labels_.size(); }
  StateIndex start() const { return states_.front(); }
  const std::vector<StateIndex> &states() const { return states_; }
  const std::vector<Label> &labels() const { return labels_; }
  Transition step(std::size_t i) const {
    return {states_[i], labels_[i], states_[i + 1]};
  }

  // Random variables of the sample space.
  StateIndex Last() const { return states_.back(); }            // L
  ObservationSequence Observations() const;                      // Y
  std::size_t Traversals(const Transition &t) const;             // X_t
  std::size_t ObservableCount() const;

  // Member of the n-observation sample space: empty, or ending on an
  // observable label.
  bool EndsObservable() const {
    return labels_.empty() || labels_.back().is_observable();
  }

  friend bool operator==(const PathSample &, const PathSample &) = default;

 private:
  std::vector<StateIndex> states_;
  std::vector<Label> labels_;
};

// Product of the transition probabilities along the path, 1 for the bare
// start state. A step outside T_delta makes the product 0.
double PathProbability(const Model &model, const PathSample &path);

// "s0 b B eps C k K".
std::string FormatPath(const Model &model, const PathSample &path);

}  // namespace epshmm

#endif  // EPSHMM_PATH_HPP_
