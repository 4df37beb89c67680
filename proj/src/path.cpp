// path.cpp
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

#include "epshmm/path.hpp"

#include <stdexcept>

#include "epshmm/errors.hpp"

namespace epshmm {

PathSample PathSample::Concat(const PathSample &v) const {
  if (v.start() != Last())
    throw std::invalid_argument("path concatenation needs a shared state");
  PathSample out = *this;
  for (std::size_t i = 0; i < v.length(); ++i)
    out.Append(v.labels_[i], v.states_[i + 1]);
  return out;
}

ObservationSequence PathSample::Observations() const {
  std::vector<SymbolIndex> symbols;
  for (Label l : labels_)
    if (l.is_observable()) symbols.push_back(l.symbol());
  return ObservationSequence(std::move(symbols));
}

std::size_t PathSample::Traversals(const Transition &t) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (step(i) == t) ++count;
  return count;
}

std::size_t PathSample::ObservableCount() const {
  std::size_t count = 0;
  for (Label l : labels_)
    if (l.is_observable()) ++count;
  return count;
}

double PathProbability(const Model &model, const PathSample &path) {
  for (StateIndex s : path.states())
    if (s >= model.num_states())
      throw ValidationError({"path visits unknown state index " +
                             std::to_string(s)});
  double p = 1.0;
  for (std::size_t i = 0; i < path.length(); ++i) {
    const Transition t = path.step(i);
    if (t.label.is_observable() && t.label.symbol() >= model.num_symbols())
      throw ValidationError({"path uses unknown symbol index " +
                             std::to_string(t.label.symbol())});
    const auto index = model.find_transition(t);
    if (!index) return 0.0;
    p *= model.probabilities()[*index];
  }
  return p;
}

std::string FormatPath(const Model &model, const PathSample &path) {
  std::string out = model.state_name(path.start());
  for (std::size_t i = 0; i < path.length(); ++i) {
    out += ' ';
    out += model.label_name(path.labels()[i]);
    out += ' ';
    out += model.state_name(path.states()[i + 1]);
  }
  return out;
}

}  // namespace epshmm
