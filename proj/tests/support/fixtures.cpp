// fixtures.cpp
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

#include "fixtures.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "epshmm/errors.hpp"

namespace epshmm::testing {

Model RoomModel() {
  ModelBuilder b;
  for (const char *s : {"s0", "B", "C", "K"}) b.AddState(s);
  for (const char *a : {"b", "c", "k"}) b.AddSymbol(a);
  b.SetStart("s0");
  b.AddTransition("s0", "b", "B", 0.4).AddTransition("s0", "eps", "B", 0.05);
  b.AddTransition("s0", "k", "K", 0.2).AddTransition("s0", "eps", "K", 0.05);
  b.AddTransition("s0", "c", "C", 0.2).AddTransition("s0", "eps", "C", 0.1);
  b.AddTransition("B", "c", "C", 0.7).AddTransition("B", "eps", "C", 0.3);
  b.AddTransition("C", "b", "B", 0.3).AddTransition("C", "eps", "B", 0.1);
  b.AddTransition("C", "k", "K", 0.5).AddTransition("C", "eps", "K", 0.1);
  b.AddTransition("K", "c", "C", 0.8).AddTransition("K", "eps", "C", 0.2);
  return b.Build();
}

Model SingleStateModel() {
  ModelBuilder b;
  b.AddState("s0").AddSymbol("a").AddSymbol("b").SetStart("s0");
  b.AddTransition("s0", "eps", "s0", 0.5);
  b.AddTransition("s0", "a", "s0", 0.25);
  b.AddTransition("s0", "b", "s0", 0.25);
  return b.Build();
}

Eigen::VectorXd RandomSimplex(std::size_t n, std::mt19937_64 &rng,
                              double concentration) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gamma(rng) + 1e-3;
  return v / v.sum();
}

namespace {

std::size_t Uniform(std::mt19937_64 &rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::optional<Model> TryRandomModel(std::mt19937_64 &rng,
                                    const RandomModelOptions &o) {
  std::bernoulli_distribution coin(o.density);
  std::bernoulli_distribution eps_coin(o.epsilon_density);
  std::bernoulli_distribution silent(o.silent_state_chance);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t states = Uniform(rng, 1, o.max_states);
  const std::size_t symbols = Uniform(rng, 1, o.max_symbols);

  ModelBuilder b;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < states; ++s) {
    names.push_back("s" + std::to_string(s));
    b.AddState(names.back());
  }
  std::vector<std::string> alphabet;
  for (std::size_t a = 0; a < symbols; ++a) {
    alphabet.push_back(std::string(1, static_cast<char>('a' + a)));
    b.AddSymbol(alphabet.back());
  }
  b.SetStart("s0");

  std::size_t epsilon_budget = o.max_epsilon_edges_total;
  for (std::size_t s = 0; s < states; ++s) {
    const bool quiet = s > 0 && silent(rng);
    std::vector<std::pair<std::string, std::string>> observable, epsilon;
    for (std::size_t t = 0; t < states; ++t) {
      if (!quiet)
        for (const auto &a : alphabet)
          if (coin(rng)) observable.emplace_back(a, names[t]);
      // Epsilon self-loops only on states that can also emit.
      if ((t != s || !quiet) && eps_coin(rng)) epsilon.emplace_back("eps", names[t]);
    }
    std::shuffle(epsilon.begin(), epsilon.end(), rng);
    epsilon.resize(std::min({epsilon.size(), quiet ? std::size_t{1} : o.max_epsilon_edges,
                             epsilon_budget}));
    epsilon_budget -= epsilon.size();
    std::shuffle(observable.begin(), observable.end(), rng);
    if (observable.size() + epsilon.size() > o.max_out_degree)
      observable.resize(o.max_out_degree - epsilon.size());
    if (!quiet && observable.empty())
      observable.emplace_back(alphabet[Uniform(rng, 0, symbols - 1)],
                              names[Uniform(rng, 0, states - 1)]);
    if (quiet && epsilon.empty()) return std::nullopt;

    const double eps_cap = epsilon.size() > 1 ? o.max_branching_epsilon_mass
                                              : o.max_epsilon_mass;
    const double eps_mass =
        quiet ? 1.0 : (epsilon.empty() ? 0.0 : unit(rng) * eps_cap);
    const Eigen::VectorXd wo =
        RandomSimplex(observable.size(), rng, o.concentration);
    const Eigen::VectorXd we = RandomSimplex(epsilon.size(), rng, o.concentration);
    for (std::size_t i = 0; i < observable.size(); ++i)
      b.AddTransition(names[s], observable[i].first, observable[i].second,
                      (1.0 - eps_mass) * wo(static_cast<Eigen::Index>(i)));
    for (std::size_t i = 0; i < epsilon.size(); ++i)
      b.AddTransition(names[s], "eps", epsilon[i].second,
                      eps_mass * we(static_cast<Eigen::Index>(i)));
  }
  try {
    return b.Build(Check::kFull);
  } catch (const ValidationError &) {
    return std::nullopt;
  }
}

}  // namespace

Model RandomModel(std::mt19937_64 &rng, const RandomModelOptions &options) {
  for (int attempt = 0; attempt < 10000; ++attempt)
    if (auto m = TryRandomModel(rng, options)) return std::move(*m);
  throw std::runtime_error("random model generator kept failing");
}

ObservationSequence SampleObservation(const Model &model, std::size_t n,
                                      std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SymbolIndex> out;
  StateIndex s = model.start();
  while (out.size() < n) {
    const auto arcs = model.arcs(s);
    double u = unit(rng), acc = 0.0;
    const Arc *pick = &arcs.back();
    for (const Arc &arc : arcs) {
      acc += arc.probability;
      if (u < acc) {
        pick = &arc;
        break;
      }
    }
    if (pick->label.is_observable()) out.push_back(pick->label.symbol());
    s = pick->target;
  }
  return ObservationSequence(std::move(out));
}

ObservationSequence RandomObservation(const Model &model, std::size_t n,
                                      std::mt19937_64 &rng) {
  std::vector<SymbolIndex> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(Uniform(rng, 0, model.num_symbols() - 1));
  return ObservationSequence(std::move(out));
}

}  // namespace epshmm::testing
