// test_learning.cpp
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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "epshmm/errors.hpp"
#include "epshmm/learning.hpp"
#include "epshmm/oracle.hpp"
#include "support/fixtures.hpp"

using namespace epshmm;
using epshmm::testing::RoomModel;
using epshmm::testing::SingleStateModel;

namespace {

Transition T(const Model &m, const char *from, const char *label, const char *to) {
  const std::string l = label;
  return {*m.find_state(from),
          l == "eps" ? Label::Epsilon() : Label::Observable(*m.find_symbol(l)),
          *m.find_state(to)};
}

}  // namespace

TEST_SUITE("learning") {

TEST_CASE("single-state counts and update") {
  const Model m = SingleStateModel();
  const auto obs = ParseObservation(m, "a");
  const CountTable c = ExpectedCounts(m, obs);
  CHECK(c.Count(T(m, "s0", "eps", "s0")) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c.Count(T(m, "s0", "a", "s0")) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(c.Count(T(m, "s0", "b", "s0")) == 0.0);

  const EmStep step = EmUpdate(m, obs);
  const Model &u = step.new_model;
  CHECK(TransitionProbability(u, "s0", "eps", "s0") == doctest::Approx(0.5));
  CHECK(TransitionProbability(u, "s0", "a", "s0") == doctest::Approx(0.5));
  CHECK(TransitionProbability(u, "s0", "b", "s0") == 0.0);
  CHECK(step.old_loglik == doctest::Approx(std::log(0.5)));
  CHECK(std::abs(step.new_loglik) <= 1e-12);
  CHECK(QFunction(u, c) == doctest::Approx(-2.0 * std::log(2.0)));
  CHECK(QFunction(m, c) == doctest::Approx(std::log(0.5) + std::log(0.25)));
}

TEST_CASE("training stops at a fixed point") {
  const Model m = SingleStateModel();
  const std::vector<ObservationSequence> data{ParseObservation(m, "a")};
  const auto trace = Train(m, data);
  REQUIRE(trace.size() == 2);
  CHECK(trace[1].new_loglik - trace[1].old_loglik < 1e-7);
}

TEST_CASE("zero iterations leave the model alone") {
  const Model m = RoomModel();
  const std::vector<ObservationSequence> data{ParseObservation(m, "b k")};
  TrainOptions o;
  o.max_iters = 0;
  CHECK(Train(m, data, o).empty());
}

TEST_CASE("counts over observable transitions add up to the length") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Model m = testing::RandomModel(rng);
    const auto obs = testing::SampleObservation(m, 1 + i % 5, rng);
    const CountTable c = ExpectedCounts(m, obs);
    std::vector<double> per_symbol(m.num_symbols(), 0.0);
    for (std::size_t t = 0; t < c.transitions.size(); ++t) {
      CHECK(c.counts[t] >= 0.0);
      if (c.transitions[t].label.is_observable())
        per_symbol[c.transitions[t].label.symbol()] += c.counts[t];
    }
    std::vector<double> expected(m.num_symbols(), 0.0);
    for (SymbolIndex a : obs) expected[a] += 1.0;
    for (SymbolIndex a = 0; a < m.num_symbols(); ++a)
      CHECK(per_symbol[a] == doctest::Approx(expected[a]).epsilon(1e-9));
  }
}

TEST_CASE("scaled counts agree with unscaled ones") {
  const Model m = RoomModel();
  std::mt19937_64 rng(12);
  const auto obs = testing::SampleObservation(m, 30, rng);
  LikelihoodOptions never, always;
  never.scaling = Scaling::kNever;
  always.scaling = Scaling::kAlways;
  const CountTable a = ExpectedCounts(m, obs, never);
  const CountTable b = ExpectedCounts(m, obs, always);
  for (std::size_t t = 0; t < a.counts.size(); ++t)
    CHECK(a.counts[t] == doctest::Approx(b.counts[t]).epsilon(1e-10));
}

TEST_CASE("counts for long sequences stay finite") {
  const Model m = RoomModel();
  std::mt19937_64 rng(13);
  const auto obs = testing::SampleObservation(m, 1500, rng);
  const CountTable c = ExpectedCounts(m, obs);
  double observable = 0.0;
  for (std::size_t t = 0; t < c.counts.size(); ++t) {
    CHECK(std::isfinite(c.counts[t]));
    if (c.transitions[t].label.is_observable()) observable += c.counts[t];
  }
  CHECK(observable == doctest::Approx(1500.0).epsilon(1e-9));
}

TEST_CASE("conditioning on an impossible observation fails") {
  ModelBuilder b;
  b.AddState("s0").AddSymbol("a").AddSymbol("z").SetStart("s0");
  b.AddTransition("s0", "a", "s0", 1.0);
  const Model m = b.Build();
  CHECK_THROWS_AS(ExpectedCounts(m, ParseObservation(m, "z")), ConditioningError);
  const std::vector<ObservationSequence> data{ParseObservation(m, "a"),
                                              ParseObservation(m, "a z")};
  try {
    EmUpdate(m, data);
    FAIL("expected a TrainingError");
  } catch (const TrainingError &e) {
    CHECK(e.sequence() == 1);
  }
}

TEST_CASE("unvisited states are frozen") {
  ModelBuilder b;
  b.AddState("s0").AddState("far").AddSymbol("a").AddSymbol("z").SetStart("s0");
  b.AddTransition("s0", "a", "s0", 0.6).AddTransition("s0", "z", "far", 0.4);
  b.AddTransition("far", "a", "far", 0.3).AddTransition("far", "z", "s0", 0.7);
  const Model m = b.Build();
  const EmStep step = EmUpdate(m, ParseObservation(m, "a a"));
  CHECK(step.frozen_states == std::vector<StateIndex>{1});
  CHECK(TransitionProbability(step.new_model, "far", "a", "far") == 0.3);
  CHECK(TransitionProbability(step.new_model, "s0", "a", "s0") == doctest::Approx(1.0));
  CHECK(step.new_model.num_transitions() == 3);
}

TEST_CASE("Q function edge cases") {
  const Model m = SingleStateModel();
  const std::vector<Transition> ts{T(m, "s0", "b", "s0")};
  CHECK(QFunction(m.Reweighted(std::vector<double>{0.5, 0.0, 0.5}), ts,
                  std::vector<double>{1.0}) ==
        -std::numeric_limits<double>::infinity());
  CHECK(QFunction(m, ts, std::vector<double>{0.0}) == 0.0);
}

TEST_CASE("EM is monotone on random data") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const Model m = testing::RandomModel(rng);
    std::vector<ObservationSequence> data;
    for (int k = 0; k < 3; ++k)
      data.push_back(testing::SampleObservation(m, 2 + k, rng));
    TrainOptions o;
    o.max_iters = 15;
    o.epsilon_stop = 0.0;
    const auto trace = Train(m, data, o);
    for (const EmStep &s : trace)
      CHECK(s.new_loglik >= s.old_loglik - kMonotonicityTolerance);
  }
}

TEST_CASE("counts inside oracle brackets (small sample)") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 30; ++i) {
    const Model m = testing::RandomModel(rng);
    const auto obs = testing::SampleObservation(m, 1 + i % 3, rng);
    const auto r = oracle::EnumeratePaths(m, obs);
    const CountTable c = ExpectedCounts(m, obs);
    for (std::size_t t = 0; t < c.transitions.size(); ++t)
      CHECK(oracle::OracleConditionalCount(r, c.transitions[t])
                .Contains(c.counts[t], 1e-12));
  }
}

}  // TEST_SUITE("learning")
