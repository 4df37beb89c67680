// fixtures.hpp: shared test models and random generators.
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

#ifndef EPSHMM_TESTS_SUPPORT_FIXTURES_HPP_
#define EPSHMM_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstddef>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "epshmm/model.hpp"

namespace epshmm::testing {

// Doors between a bedroom B, a corridor C and a kitchen K; the observer
// hears b, c or k on entering a room unless the step is silent.
Model RoomModel();

// One state with three self-loops: eps 1/2, a 1/4, b 1/4.
Model SingleStateModel();

struct RandomModelOptions {
  std::size_t max_states = 4;
  std::size_t max_symbols = 3;
  // Chance that a candidate (symbol, target) pair is in the support.
  double density = 0.4;
  // Same for a candidate epsilon edge.
  double epsilon_density = 0.3;
  // Largest epsilon share of a state with at least one observable edge, and
  // of one whose epsilon edges branch. Branching epsilon cycles multiply the
  // number of paths per unit of mass, which is what enumeration pays for.
  double max_epsilon_mass = 0.4;
  double max_branching_epsilon_mass = 0.12;
  // Out-degree limits; they keep brute-force enumeration of n <= 3 cheap.
  std::size_t max_epsilon_edges = 2;
  std::size_t max_epsilon_edges_total = 4;
  std::size_t max_out_degree = 6;
  // Dirichlet concentration of each state's weights.
  double concentration = 1.0;
  // Chance that a non-start state gets epsilon edges only (one edge at most).
  double silent_state_chance = 0.2;
};

// A random model passing the full check (rejection sampling).
Model RandomModel(std::mt19937_64 &rng, const RandomModelOptions &options = {});

// Draws a path from the start state until n observable steps were taken and
// returns its observations.
ObservationSequence SampleObservation(const Model &model, std::size_t n,
                                      std::mt19937_64 &rng);

// Uniform symbols; may well have probability zero.
ObservationSequence RandomObservation(const Model &model, std::size_t n,
                                      std::mt19937_64 &rng);

// Random stochastic vector of length n, Dirichlet with the given
// concentration (1 is uniform on the simplex).
Eigen::VectorXd RandomSimplex(std::size_t n, std::mt19937_64 &rng,
                              double concentration = 1.0);

}  // namespace epshmm::testing

#endif  // EPSHMM_TESTS_SUPPORT_FIXTURES_HPP_
