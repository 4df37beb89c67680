// test_oracle.cpp
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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "epshmm/errors.hpp"
#include "epshmm/oracle.hpp"
#include "support/fixtures.hpp"

using namespace epshmm;
using namespace epshmm::oracle;
using epshmm::testing::RoomModel;
using epshmm::testing::SingleStateModel;

TEST_SUITE("oracle") {

TEST_CASE("single-state likelihood bracket") {
  const Model m = SingleStateModel();
  const auto r = EnumeratePaths(m, ParseObservation(m, "a"));
  CHECK(r.tail_bound <= 1e-9);
  CHECK(OracleLikelihood(r).Contains(0.5));
  // Joint count of the eps loop is 1/2.
  const Bracket c = OracleJointCount(r, {0, Label::Epsilon(), 0});
  CHECK(c.Contains(0.5, 1e-12));
  CHECK(c.hi - c.lo < 1e-6);
  CHECK(OracleConditionalCount(r, {0, Label::Observable(0), 0}).Contains(1.0, 1e-12));
}

TEST_CASE("room enumeration contains the best path") {
  const Model m = RoomModel();
  EnumerationOptions o;
  o.keep_paths = true;
  const auto r = EnumeratePaths(m, ParseObservation(m, "b k"), o);
  const auto it = std::find_if(r.paths.begin(), r.paths.end(), [&](const auto &p) {
    return FormatPath(m, p.path) == "s0 b B eps C k K";
  });
  REQUIRE(it != r.paths.end());
  CHECK(it->probability == doctest::Approx(0.06).epsilon(1e-14));
  const BestPathOracle best = OracleBestPath(r);
  CHECK(best.status == Verdict::kExact);
  CHECK(FormatPath(m, best.path->path) == "s0 b B eps C k K");
  CHECK(OracleLikelihood(r).Contains(0.069390581717451535, 1e-12));
  for (const auto &p : r.paths) {
    CHECK(PathProbability(m, p.path) == p.probability);
    CHECK(p.path.Observations() == ParseObservation(m, "b k"));
  }
}

TEST_CASE("empty observation enumerates the bare start") {
  const Model m = RoomModel();
  EnumerationOptions o;
  o.keep_paths = true;
  const auto r = EnumeratePaths(m, ObservationSequence{}, o);
  CHECK(r.path_count == 1);
  CHECK(r.paths.size() == 1);
  CHECK(r.paths[0].path.length() == 0);
  CHECK(r.mass_lower == 1.0);
  CHECK(r.tail_bound == 0.0);
}

TEST_CASE("transition outside the support has zero counts") {
  const Model m = RoomModel();
  const auto r = EnumeratePaths(m, ParseObservation(m, "b k"));
  const Bracket c = OracleJointCount(r, {1, Label::Observable(2), 3});
  CHECK(c.lo == 0.0);
  CHECK(c.hi == 0.0);
}

TEST_CASE("budget is enforced") {
  const Model m = RoomModel();
  EnumerationOptions o;
  o.path_budget = 10;
  CHECK_THROWS_AS(EnumeratePaths(m, ParseObservation(m, "b k c"), o),
                  BudgetExceededError);
}

TEST_CASE("sample space mass brackets one") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Model m = testing::RandomModel(rng);
    for (std::size_t n = 0; n <= 3; ++n) {
      const auto r = EnumerateSampleSpace(m, n);
      CHECK(r.tail_bound <= 1e-9);
      CHECK(r.MassBracket().Contains(1.0, 1e-12));
    }
  }
}

TEST_CASE("inconclusive best path is flagged") {
  // The best path s0 a s0 has probability 1/4; a loose tail target leaves
  // the skipped-path bound above it.
  const Model m = SingleStateModel();
  EnumerationOptions o;
  o.tail_target = 0.9;
  const auto r = EnumeratePaths(m, ParseObservation(m, "a"), o);
  const BestPathOracle b = OracleBestPath(r);
  if (r.max_skipped_probability >= b.path->probability) {
    CHECK(b.status == Verdict::kInconclusive);
    CHECK(b.probability.hi >= r.max_skipped_probability);
  }
  CHECK(b.probability.Contains(0.25));
}

}  // TEST_SUITE("oracle")
