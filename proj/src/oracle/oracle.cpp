// oracle.cpp
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
// Tail bounds. Let R_j be the number of epsilon steps taken right before the
// j-th observable step and a_r = ||A_eps^r||, so P_s(R_j >= r) <= a_r from
// any state s. A path is skipped iff some R_j > L, hence
//
//   skipped mass <= n * a_{L+1}.
//
// With |z| = n + sum_i R_i and the Markov property,
//
//   sum over skipped z of |z| P(z)
//     <= n^2 a_{L+1} + n ((L+1) a_{L+1} + sum_{r >= L+2} a_r)
//        + n (n-1) mu a_{L+1},            mu = sum_{r >= 1} a_r,
//
// and the infinite sums are closed off with a_{r+k} <= q a_r, where k is the
// first power with a_k = q < 1.

#include "epshmm/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "epshmm/errors.hpp"
#include "epshmm/fixpoint.hpp"

namespace epshmm::oracle {
namespace {

// Powers up to this are tried before giving up on the tail target.
constexpr std::size_t kMaxRunCap = 100000;
// First pruning threshold, relative to the pruning share of the tail target,
// and the factor it shrinks by while the pruned mass is still too large.
constexpr double kInitialPruneRatio = 1.0;
constexpr double kPruneShrink = 0.1;

struct Cap {
  std::size_t run_cap = 0;
  double tail = 0.0;
  double traversal_tail = 0.0;
  double max_skipped = 0.0;  // a_{L+1}: bound on any single skipped path
  double mu = 0.0;           // bound on the expected epsilon run length
};

Cap ChooseCap(const Model &model, std::size_t n, double tail_target) {
  Cap cap;
  const std::size_t states = model.num_states();
  cap.run_cap = states == 0 ? 0 : states - 1;
  if (n == 0) return cap;

  const Eigen::MatrixXd &a_eps = model.epsilon_matrix().matrix();
  // norms[r] = ||A^r||, norms[0] = 1.
  std::vector<double> norms{1.0};
  Eigen::MatrixXd power =
      Eigen::MatrixXd::Identity(a_eps.rows(), a_eps.cols());
  auto extend = [&](std::size_t r) {
    while (norms.size() <= r) {
      power = power * a_eps;
      norms.push_back(power.rowwise().sum().maxCoeff());
    }
  };

  std::size_t k = 0;
  for (std::size_t r = 1; r <= std::max<std::size_t>(states, 1); ++r) {
    extend(r);
    if (norms[r] < 1.0 - kCertificateSlack) {
      k = r;
      break;
    }
  }
  if (k == 0)
    throw InvalidModelError(
        "epsilon matrix is not contractive within |S| powers");
  const double q = norms[k];
  const double dn = static_cast<double>(n);

  while (true) {
    extend(cap.run_cap + 1);
    if (dn * norms[cap.run_cap + 1] <= tail_target) break;
    if (++cap.run_cap > kMaxRunCap)
      throw InvalidModelError("no epsilon-run cap reaches the tail target");
  }
  const std::size_t l = cap.run_cap;
  extend(l + 1 + k);
  const double a = norms[l + 1];
  double tail_sum = 0.0;  // sum_{r >= L+2} a_r
  for (std::size_t r = l + 2; r < l + 2 + k; ++r) tail_sum += norms[r];
  tail_sum /= 1.0 - q;
  double mu = 0.0;
  for (std::size_t r = 1; r <= k; ++r) mu += norms[r];
  mu /= 1.0 - q;

  cap.tail = dn * a;
  cap.traversal_tail = dn * dn * a +
                       dn * (static_cast<double>(l + 1) * a + tail_sum) +
                       dn * (dn - 1.0) * mu * a;
  cap.max_skipped = a;
  cap.mu = mu;
  return cap;
}

// Depth-first walk. A prefix whose probability falls below `prune` is not
// expanded: every path through it has probability below `prune`, their total
// mass is at most the prefix probability p, and their summed lengths weigh at
// most p (|prefix| + m (1 + mu)) with m observable steps still to go.
class Enumerator {
 public:
  Enumerator(const Model &model, const ObservationSequence *obs, std::size_t n,
             const Cap &cap, double prune, const EnumerationOptions &options,
             EnumerationResult &out)
      : model_(model),
        obs_(obs),
        n_(n),
        cap_(cap),
        prune_(prune),
        options_(options),
        out_(out) {}

  void Run() {
    if (n_ == 0) {
      Leaf(1.0);
      return;
    }
    Visit(model_.start(), 0, 0, 1.0);
  }

  double pruned_mass() const { return pruned_mass_; }
  double pruned_traversals() const { return pruned_traversals_; }

 private:
  void Charge() {
    if (++nodes_ > options_.path_budget)
      throw BudgetExceededError("oracle enumeration exceeded the budget of " +
                                std::to_string(options_.path_budget) +
                                " paths");
  }

  void Prune(std::size_t level, double p) {
    const double remaining = static_cast<double>(n_ - level);
    pruned_mass_ += p;
    pruned_traversals_ +=
        p * (static_cast<double>(stack_.size()) + remaining * (1.0 + cap_.mu));
  }

  void Visit(StateIndex state, std::size_t level, std::size_t run, double p) {
    for (const Arc &arc : model_.arcs(state)) {
      const double next = p * arc.probability;
      if (arc.label.is_epsilon()) {
        if (run >= cap_.run_cap) continue;
        stack_.push_back(arc.transition);
        if (next < prune_) {
          Prune(level, next);
        } else {
          Charge();
          Visit(arc.target, level, run + 1, next);
        }
        stack_.pop_back();
        continue;
      }
      if (obs_ != nullptr && arc.label.symbol() != (*obs_)[level]) continue;
      stack_.push_back(arc.transition);
      if (level + 1 == n_) {
        Leaf(next);
      } else if (next < prune_) {
        Prune(level + 1, next);
      } else {
        Charge();
        Visit(arc.target, level + 1, 0, next);
      }
      stack_.pop_back();
    }
  }

  void Leaf(double p) {
    Charge();
    ++out_.path_count;
    out_.mass_lower += p;
    for (std::size_t t : stack_) out_.traversal_mass[t] += p;
    const bool better = !out_.best || p > out_.best->probability;
    if (!better && !options_.keep_paths) return;
    PathSample path(model_.start());
    const auto transitions = model_.transitions();
    for (std::size_t t : stack_)
      path.Append(transitions[t].label, transitions[t].target);
    if (better) out_.best = EnumeratedPath{path, p};
    if (options_.keep_paths) out_.paths.push_back({std::move(path), p});
  }

  const Model &model_;
  const ObservationSequence *obs_;
  std::size_t n_;
  const Cap &cap_;
  double prune_;
  const EnumerationOptions &options_;
  EnumerationResult &out_;
  std::vector<std::size_t> stack_;
  std::size_t nodes_ = 0;
  double pruned_mass_ = 0.0;
  double pruned_traversals_ = 0.0;
};

EnumerationResult Enumerate(const Model &model, const ObservationSequence *obs,
                            std::size_t n, const EnumerationOptions &options) {
  if (!(options.tail_target > 0.0))
    throw std::invalid_argument("tail_target must be positive");
  // Half the target goes to the run cap, half to pruning.
  const double budget = options.tail_target / 2.0;
  const Cap cap = ChooseCap(model, n, budget);
  for (double prune = budget * kInitialPruneRatio;; prune *= kPruneShrink) {
    EnumerationResult out;
    out.observations = n;
    out.epsilon_run_cap = cap.run_cap;
    out.transitions.assign(model.transitions().begin(),
                           model.transitions().end());
    out.traversal_mass.assign(out.transitions.size(), 0.0);
    Enumerator walk(model, obs, n, cap, prune, options, out);
    walk.Run();
    if (walk.pruned_mass() > budget && prune > 0.0) continue;
    out.tail_bound = cap.tail + walk.pruned_mass();
    out.traversal_tail_bound = cap.traversal_tail + walk.pruned_traversals();
    out.max_skipped_probability =
        std::max(cap.max_skipped, walk.pruned_mass() > 0.0 ? prune : 0.0);
    return out;
  }
}

}  // namespace

EnumerationResult EnumeratePaths(const Model &model, const ObservationSequence &obs,
                                 const EnumerationOptions &options) {
  for (SymbolIndex a : obs)
    if (a >= model.num_symbols())
      throw ValidationError({"observation symbol outside the alphabet"});
  return Enumerate(model, &obs, obs.size(), options);
}

EnumerationResult EnumerateSampleSpace(const Model &model, std::size_t n,
                                       const EnumerationOptions &options) {
  return Enumerate(model, nullptr, n, options);
}

Bracket OracleLikelihood(const EnumerationResult &result) {
  return result.MassBracket();
}

BestPathOracle OracleBestPath(const EnumerationResult &result) {
  BestPathOracle out;
  out.path = result.best;
  const double best = result.best ? result.best->probability : 0.0;
  if (result.best && best > result.max_skipped_probability) {
    out.status = Verdict::kExact;
    out.probability = {best, best};
  } else {
    out.status = Verdict::kInconclusive;
    out.probability = {best, std::max(best, result.max_skipped_probability)};
  }
  return out;
}

Bracket OracleJointCount(const EnumerationResult &result, const Transition &t) {
  const auto it =
      std::lower_bound(result.transitions.begin(), result.transitions.end(), t);
  if (it == result.transitions.end() || *it != t) return {0.0, 0.0};
  const double lo =
      result.traversal_mass[static_cast<std::size_t>(it - result.transitions.begin())];
  return {lo, lo + result.traversal_tail_bound};
}

namespace {

Bracket Condition(const Bracket &joint, const EnumerationResult &result) {
  const Bracket mass = result.MassBracket();
  if (joint.hi == 0.0) return {0.0, 0.0};
  if (!(mass.lo > 0.0))
    return {0.0, std::numeric_limits<double>::infinity()};
  return {joint.lo / mass.hi, joint.hi / mass.lo};
}

}  // namespace

Bracket OracleConditionalCount(const EnumerationResult &result,
                               const Transition &t) {
  return Condition(OracleJointCount(result, t), result);
}

Bracket OracleExpectedLength(const EnumerationResult &result) {
  double lo = 0.0;
  for (double m : result.traversal_mass) lo += m;
  return Condition({lo, lo + result.traversal_tail_bound}, result);
}

}  // namespace epshmm::oracle
