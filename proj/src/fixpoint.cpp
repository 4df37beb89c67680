// fixpoint.cpp
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

#include "epshmm/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epshmm/errors.hpp"
#include "format.hpp"

namespace epshmm {

ContractionCertificate ComputeContractionCertificate(const EpsilonMatrix &matrix) {
  const auto n = static_cast<Eigen::Index>(matrix.size());
  const Eigen::MatrixXd &a = matrix.matrix();
  Eigen::MatrixXd power = a;
  for (Eigen::Index k = 1; k <= std::max<Eigen::Index>(n, 1); ++k) {
    // Entries are non-negative, so the sup-norm is the largest row sum.
    const double q = n == 0 ? 0.0 : power.rowwise().sum().maxCoeff();
    if (q < 1.0 - kCertificateSlack) return {static_cast<std::size_t>(k), q};
    power = power * a;
  }
  throw InvalidModelError(
      "epsilon matrix is not contractive within |S| steps (I - A_eps is "
      "singular); some state cannot reach an observable symbol");
}

std::size_t KleeneIterationCap(const ContractionCertificate &cert,
                               double rhs_norm, double tol) {
  const auto k = cert.k;
  if (rhs_norm == 0.0 || cert.q == 0.0) return 3 * k;
  const double target = tol * (1.0 - cert.q) * (1.0 - cert.q) /
                        (2.0 * static_cast<double>(k) * rhs_norm);
  double blocks = 1.0;
  if (target < 1.0) blocks = std::ceil(std::log(target) / std::log(cert.q));
  blocks = std::max(blocks, 1.0);
  return (static_cast<std::size_t>(blocks) + 2) * k;
}

Eigen::MatrixXd KleeneIterate(const EpsilonMatrix &matrix,
                              const Eigen::MatrixXd &rhs,
                              const Eigen::MatrixXd &start, std::size_t steps) {
  Eigen::MatrixXd x = start;
  for (std::size_t i = 0; i < steps; ++i) x = matrix.matrix() * x + rhs;
  return x;
}

KleeneResult KleeneSolve(const EpsilonMatrix &matrix, const Eigen::MatrixXd &rhs,
                         const ContractionCertificate &cert, double tol) {
  KleeneResult result;
  const double rhs_norm = rhs.size() == 0 ? 0.0 : rhs.cwiseAbs().maxCoeff();
  result.cap = KleeneIterationCap(cert, rhs_norm, tol);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rhs.rows(), rhs.cols());
  while (true) {
    Eigen::MatrixXd y = KleeneIterate(matrix, rhs, x, cert.k);
    result.iterations += cert.k;
    const double d = y.size() == 0 ? 0.0 : (y - x).cwiseAbs().maxCoeff();
    if (d * cert.q <= tol * (1.0 - cert.q)) {
      result.solution = std::move(y);
      return result;
    }
    if (result.iterations >= result.cap) {
      const double residual =
          (matrix.matrix() * y + rhs - y).cwiseAbs().maxCoeff();
      throw ConvergenceError("Kleene iteration exceeded its cap of " +
                                 std::to_string(result.cap) +
                                 " steps; residual " +
                                 internal::FormatReal(residual),
                             residual);
    }
    x = std::move(y);
  }
}

LevelSolver::LevelSolver(EpsilonMatrix matrix, SolveMethod method, double tol)
    : matrix_(std::move(matrix)),
      method_(method),
      tol_(tol),
      cert_(ComputeContractionCertificate(matrix_)) {
  if (!(tol_ > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
  if (method_ == SolveMethod::kDirect) {
    const auto n = static_cast<Eigen::Index>(matrix_.size());
    lu_.compute(Eigen::MatrixXd::Identity(n, n) - matrix_.matrix());
  }
}

Eigen::MatrixXd LevelSolver::Solve(const Eigen::MatrixXd &rhs) const {
  if (static_cast<std::size_t>(rhs.rows()) != matrix_.size())
    throw std::invalid_argument("right-hand side has the wrong dimension");
  if (method_ == SolveMethod::kKleene)
    return KleeneSolve(matrix_, rhs, cert_, tol_).solution;
  return lu_.solve(rhs);
}

Eigen::VectorXd LevelSolver::Solve(const Eigen::VectorXd &rhs) const {
  return Solve(Eigen::MatrixXd(rhs)).col(0);
}

Eigen::VectorXd SolveLinearLevel(const LevelSystem &system, SolveMethod method,
                                 double tol) {
  return LevelSolver(system.matrix, method, tol).Solve(system.rhs);
}

PathSample EpsilonClosure::Path(StateIndex u, StateIndex v) const {
  const auto iu = static_cast<Eigen::Index>(u);
  const auto iv = static_cast<Eigen::Index>(v);
  if (!(best(iu, iv) > 0.0))
    throw NoExplanationError("no epsilon path between the given states");
  std::vector<StateIndex> reversed;
  for (StateIndex x = v; x != u; x = *parent[u][x]) reversed.push_back(x);
  PathSample path(u);
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it)
    path.Append(Label::Epsilon(), *it);
  return path;
}

EpsilonClosure SolveMaxLevel(const Model &model) {
  const std::size_t n = model.num_states();
  EpsilonClosure closure;
  closure.best = Eigen::MatrixXd::Zero(n, n);
  closure.parent.assign(n, std::vector<std::optional<StateIndex>>(n));
  for (StateIndex u = 0; u < n; ++u) {
    auto row = closure.best.row(static_cast<Eigen::Index>(u));
    std::vector<bool> done(n, false);
    row(static_cast<Eigen::Index>(u)) = 1.0;
    while (true) {
      std::optional<StateIndex> next;
      for (StateIndex x = 0; x < n; ++x) {
        const double value = row(static_cast<Eigen::Index>(x));
        if (done[x] || value <= 0.0) continue;
        if (!next || value > row(static_cast<Eigen::Index>(*next))) next = x;
      }
      if (!next) break;
      const StateIndex x = *next;
      done[x] = true;
      const double through = row(static_cast<Eigen::Index>(x));
      for (const Arc &arc : model.arcs(x)) {
        if (!arc.label.is_epsilon() || done[arc.target]) continue;
        const double candidate = through * arc.probability;
        if (candidate > row(static_cast<Eigen::Index>(arc.target))) {
          row(static_cast<Eigen::Index>(arc.target)) = candidate;
          closure.parent[u][arc.target] = x;
        }
      }
    }
  }
  return closure;
}

}  // namespace epshmm
