// epshmm/fixpoint.hpp
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
// Per-level fixpoint systems x = A_eps x + b. Every quantity that sums or
// maximizes over epsilon runs between two observable steps reduces to one of
// these, with a single matrix shared by all levels of an observation.
//
// Accepted models make A_eps contractive after k <= |S| steps: the
// sup-norm of A_eps^k is some q < 1. That pair (k, q) drives both the
// uniqueness argument and the Kleene stopping rule below.

#ifndef EPSHMM_FIXPOINT_HPP_
#define EPSHMM_FIXPOINT_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "epshmm/epsilon_matrix.hpp"
#include "epshmm/model.hpp"
#include "epshmm/path.hpp"

namespace epshmm {

inline constexpr double kSolverTolerance = 1e-12;
inline constexpr double kCertificateSlack = EpsilonMatrix::kRowSumSlack;

struct ContractionCertificate {
  std::size_t k = 1;
  double q = 0.0;
};

// Smallest k <= |S| with ||A^k||_inf < 1. Norms within kCertificateSlack of
// 1 count as 1, since a row that should sum to exactly 1 often rounds just
// below it. Throws InvalidModelError when no power qualifies, which for a
// substochastic matrix is exactly when I - A is singular.
ContractionCertificate ComputeContractionCertificate(const EpsilonMatrix &matrix);

struct LevelSystem {
  EpsilonMatrix matrix;
  Eigen::VectorXd rhs;
};

enum class SolveMethod { kDirect, kKleene };

struct KleeneResult {
  Eigen::MatrixXd solution;
  std::size_t iterations = 0;
  std::size_t cap = 0;
};

// Iteration budget for Kleene iteration from zero. After m blocks of k steps
// the error is at most q^m ||x*|| and ||x*|| <= k ||b|| / (1 - q); the cap
// is the first block count whose successive difference is certain to pass
// the stopping rule, plus two blocks of slack for rounding.
std::size_t KleeneIterationCap(const ContractionCertificate &cert,
                               double rhs_norm, double tol);

// x_{i+1} = A x_i + b from zero, one column per right-hand side. Stops once
// iterates k steps apart are within tol (1 - q) / q, which bounds the true
// error by tol. Throws ConvergenceError past the cap.
KleeneResult KleeneSolve(const EpsilonMatrix &matrix, const Eigen::MatrixXd &rhs,
                         const ContractionCertificate &cert, double tol);

// Exactly `steps` applications of x -> A x + b starting at `start`.
Eigen::MatrixXd KleeneIterate(const EpsilonMatrix &matrix,
                              const Eigen::MatrixXd &rhs,
                              const Eigen::MatrixXd &start, std::size_t steps);

// Factorizes (I - A_eps) once and solves any number of right-hand sides.
class LevelSolver {
 public:
  explicit LevelSolver(EpsilonMatrix matrix,
                       SolveMethod method = SolveMethod::kDirect,
                       double tol = kSolverTolerance);

  Eigen::MatrixXd Solve(const Eigen::MatrixXd &rhs) const;
  Eigen::VectorXd Solve(const Eigen::VectorXd &rhs) const;

  const ContractionCertificate &certificate() const { return cert_; }
  const EpsilonMatrix &matrix() const { return matrix_; }
  SolveMethod method() const { return method_; }

 private:
  EpsilonMatrix matrix_;
  SolveMethod method_;
  double tol_;
  ContractionCertificate cert_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

Eigen::VectorXd SolveLinearLevel(const LevelSystem &system,
                                 SolveMethod method = SolveMethod::kDirect,
                                 double tol = kSolverTolerance);

// Maximum product of epsilon probabilities over epsilon-only paths u -> v,
// the empty path included, with the best-path tree of each source.
struct EpsilonClosure {
  Eigen::MatrixXd best;
  // parent[u][v]: predecessor of v on the chosen best path from u; empty for
  // v == u and for v unreachable from u.
  std::vector<std::vector<std::optional<StateIndex>>> parent;

  // The chosen epsilon-only path u -> v. Precondition: best(u, v) > 0.
  PathSample Path(StateIndex u, StateIndex v) const;
};

// Best-first relaxation from every source. Edge weights lie in (0, 1], so
// path products never grow and a state's value is final once it is the
// largest open one. Ties pick the smallest state index.
EpsilonClosure SolveMaxLevel(const Model &model);

}  // namespace epshmm

#endif  // EPSHMM_FIXPOINT_HPP_
