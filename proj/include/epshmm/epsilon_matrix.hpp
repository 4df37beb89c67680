// epshmm/epsilon_matrix.hpp
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

#ifndef EPSHMM_EPSILON_MATRIX_HPP_
#define EPSHMM_EPSILON_MATRIX_HPP_

#include <cstddef>

#include <Eigen/Dense>

namespace epshmm {

// Square non-negative matrix with row sums <= 1: entry (s, s') is the
// probability of the epsilon move s -> s'.
class EpsilonMatrix {
 public:
  static constexpr double kRowSumSlack = 1e-12;

  EpsilonMatrix() = default;
  // Throws ValidationError if the matrix is not square and substochastic.
  explicit EpsilonMatrix(Eigen::MatrixXd entries);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd &matrix() const { return m_; }
  double operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  double row_sum(std::size_t row) const {
    return m_.row(static_cast<Eigen::Index>(row)).sum();
  }

 private:
  Eigen::MatrixXd m_;
};

}  // namespace epshmm

#endif  // EPSHMM_EPSILON_MATRIX_HPP_
