// format.hpp
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

#ifndef EPSHMM_SRC_FORMAT_HPP_
#define EPSHMM_SRC_FORMAT_HPP_

#include <cmath>
#include <cstdio>
#include <string>

namespace epshmm::internal {

// Decimal with 12 significant digits; "inf", "-inf", "nan" otherwise.
inline std::string FormatReal(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace epshmm::internal

#endif  // EPSHMM_SRC_FORMAT_HPP_
