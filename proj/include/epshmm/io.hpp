// epshmm/io.hpp
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
// File formats.
//
// Model document (JSON):
//
//   {
//     "states": ["s0", "B"],
//     "alphabet": ["b"],
//     "start": "s0",
//     "transitions": [{"from": "s0", "label": "b", "to": "B", "prob": 1}, ...]
//   }
//
// "eps" as a label is the epsilon transition. Probabilities are written with
// 12 significant digits.
//
// Observation document: one sequence per line, symbols separated by
// whitespace. A blank line is the empty sequence; the newline ending the last
// line does not start another one.

#ifndef EPSHMM_IO_HPP_
#define EPSHMM_IO_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epshmm/model.hpp"

namespace epshmm {

// Whole file as bytes. Throws Error if it cannot be read.
std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view contents);

// Syntax and field types only; the builder's Diagnose/Build check the rest.
// Throws ValidationError with line or field context.
ModelBuilder ParseModelDocument(std::string_view text);
Model LoadModel(const std::filesystem::path &path, Check check = Check::kFull);

std::string SerializeModel(const Model &model);
// Lists `listing` in that order with the model's probabilities, so dropped
// transitions appear with probability 0.
std::string SerializeModel(const Model &model,
                           std::span<const Transition> listing);

// Throws ValidationError naming the 1-based line of an unknown symbol.
std::vector<ObservationSequence> ParseObservationDocument(const Model &model,
                                                          std::string_view text);
std::vector<ObservationSequence> LoadObservations(
    const Model &model, const std::filesystem::path &path);

}  // namespace epshmm

#endif  // EPSHMM_IO_HPP_
