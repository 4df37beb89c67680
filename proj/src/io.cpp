// io.cpp
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

#include "epshmm/io.hpp"

#include <fstream>
#include <sstream>

#include "epshmm/errors.hpp"
#include "format.hpp"
#include "json.hpp"

namespace epshmm {
namespace {

using nlohmann::json;

const json &Field(const json &object, const char *key, const std::string &where) {
  const auto it = object.find(key);
  if (it == object.end())
    throw ValidationError({where + ": missing key '" + key + "'"});
  return *it;
}

std::string String(const json &value, const std::string &where) {
  if (!value.is_string())
    throw ValidationError({where + ": expected a string"});
  return value.get<std::string>();
}

std::vector<std::string> Strings(const json &value, const std::string &where) {
  if (!value.is_array())
    throw ValidationError({where + ": expected a list of strings"});
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i)
    out.push_back(String(value[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string Quote(const std::string &s) { return json(s).dump(); }

}  // namespace

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::filesystem::path &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw Error("error while writing '" + path.string() + "'");
}

ModelBuilder ParseModelDocument(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    // nlohmann reports "line L, column C" in its message.
    throw ValidationError({std::string("malformed model document: ") + e.what()});
  }
  if (!doc.is_object())
    throw ValidationError({"model document: expected an object"});

  ModelBuilder builder;
  for (auto &s : Strings(Field(doc, "states", "model document"), "states"))
    builder.AddState(std::move(s));
  for (auto &a : Strings(Field(doc, "alphabet", "model document"), "alphabet"))
    builder.AddSymbol(std::move(a));
  builder.SetStart(String(Field(doc, "start", "model document"), "start"));

  const json &transitions = Field(doc, "transitions", "model document");
  if (!transitions.is_array())
    throw ValidationError({"transitions: expected a list"});
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const json &t = transitions[i];
    if (!t.is_object()) throw ValidationError({where + ": expected an object"});
    const json &prob = Field(t, "prob", where);
    if (!prob.is_number())
      throw ValidationError({where + ".prob: expected a number"});
    builder.AddTransition(String(Field(t, "from", where), where + ".from"),
                          String(Field(t, "label", where), where + ".label"),
                          String(Field(t, "to", where), where + ".to"),
                          prob.get<double>());
  }
  return builder;
}

Model LoadModel(const std::filesystem::path &path, Check check) {
  return ParseModelDocument(ReadFile(path)).Build(check);
}

std::string SerializeModel(const Model &model) {
  return SerializeModel(model, model.transitions());
}

std::string SerializeModel(const Model &model,
                           std::span<const Transition> listing) {
  auto list = [](const std::vector<std::string> &names) {
    std::string out = "[";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) out += ", ";
      out += Quote(names[i]);
    }
    return out + "]";
  };
  std::string out = "{\n";
  out += "  \"states\": " + list(model.state_names()) + ",\n";
  out += "  \"alphabet\": " + list(model.symbol_names()) + ",\n";
  out += "  \"start\": " + Quote(model.state_name(model.start())) + ",\n";
  out += "  \"transitions\": [";
  for (std::size_t i = 0; i < listing.size(); ++i) {
    const Transition &t = listing[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"from\": " + Quote(model.state_name(t.source)) +
           ", \"label\": " + Quote(model.label_name(t.label)) +
           ", \"to\": " + Quote(model.state_name(t.target)) +
           ", \"prob\": " + internal::FormatReal(TransitionProbability(model, t)) +
           "}";
  }
  out += listing.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

std::vector<ObservationSequence> ParseObservationDocument(const Model &model,
                                                          std::string_view text) {
  std::vector<ObservationSequence> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{}
                                         : text.substr(end + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    try {
      out.push_back(ParseObservation(model, line));
    } catch (const ValidationError &e) {
      throw ValidationError({"line " + std::to_string(line_no) + ": " + e.what()});
    }
  }
  return out;
}

std::vector<ObservationSequence> LoadObservations(
    const Model &model, const std::filesystem::path &path) {
  return ParseObservationDocument(model, ReadFile(path));
}

}  // namespace epshmm
