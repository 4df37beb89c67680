// cli.cpp
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

#include "epshmm/cli.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "epshmm/errors.hpp"
#include "epshmm/inference.hpp"
#include "epshmm/io.hpp"
#include "epshmm/learning.hpp"
#include "format.hpp"
#include "json.hpp"

namespace epshmm::cli {
namespace {

using internal::FormatReal;

void Report(std::ostream &err, const Error &e) {
  if (const auto *v = dynamic_cast<const ValidationError *>(&e)) {
    for (const auto &issue : v->issues()) err << "error: " << issue << '\n';
    if (v->issues().empty()) err << "error: " << e.what() << '\n';
    return;
  }
  err << "error: " << e.what() << '\n';
}

struct Inputs {
  Model model;
  std::vector<ObservationSequence> observations;
};

Inputs Load(const std::string &model_path, const std::string &obs_path) {
  Model model = LoadModel(model_path);
  auto observations = LoadObservations(model, obs_path);
  return {std::move(model), std::move(observations)};
}

std::string FrozenList(const Model &model, const std::vector<StateIndex> &frozen) {
  if (frozen.empty()) return "-";
  std::string out;
  for (StateIndex s : frozen) {
    if (!out.empty()) out += ',';
    out += model.state_name(s);
  }
  return out;
}

}  // namespace

int Validate(const ValidateOptions &options, std::ostream &out,
             std::ostream &err) {
  ModelBuilder builder;
  try {
    builder = ParseModelDocument(ReadFile(options.model));
  } catch (const Error &e) {
    Report(err, e);
    return kExitInput;
  }
  for (const auto &[state, sum] : builder.StateSums())
    out << "state " << state << ": sum " << FormatReal(sum) << '\n';

  const auto issues = builder.Diagnose();
  if (!issues.empty()) {
    for (const auto &issue : issues) err << "error: " << issue << '\n';
    return kExitInput;
  }
  const Model model = builder.Build(Check::kStructure);
  const ReachabilityReport report = ValidateReachability(model);
  if (!report.accepted()) {
    out << "reachability: rejected\n";
    for (StateIndex s : report.offending)
      err << "error: state " << model.state_name(s)
          << ": no positive-probability path carries an observable symbol "
             "(reachability condition)\n";
    return kExitInput;
  }
  out << "reachability: accepted after " << report.rounds << " rounds\n";
  out << model.num_states() << " states OK\n";
  return kExitOk;
}

int Prob(const ProbOptions &options, std::ostream &out, std::ostream &err) {
  std::optional<Inputs> in;
  try {
    in = Load(options.model, options.obs);
  } catch (const Error &e) {
    Report(err, e);
    return kExitInput;
  }
  LikelihoodOptions lopts;
  lopts.method = options.method;
  lopts.tol = options.tol;
  int status = kExitOk;
  for (std::size_t i = 0; i < in->observations.size(); ++i) {
    try {
      const Likelihood l = ObservationLikelihood(in->model, in->observations[i], lopts);
      out << FormatReal(l.value) << ' ' << FormatReal(l.log_value) << '\n';
    } catch (const Error &e) {
      out << "ERROR\n";
      err << "line " << i + 1 << ": " << e.what() << '\n';
      status = kExitPartial;
    }
  }
  return status;
}

int Explain(const ExplainOptions &options, std::ostream &out,
            std::ostream &err) {
  std::optional<Inputs> in;
  try {
    in = Load(options.model, options.obs);
  } catch (const Error &e) {
    Report(err, e);
    return kExitInput;
  }
  const Model &model = in->model;
  int status = kExitOk;
  for (std::size_t i = 0; i < in->observations.size(); ++i) {
    try {
      const Explanation x = BestExplanation(model, in->observations[i]);
      if (options.format == ExplainFormat::kJson) {
        nlohmann::json j;
        j["path"] = FormatPath(model, x.path);
        j["p"] = x.probability;
        j["logp"] = x.log_probability;
        j["cond"] = x.conditional;
        j["logcond"] = x.log_conditional;
        out << j.dump() << '\n';
        continue;
      }
      out << FormatPath(model, x.path);
      // Long observations underflow; switch to logs rather than print 0.
      if (x.probability > 0.0) {
        out << " p=" << FormatReal(x.probability)
            << " cond=" << FormatReal(x.conditional);
      } else {
        out << " logp=" << FormatReal(x.log_probability)
            << " logcond=" << FormatReal(x.log_conditional);
      }
      out << '\n';
    } catch (const NoExplanationError &e) {
      out << (options.format == ExplainFormat::kJson
                  ? "{\"error\":\"NO_EXPLANATION\"}"
                  : "NO_EXPLANATION")
          << '\n';
      err << "line " << i + 1 << ": " << e.what() << '\n';
      status = kExitPartial;
    } catch (const Error &e) {
      out << "ERROR\n";
      err << "line " << i + 1 << ": " << e.what() << '\n';
      status = kExitPartial;
    }
  }
  return status;
}

int Learn(const LearnOptions &options, std::ostream &out, std::ostream &err) {
  std::optional<Inputs> in;
  try {
    in = Load(options.model, options.obs);
  } catch (const Error &e) {
    Report(err, e);
    return kExitInput;
  }
  const Model &initial = in->model;
  TrainOptions topts;
  topts.max_iters = options.max_iters;
  topts.epsilon_stop = options.stop;

  std::vector<EmStep> trace;
  double initial_loglik = 0.0;
  try {
    for (std::size_t i = 0; i < in->observations.size(); ++i) {
      const double l = ObservationLikelihood(initial, in->observations[i]).log_value;
      if (l == -std::numeric_limits<double>::infinity())
        throw TrainingError("sequence has probability zero", i);
      initial_loglik += l;
    }
    trace = Train(initial, in->observations, topts);
  } catch (const TrainingError &e) {
    err << "error: line " << e.sequence() + 1 << ": observation '"
        << FormatObservation(initial, in->observations[e.sequence()])
        << "' has probability zero under the model\n";
    return kExitInput;
  } catch (const Error &e) {
    Report(err, e);
    return kExitInput;
  }

  const Model &final_model = trace.empty() ? initial : trace.back().new_model;
  try {
    WriteFile(options.out, SerializeModel(final_model, initial.transitions()));
    if (options.trace) {
      std::ostringstream t;
      t << "iteration loglik frozen\n";
      t << 0 << ' ' << FormatReal(initial_loglik) << " -\n";
      for (std::size_t i = 0; i < trace.size(); ++i)
        t << i + 1 << ' ' << FormatReal(trace[i].new_loglik) << ' '
          << FrozenList(initial, trace[i].frozen_states) << '\n';
      WriteFile(*options.trace, t.str());
    }
  } catch (const Error &e) {
    Report(err, e);
    return kExitInput;
  }
  const double final_loglik = trace.empty() ? initial_loglik : trace.back().new_loglik;
  out << "iterations " << trace.size() << " loglik " << FormatReal(final_loglik)
      << '\n';
  return kExitOk;
}

}  // namespace epshmm::cli
