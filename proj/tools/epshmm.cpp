// epshmm.cpp: command-line front end.
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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "epshmm/cli.hpp"

namespace cli = epshmm::cli;

int main(int argc, char **argv) {
  CLI::App app{"Hidden Markov models with epsilon transitions"};
  app.require_subcommand(1);

  cli::ValidateOptions validate;
  auto *validate_cmd = app.add_subcommand("validate", "check a model document");
  validate_cmd->add_option("--model", validate.model, "model document")
      ->required();

  cli::ProbOptions prob;
  std::string prob_method = "direct";
  auto *prob_cmd = app.add_subcommand("prob", "likelihood of each observation line");
  prob_cmd->add_option("--model", prob.model, "model document")->required();
  prob_cmd->add_option("--obs", prob.obs, "observation document")->required();
  prob_cmd->add_option("--method", prob_method, "fixpoint solver")
      ->check(CLI::IsMember({"direct", "kleene"}));
  prob_cmd->add_option("--tol", prob.tol, "solver tolerance")
      ->check(CLI::PositiveNumber);

  cli::ExplainOptions explain;
  std::string explain_format = "path";
  auto *explain_cmd =
      app.add_subcommand("explain", "most probable path for each observation line");
  explain_cmd->add_option("--model", explain.model, "model document")->required();
  explain_cmd->add_option("--obs", explain.obs, "observation document")->required();
  explain_cmd->add_option("--format", explain_format, "output format")
      ->check(CLI::IsMember({"path", "json"}));

  cli::LearnOptions learn;
  std::string trace;
  auto *learn_cmd = app.add_subcommand("learn", "EM re-estimation");
  learn_cmd->add_option("--model", learn.model, "initial model document")
      ->required();
  learn_cmd->add_option("--obs", learn.obs, "training observations")->required();
  learn_cmd->add_option("--out", learn.out, "trained model document")->required();
  learn_cmd->add_option("--max-iters", learn.max_iters, "iteration limit");
  learn_cmd->add_option("--stop", learn.stop,
                        "stop when the log-likelihood gains less than this")
      ->check(CLI::NonNegativeNumber);
  learn_cmd->add_option("--trace", trace, "per-iteration log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : cli::kExitInput;
  }

  if (*validate_cmd) return cli::Validate(validate, std::cout, std::cerr);
  if (*prob_cmd) {
    prob.method = prob_method == "kleene" ? epshmm::SolveMethod::kKleene
                                          : epshmm::SolveMethod::kDirect;
    return cli::Prob(prob, std::cout, std::cerr);
  }
  if (*explain_cmd) {
    explain.format = explain_format == "json" ? cli::ExplainFormat::kJson
                                              : cli::ExplainFormat::kPath;
    return cli::Explain(explain, std::cout, std::cerr);
  }
  if (!trace.empty()) learn.trace = trace;
  return cli::Learn(learn, std::cout, std::cerr);
}
