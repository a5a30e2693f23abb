// Copyright 2026 The dpmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpmech/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "dpmech - optimal differentially private data-acquisition mechanisms"};
  app.require_subcommand(1);

  dpmech::RunConfig rc;
  const std::vector<std::pair<std::string, std::string>> modes = {
      {"solve-central", "exact central privacy-loss allocation"},
      {"solve-local", "PTAS local privacy-loss allocation"},
      {"oracle-central", "brute-force central solution (n <= 6)"},
      {"oracle-local", "brute-force local solution (n <= 6)"},
      {"payments", "interim curves and payment schedule"},
      {"audit-ic", "incentive compatibility / rationality audit"},
      {"audit-dp", "empirical privacy audit of an estimator"},
      {"surface", "two-user central-vs-local surfaces"},
      {"threshold-sweep", "where each architecture drops the costliest user"},
      {"bench", "serial-vs-OpenMP solver timings"}};
  for (const auto& [mode, help] : modes) {
    CLI::App* sub = app.add_subcommand(mode, help);
    sub->add_option("--input", rc.input_path, "input JSON file");
    sub->add_option("--out", rc.out_dir, "output directory");
    sub->add_option("--seed", rc.seed, "master RNG seed");
    sub->add_option("--ptas-eps", rc.ptas_eps,
                    "PTAS accuracy for the local solver");
    sub->add_option("--grid", rc.grid, "grid size (mode specific)");
    sub->add_option("--mc", rc.mc, "Monte Carlo samples / audit trials");
    sub->add_flag("--serial", [&rc](std::int64_t) { rc.parallel = false; },
                  "disable OpenMP kernels");
    sub->callback([&rc, mode]() { rc.mode = mode; });
  }

  CLI11_PARSE(app, argc, argv);
  return dpmech::run(rc);
}
