// Copyright 2026 The quasiwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "quasiwit/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasiwit: quasi-probability distances and non-Markovianity witnesses"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::optional<std::string> out;
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--seed", seed, "override the RNG seed");
  run->add_option("--samples", samples, "override sample_count");
  run->add_option("--tol", tol, "override the quadrature tolerance");
  run->add_option("--out", out, "override the output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    quasiwit::ExperimentConfig config = quasiwit::load_config(config_path);
    if (seed) config.seed = *seed;
    if (samples) config.sample_count = *samples;
    if (tol) config.tol = *tol;
    if (out) config.output = *out;
    const auto summary = quasiwit::run(config);
    for (const auto& f : summary.files) std::printf("wrote %s\n", f.string().c_str());
    if (summary.flagged > 0) {
      std::fprintf(stderr, "warning: %zu of %zu rows flagged as numerical failures\n", summary.flagged,
                   summary.rows);
    }
    return 0;
  } catch (const quasiwit::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const quasiwit::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
