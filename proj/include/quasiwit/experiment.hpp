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

// Experiment runner behind the command-line tool: parses a JSON run
// configuration and writes plot-ready CSV files.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quasiwit/dynamics.hpp"
#include "quasiwit/error.hpp"
#include "quasiwit/frames.hpp"
#include "quasiwit/parallel.hpp"
#include "quasiwit/phase_space.hpp"
#include "quasiwit/qstate.hpp"

namespace quasiwit {

enum class Experiment { QubitScatter, GaussianScatter, EntropyPlot, Witness, Sweep, Panels };

inline Experiment parse_experiment(std::string_view name) {
  if (name == "qubit-scatter") return Experiment::QubitScatter;
  if (name == "gaussian-scatter") return Experiment::GaussianScatter;
  if (name == "entropy-plot") return Experiment::EntropyPlot;
  if (name == "witness") return Experiment::Witness;
  if (name == "sweep") return Experiment::Sweep;
  if (name == "panels") return Experiment::Panels;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

/// (gamma_plus/gamma_minus, gamma_minus/Omega) of the four regime panels, Omega = 2 pi.
inline constexpr std::array<std::pair<double, double>, 4> kPanelRatios{
    {{0.2, 10.0}, {0.05, 2.0}, {0.5, 1.0}, {0.8, 4.0}}};

struct ExperimentConfig {
  Experiment experiment = Experiment::QubitScatter;
  std::uint64_t seed = 0;
  std::size_t sample_count = 1000;
  char scenario = 'a';
  double tol = 1e-6;
  std::filesystem::path output = "out.csv";
  unsigned threads = 0;
  bool gnuplot = false;

  // witness / panels / sweep
  DampedOscillatorParams dynamics{10.0 * std::numbers::pi, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
  std::vector<GaussianState> states{GaussianState({6.0, 0.0}, 2.0 * Mat2::Identity()),
                                    GaussianState({-6.0, 0.0}, 2.0 * Mat2::Identity())};
  std::vector<double> times = uniform_time_grid(2.0, 201);
  std::vector<double> ratio_pm;
  std::vector<double> ratio_mo;
  std::size_t points_per_period = 101;

  // qubit-scatter
  std::optional<nlohmann::json> frame;

  void validate() const {
    if (sample_count < 1) throw ConfigError("sample_count must be at least 1");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (output.empty()) throw ConfigError("output path is empty");
    GaussianScenario::preset(scenario);
    if (experiment == Experiment::Witness || experiment == Experiment::Sweep || experiment == Experiment::Panels) {
      if (states.size() != 2) throw ConfigError("exactly two initial states required");
      detail::validate_time_grid(times);
    }
    if (experiment == Experiment::Witness) {
      dynamics.validate();
      if (!(dynamics.gamma0() > 0.0)) throw ConfigError("gamma_minus must exceed gamma_plus");
    }
    if (experiment == Experiment::Sweep) {
      if (ratio_pm.empty() || ratio_mo.empty()) throw ConfigError("sweep needs ratio_pm and ratio_mo grids");
      for (double r : ratio_pm) {
        if (!(r > 0.0 && r < 1.0)) throw ConfigError("ratio_pm values must lie in (0, 1)");
      }
      for (double r : ratio_mo) {
        if (!(r > 0.0)) throw ConfigError("ratio_mo values must be positive");
      }
      if (points_per_period < 3) throw ConfigError("points_per_period must be at least 3");
      if (!(dynamics.omega_drive > 0.0)) throw ConfigError("omega must be positive");
    }
  }
};

namespace detail {

/// Either an explicit list or {"min", "max", "count"} (linear spacing).
inline std::vector<double> parse_grid(const nlohmann::json& j, const char* what) {
  if (j.is_array()) return j.get<std::vector<double>>();
  const double lo = j.at("min").get<double>();
  const double hi = j.at("max").get<double>();
  const auto count = j.at("count").get<std::size_t>();
  if (count < 1 || hi < lo) throw ConfigError(std::string("invalid grid for ") + what);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sample_count")) c.sample_count = j["sample_count"].get<std::size_t>();
    if (j.contains("scenario")) {
      const auto s = j["scenario"].get<std::string>();
      if (s.size() != 1) throw ConfigError("scenario must be one of a, b, c, d");
      c.scenario = s[0];
    }
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("gnuplot")) c.gnuplot = j["gnuplot"].get<bool>();
    if (j.contains("dynamics")) {
      const auto& d = j["dynamics"];
      // Missing keys keep their defaults; sweeps only read omega.
      c.dynamics.gamma_minus = d.value("gamma_minus", c.dynamics.gamma_minus);
      c.dynamics.gamma_plus = d.value("gamma_plus", c.dynamics.gamma_plus);
      c.dynamics.omega_drive = d.value("omega", c.dynamics.omega_drive);
      const auto mod = d.value("modulation", std::string("sinusoidal"));
      if (mod == "sinusoidal") {
        c.dynamics.modulation = RateModulation::Sinusoidal;
      } else if (mod == "constant") {
        c.dynamics.modulation = RateModulation::Constant;
      } else {
        throw ConfigError("modulation must be 'sinusoidal' or 'constant'");
      }
    }
    if (j.contains("states")) {
      c.states.clear();
      for (const auto& s : j["states"]) c.states.push_back(state_from_json(s));
    }
    if (j.contains("times")) c.times = detail::parse_grid(j["times"], "times");
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      c.ratio_pm = detail::parse_grid(s.at("ratio_pm"), "ratio_pm");
      c.ratio_mo = detail::parse_grid(s.at("ratio_mo"), "ratio_mo");
      c.points_per_period = s.value("points_per_period", c.points_per_period);
    }
    if (j.contains("frame")) c.frame = j["frame"];
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

/// Plain CSV with a header row and 12 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& values, bool flagged) {
    char buf[32];
    for (double v : values) {
      if (std::isnan(v)) {
        out_ << "nan,";
      } else {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out_ << buf << ',';
      }
    }
    out_ << (flagged ? 1 : 0) << '\n';
  }

 private:
  std::ofstream out_;
};

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::size_t rows = 0;
  std::size_t flagged = 0;
};

namespace detail {

struct Row {
  std::vector<double> values;
  bool flagged = false;
};

/// Per-sample generator so results do not depend on scheduling.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

template <class F>
std::vector<Row> compute_rows(std::size_t n, std::size_t width, unsigned threads, F&& f) {
  std::vector<Row> rows(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        try {
          rows[i].values = f(i);
        } catch (const NumericalError&) {
          rows[i].values.assign(width, std::numeric_limits<double>::quiet_NaN());
          rows[i].flagged = true;
        }
      },
      threads);
  return rows;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<Row>& rows, RunSummary& summary) {
  CsvWriter csv(path, header);
  for (const auto& r : rows) {
    csv.row(r.values, r.flagged);
    summary.flagged += r.flagged ? 1 : 0;
  }
  summary.rows += rows.size();
  summary.files.push_back(path);
}

inline void write_gnuplot(const std::filesystem::path& csv, const std::string& x, const std::vector<std::string>& ys,
                          const std::vector<std::string>& header) {
  std::filesystem::path script = csv;
  script += ".gp";
  std::ofstream out(script);
  if (!out) throw ConfigError("cannot write " + script.string());
  auto column = [&header](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i + 1;
    }
    return std::size_t{0};
  };
  out << "set datafile separator ','\nset key autotitle columnhead\nset xlabel '" << x << "'\nplot ";
  for (std::size_t k = 0; k < ys.size(); ++k) {
    out << (k ? ", " : "") << "'" << csv.filename().string() << "' using " << column(x) << ':' << column(ys[k])
        << (x == "t" ? " with lines" : " with points pt 7 ps 0.3");
  }
  out << '\n';
}

inline std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
  std::filesystem::path out = base.parent_path() / (base.stem().string() + suffix + base.extension().string());
  return out;
}

inline std::vector<Row> witness_rows(const ExperimentConfig& c, const DampedOscillatorParams& p) {
  return compute_rows(c.times.size(), 3, c.threads, [&](std::size_t i) {
    const GaussianState e1 = evolve(c.states[0], c.times[i], p);
    const GaussianState e2 = evolve(c.states[1], c.times[i], p);
    return std::vector<double>{c.times[i], kolmogorov_distance_cv(e1, e2, DensityKind::P, c.tol),
                               kolmogorov_distance_cv(e1, e2, DensityKind::Q, c.tol)};
  });
}

}  // namespace detail

/// Runs one experiment and writes its CSV file(s). Throws ConfigError for
/// invalid configurations and NumericalError when every row failed.
inline RunSummary run(const ExperimentConfig& c) {
  c.validate();
  RunSummary summary;
  const auto& out = c.output;
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());

  switch (c.experiment) {
    case Experiment::QubitScatter: {
      const QuantumFrame frame = [&c] {
        if (!c.frame) return sic_qubit_frame();
        try {
          return frame_from_json(*c.frame);
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError(std::string("invalid frame: ") + e.what());
        }
      }();
      if (frame.dim() != 2 || !frame.is_minimal()) throw ConfigError("qubit-scatter needs a minimal qubit frame");
      auto rows = detail::compute_rows(c.sample_count, 4, c.threads, [&](std::size_t i) {
        auto rng = detail::sample_rng(c.seed, i);
        const DensityMatrix r1 = random_density_matrix(2, rng);
        const DensityMatrix r2 = random_density_matrix(2, rng);
        const DistanceBounds b = inequality_report(r1, r2, frame);
        return std::vector<double>{b.d_tr, b.d_f, b.d_p, 0.5 * (b.d_f + b.d_p)};
      });
      const std::vector<std::string> header{"d_tr", "d_f", "d_p", "avg", "flag"};
      detail::write_csv(out, header, rows, summary);
      if (c.gnuplot) detail::write_gnuplot(out, "d_tr", {"d_tr", "d_f", "d_p", "avg"}, header);
      break;
    }
    case Experiment::GaussianScatter:
    case Experiment::EntropyPlot: {
      const GaussianScenario sc = GaussianScenario::preset(c.scenario);
      const bool entropy = c.experiment == Experiment::EntropyPlot;
      auto rows = detail::compute_rows(c.sample_count, entropy ? 2 : 3, c.threads, [&](std::size_t i) {
        auto rng = detail::sample_rng(c.seed, i);
        const GaussianState s1 = random_gaussian_state(sc, rng);
        const GaussianState s2 = random_gaussian_state(sc, rng);
        const double p = kolmogorov_distance_cv(s1, s2, DensityKind::P, c.tol);
        const double q = kolmogorov_distance_cv(s1, s2, DensityKind::Q, c.tol);
        if (entropy) {
          return std::vector<double>{0.5 * (von_neumann_entropy(s1) + von_neumann_entropy(s2)), p - q};
        }
        return std::vector<double>{p, q, p - q};
      });
      const std::vector<std::string> header = entropy ? std::vector<std::string>{"avg_entropy", "diff", "flag"}
                                                      : std::vector<std::string>{"dkol_p", "dkol_q", "diff", "flag"};
      detail::write_csv(out, header, rows, summary);
      if (c.gnuplot) {
        if (entropy) {
          detail::write_gnuplot(out, "avg_entropy", {"diff"}, header);
        } else {
          detail::write_gnuplot(out, "dkol_p", {"dkol_p", "dkol_q", "diff"}, header);
        }
      }
      break;
    }
    case Experiment::Witness: {
      const std::vector<std::string> header{"t", "dkol_p", "dkol_q", "flag"};
      detail::write_csv(out, header, detail::witness_rows(c, c.dynamics), summary);
      if (c.gnuplot) detail::write_gnuplot(out, "t", {"dkol_p", "dkol_q"}, header);
      break;
    }
    case Experiment::Panels: {
      const std::array<std::string, 4> names{"_a", "_b", "_c", "_d"};
      const double omega = 2.0 * std::numbers::pi;
      const std::vector<std::string> header{"t", "dkol_p", "dkol_q", "flag"};
      for (std::size_t k = 0; k < kPanelRatios.size(); ++k) {
        const auto p = DampedOscillatorParams::from_ratios(kPanelRatios[k].first, kPanelRatios[k].second, omega);
        const auto path = detail::with_suffix(out, names[k]);
        detail::write_csv(path, header, detail::witness_rows(c, p), summary);
        if (c.gnuplot) detail::write_gnuplot(path, "t", {"dkol_p", "dkol_q"}, header);
      }
      break;
    }
    case Experiment::Sweep: {
      const std::size_t cols = c.ratio_mo.size();
      SweepOptions opt;
      opt.points_per_period = c.points_per_period;
      opt.tol = c.tol;
      opt.threads = 1;
      const double omega = c.dynamics.omega_drive;
      auto rows = detail::compute_rows(c.ratio_pm.size() * cols, 3, c.threads, [&](std::size_t k) {
        const double pm = c.ratio_pm[k / cols];
        const double mo = c.ratio_mo[k % cols];
        return std::vector<double>{pm, mo, n_min_sweep({pm}, {mo}, c.states[0], c.states[1], omega, opt)(0, 0)};
      });
      const std::vector<std::string> header{"ratio_pm", "ratio_mo", "n_min", "flag"};
      detail::write_csv(out, header, rows, summary);
      if (c.gnuplot) {
        std::filesystem::path script = out;
        script += ".gp";
        std::ofstream gp(script);
        gp << "set datafile separator ','\nset xlabel 'ratio_pm'\nset ylabel 'ratio_mo'\n"
           << "plot '" << out.filename().string() << "' using 1:2:3 with points pt 5 palette notitle\n";
      }
      break;
    }
  }
  if (summary.rows > 0 && summary.flagged == summary.rows) {
    throw NumericalError("every row failed numerically");
  }
  return summary;
}

}  // namespace quasiwit
