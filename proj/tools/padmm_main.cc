// Copyright 2026 The padmm Authors.
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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "padmm/accountant.h"
#include "padmm/engine.h"
#include "padmm/error.h"
#include "padmm/experiment.h"
#include "padmm/format.h"
#include "padmm/gaussian_oracle.h"
#include "padmm/json_io.h"
#include "padmm/norms.h"
#include "padmm/report.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerification = 4;
constexpr int kExitOther = 1;

int ExitCodeFor(const padmm::Error& e) {
  switch (e.code()) {
    case padmm::ErrorCode::kInvalidArgument:
    case padmm::ErrorCode::kDimensionMismatch:
    case padmm::ErrorCode::kZeroSigma:
    case padmm::ErrorCode::kBadAlpha:
      return kExitUsage;
    case padmm::ErrorCode::kEtaOutsideInterval:
    case padmm::ErrorCode::kEmptyInterval:
    case padmm::ErrorCode::kBadEta:
    case padmm::ErrorCode::kNotSpd:
    case padmm::ErrorCode::kDegenerateSystem:
    case padmm::ErrorCode::kWeakConvexityPreconditionViolated:
      return kExitInfeasible;
    default:
      return kExitOther;
  }
}

padmm::Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw padmm::Error(padmm::ErrorCode::kInvalidArgument,
                       "cannot open " + path);
  }
  try {
    return padmm::Json::parse(in);
  } catch (const padmm::Json::exception& e) {
    throw padmm::Error(padmm::ErrorCode::kInvalidArgument,
                       path + ": " + e.what());
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw padmm::Error(padmm::ErrorCode::kInvalidArgument,
                       "cannot write " + path.string());
  }
  out << text;
}

struct AmplifyFlags {
  double sigma = 0.0;
  std::optional<double> delta;
  std::optional<double> dist0;
  double eta = 0.0;
  double beta = 0.0;
  double op_norm_a = 0.0;
  int t_pairs = 0;
  bool sc = false;
  double nu = 0.0;
  double mu = 0.0;
  double mu_g = 0.0;
  double op_norm_ab = 0.0;
  std::uint64_t seed = 42;
};

int RunAmplify(const AmplifyFlags& f) {
  if (f.delta.has_value() == f.dist0.has_value()) {
    std::cerr << "error: give exactly one of --delta or --dist0\n";
    return kExitUsage;
  }
  padmm::PrivacyBoundReport report;
  if (f.sc) {
    const padmm::ScParameters sc{f.nu, f.mu, f.mu_g, f.op_norm_ab};
    report = f.delta ? padmm::FirstUserBoundSc(f.sigma, *f.delta, f.eta, f.beta,
                                               f.op_norm_a, f.t_pairs, sc)
                     : padmm::AmpBoundSc(f.sigma, f.t_pairs, *f.dist0, f.beta,
                                         f.eta, f.op_norm_a, sc);
  } else {
    report = f.delta ? padmm::FirstUserBound(f.sigma, *f.delta, f.eta, f.beta,
                                             f.op_norm_a, f.t_pairs)
                     : padmm::AmpBoundGeneral(f.sigma, f.t_pairs, *f.dist0,
                                              f.beta, f.eta, f.op_norm_a);
  }
  padmm::Json out = padmm::BoundReportToJson(report);
  out["seed"] = f.seed;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct ReferenceRow {
  padmm::TableRow row;
  std::optional<double> reference_eta;
  std::optional<double> reference_contraction;
};

std::vector<ReferenceRow> BuiltInRows() {
  return {{{0.25, 0.9, 0.1, 0.0}, 1.95, 0.95},
          {{0.09, 0.5, 0.1, 0.0}, 4.81, 0.91},
          {{0.0225, 0.3, 0.1, 0.0}, 20.00, 0.85},
          {{0.01, 0.15, 0.1, 0.0}, 43.30, 0.80}};
}

int RunContraction(const std::string& config, bool as_json, std::uint64_t seed) {
  std::vector<ReferenceRow> rows;
  if (config.empty()) {
    rows = BuiltInRows();
  } else {
    const padmm::Json j = ReadJsonFile(config);
    const padmm::Json& list = j.is_object() && j.contains("rows") ? j["rows"] : j;
    if (!list.is_array()) {
      throw padmm::Error(padmm::ErrorCode::kInvalidArgument,
                         "contraction config must be an array of rows");
    }
    for (const padmm::Json& r : list) {
      padmm::RejectUnknownKeys(r, {"mu", "beta", "c2", "c1", "reference_eta",
                                   "reference_contraction"},
                               "row");
      ReferenceRow rr;
      rr.row.mu_table = padmm::GetOr<double>(r, "mu", 0.0);
      rr.row.beta = padmm::GetOr<double>(r, "beta", 0.0);
      rr.row.c2 = padmm::GetOr<double>(r, "c2", 0.1);
      rr.row.c1 = padmm::GetOr<double>(r, "c1", 0.0);
      if (r.contains("reference_eta")) {
        rr.reference_eta = padmm::GetOr<double>(r, "reference_eta", 0.0);
      }
      if (r.contains("reference_contraction")) {
        rr.reference_contraction =
            padmm::GetOr<double>(r, "reference_contraction", 0.0);
      }
      rows.push_back(rr);
    }
  }
  padmm::Json json_rows = padmm::Json::array();
  std::ostringstream table;
  std::ostringstream notes;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-6s %-6s %-6s %-10s %-10s %-10s %-8s\n",
                "mu", "beta", "c2", "c1", "eta_low", "eta_high", "eta_mid", "L");
  table << line;
  int note = 0;
  for (const ReferenceRow& rr : rows) {
    const padmm::ContractionReport rep = padmm::TableRowReport(rr.row);
    std::string mark;
    padmm::Json jr = padmm::ContractionToJson(rep);
    jr["mu_table"] = rr.row.mu_table;
    jr["c2"] = rr.row.c2;
    jr["c1"] = rr.row.c1;
    if (rr.reference_eta && std::abs(*rr.reference_eta - rep.eta_mid) > 0.01) {
      ++note;
      mark = " [" + std::to_string(note) + "]";
      std::ostringstream n;
      n << "[" << note << "] reference eta " << padmm::FormatDouble(*rr.reference_eta)
        << " differs from the interval midpoint " << rep.eta_mid;
      try {
        const double curvature = 2.0 * rr.row.mu_table;
        const padmm::ContractionReport at_ref = padmm::ContractionFactor(
            curvature, curvature, 2.0 * rr.row.c2, rr.row.beta, 1.0,
            *rr.reference_eta);
        n << "; at eta " << padmm::FormatDouble(*rr.reference_eta) << " L = "
          << at_ref.contraction;
        jr["contraction_at_reference_eta"] = at_ref.contraction;
      } catch (const padmm::Error&) {
        n << "; eta " << padmm::FormatDouble(*rr.reference_eta)
          << " is outside the admissible interval";
      }
      if (rr.reference_contraction) {
        n << "; reference L " << padmm::FormatDouble(*rr.reference_contraction)
          << " vs computed " << rep.contraction << " at the midpoint";
      }
      notes << n.str() << "\n";
      jr["discrepancy"] = n.str().substr(n.str().find(']') + 2);
    }
    if (rr.reference_eta) jr["reference_eta"] = *rr.reference_eta;
    if (rr.reference_contraction) {
      jr["reference_contraction"] = *rr.reference_contraction;
    }
    json_rows.push_back(jr);
    std::snprintf(line, sizeof(line),
                  "%-8g %-6g %-6g %-6g %-10.4f %-10.4f %-10.4f %-8.4f%s\n",
                  rr.row.mu_table, rr.row.beta, rr.row.c2, rr.row.c1,
                  rep.eta_low, rep.eta_high, rep.eta_mid, rep.contraction,
                  mark.c_str());
    table << line;
  }
  if (as_json) {
    padmm::Json out = {{"seed", seed},
                       {"convention", "nu = mu = 2 mu_table, mu_g = 2 c2, |A^T B| = 1"},
                       {"rows", json_rows}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "# seed=" << seed
              << " convention: nu = mu = 2 mu_table, mu_g = 2 c2, |A^T B| = 1\n"
              << table.str() << notes.str();
  }
  return kExitOk;
}

int RunVerifyOracle(const padmm::OracleSweepOptions& opt, const std::string& out) {
  const std::vector<padmm::OracleSweepRow> rows = padmm::RunOracleSweep(opt);
  std::string text = "# seed=" + std::to_string(opt.seed) + "\n";
  text += padmm::OracleSweepCsv(rows);
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFile(out, text);
  }
  int failures = 0;
  for (const padmm::OracleSweepRow& r : rows) failures += r.result.ok ? 0 : 1;
  std::cerr << rows.size() << " instances, " << failures << " violations\n";
  return failures == 0 ? kExitOk : kExitVerification;
}

int RunLasso(const std::string& config_path, const std::string& out_dir,
             std::optional<std::uint64_t> seed) {
  padmm::ExperimentConfig cfg =
      padmm::ExperimentConfigFromJson(ReadJsonFile(config_path));
  if (seed) cfg.seed = *seed;
  const padmm::ExperimentResult result = padmm::RunExperiment(cfg);
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  WriteFile(dir / "gaps.csv", padmm::GapsCsv(result, cfg));
  WriteFile(dir / "summary.csv", padmm::SummaryCsv(result, cfg));
  WriteFile(dir / "ttests.csv", padmm::TTestsCsv(result, cfg));
  WriteFile(dir / "convergence.csv", padmm::ConvergenceCsv(result, cfg));
  if (cfg.plots) WriteFile(dir / "mean_gap.svg", padmm::MeanGapSvg(result, cfg));
  padmm::Json echo = padmm::ExperimentConfigToJson(cfg);
  WriteFile(dir / "config.json", echo.dump(2) + "\n");
  std::cout << "seed=" << cfg.seed << " settings=" << cfg.settings.size()
            << " out=" << dir.string() << "\n";
  for (const padmm::SettingSummary& s : result.summaries) {
    std::cout << s.setting_id << " sigma=" << padmm::FormatDouble(s.sigma)
              << " eta=" << padmm::FormatDouble(s.eta) << " convergence="
              << (s.convergence_iterations
                      ? std::to_string(*s.convergence_iterations)
                      : std::string("never"))
              << "\n";
  }
  return kExitOk;
}

int RunSimulate(const std::string& problem_path, int iterations,
                std::uint64_t seed, const std::string& out) {
  const padmm::ProblemDocument doc =
      padmm::ProblemFromJson(ReadJsonFile(problem_path));
  if (!doc.f) {
    throw padmm::Error(padmm::ErrorCode::kInvalidArgument,
                       "problem needs an 'f' block with P and q");
  }
  const padmm::AdmmProblem problem(doc.cs, doc.g, doc.beta, doc.eta);
  const padmm::GradientOracle f = doc.f->Oracle();
  padmm::NoiseTape tape = padmm::NoiseTape::Recording(seed);
  const padmm::AdmmState start{padmm::Vector::Zero(problem.n()),
                               padmm::Vector::Zero(problem.m())};
  const padmm::IterationTranscript tr = padmm::RunNoisy(
      start, [&f](int) -> const padmm::GradientOracle& { return f; }, doc.sigma,
      tape, problem, iterations);
  std::ostringstream os;
  os << "# seed=" << seed << "\n";
  padmm::WriteTranscriptCsv(os, tr);
  if (out.empty()) {
    std::cout << os.str();
  } else {
    WriteFile(out, os.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy gradient ADMM: privacy bounds, exact oracle checks and "
               "LASSO experiments"};
  app.require_subcommand(1);

  AmplifyFlags amp;
  CLI::App* amplify = app.add_subcommand(
      "amplify-bound", "Closed-form amplification bound as JSON");
  amplify->add_option("--sigma", amp.sigma, "Noise standard deviation")
      ->required()
      ->check(CLI::PositiveNumber);
  amplify->add_option("--delta", amp.delta,
                      "Gradient sensitivity of the first user");
  amplify->add_option("--dist0", amp.dist0,
                      "Distance between the two starting points");
  amplify->add_option("--eta", amp.eta, "Step size")->required()->check(
      CLI::PositiveNumber);
  amplify->add_option("--beta", amp.beta, "Augmentation weight")
      ->required()
      ->check(CLI::PositiveNumber);
  amplify->add_option("--op-norm-a", amp.op_norm_a, "Operator norm of A")
      ->required()
      ->check(CLI::NonNegativeNumber);
  amplify->add_option("--t-pairs", amp.t_pairs, "Number of iteration pairs")
      ->required()
      ->check(CLI::PositiveNumber);
  CLI::Option* sc_flag =
      amplify->add_flag("--sc", amp.sc, "Use the strongly convex bound");
  amplify->add_option("--nu", amp.nu, "Smoothness")->needs(sc_flag);
  amplify->add_option("--mu", amp.mu, "Strong convexity of f")->needs(sc_flag);
  amplify->add_option("--mu-g", amp.mu_g, "Strong convexity of g")->needs(sc_flag);
  amplify->add_option("--op-norm-ab", amp.op_norm_ab, "Operator norm of A^T B")
      ->needs(sc_flag);
  amplify->add_option("--seed", amp.seed, "Master seed (echoed)");

  std::string contraction_config;
  bool contraction_json = false;
  std::uint64_t contraction_seed = 42;
  CLI::App* contraction = app.add_subcommand(
      "contraction", "Admissible eta interval and contraction factor per row");
  contraction->add_option("--config", contraction_config,
                          "JSON array of rows {mu, beta, c2, c1}")
      ->check(CLI::ExistingFile);
  contraction->add_flag("--json", contraction_json, "Print JSON");
  contraction->add_option("--seed", contraction_seed, "Master seed (echoed)");

  padmm::OracleSweepOptions sweep;
  std::string sweep_out;
  CLI::App* verify = app.add_subcommand(
      "verify-oracle", "Exact divergence against the bound on random instances");
  verify->add_option("--instances", sweep.instances, "Number of instances")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-n", sweep.max_n, "Largest x dimension")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-m", sweep.max_m, "Largest constraint count")
      ->check(CLI::PositiveNumber);
  verify->add_option("--t-pairs", sweep.max_t_pairs,
                     "Largest number of iteration pairs")
      ->check(CLI::PositiveNumber);
  verify->add_option("--sigma", sweep.sigmas, "Noise levels, cycled")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", sweep.seed, "Master seed");
  verify->add_option("--out", sweep_out, "CSV path (stdout when empty)");

  std::string lasso_config;
  std::string lasso_out;
  std::optional<std::uint64_t> lasso_seed;
  CLI::App* lasso = app.add_subcommand("run-lasso", "LASSO experiments");
  lasso->add_option("--config", lasso_config, "Experiment JSON")
      ->required()
      ->check(CLI::ExistingFile);
  lasso->add_option("--out", lasso_out, "Output directory")->required();
  lasso->add_option("--seed", lasso_seed, "Override the config seed");

  std::string sim_problem;
  std::string sim_out;
  int sim_iterations = 10;
  std::uint64_t sim_seed = 42;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Noisy iterations on a JSON problem; transcript as CSV");
  simulate->add_option("--problem", sim_problem, "Problem JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--iterations", sim_iterations, "Iteration count")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim_seed, "Master seed");
  simulate->add_option("--out", sim_out, "CSV path (stdout when empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*amplify) return RunAmplify(amp);
    if (*contraction) {
      return RunContraction(contraction_config, contraction_json,
                            contraction_seed);
    }
    if (*verify) return RunVerifyOracle(sweep, sweep_out);
    if (*lasso) return RunLasso(lasso_config, lasso_out, lasso_seed);
    if (*simulate) return RunSimulate(sim_problem, sim_iterations, sim_seed, sim_out);
  } catch (const padmm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitUsage;
}
