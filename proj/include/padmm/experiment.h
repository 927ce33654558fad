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

#ifndef PADMM_EXPERIMENT_H_
#define PADMM_EXPERIMENT_H_

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "padmm/engine.h"
#include "padmm/error.h"
#include "padmm/linalg.h"
#include "padmm/norms.h"
#include "padmm/problem.h"
#include "padmm/rng.h"

namespace padmm {

// Substream tags.
inline constexpr std::uint64_t kDataStream = 1;
inline constexpr std::uint64_t kFunctionStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;
inline constexpr std::uint64_t kUtilityStream = 4;

struct LassoDataset {
  Matrix X;  // row i is a_i
  Vector b;
  Vector planted;
  double mu_scale = 0.0;
  double sigma_b = 0.0;
  int n = 0;
  int N = 0;
  Matrix gram;  // XᵀX / N
  Vector xtb;   // Xᵀb / N
  double bb = 0.0;  // |b|² / N

  // (1/N) sum (<a_i, x> - b_i)²
  double Loss(const Vector& x) const {
    return x.dot(gram * x) - 2.0 * xtb.dot(x) + bb;
  }
  Vector LossGradient(const Vector& x) const {
    return 2.0 * (gram * x - xtb);
  }
  double Smoothness() const {
    return 2.0 * JacobiEigen(gram).values.maxCoeff();
  }
};

inline LassoDataset GenLasso(int n, int num_points, double mu_scale,
                             double sigma_b, std::uint64_t seed) {
  Require(n >= 5 && num_points >= 1, ErrorCode::kInvalidArgument,
          "need n >= 5 and N >= 1");
  Require(mu_scale > 0.0 && sigma_b >= 0.0, ErrorCode::kInvalidArgument,
          "need mu > 0 and sigma_b >= 0");
  Rng rng = Rng::Substream(seed, {kDataStream});
  const int heavy = n / 5;
  LassoDataset d;
  d.n = n;
  d.N = num_points;
  d.mu_scale = mu_scale;
  d.sigma_b = sigma_b;
  d.X = Matrix(num_points, n);
  for (int i = 0; i < num_points; ++i) {
    Vector row(n);
    for (int j = 0; j < n; ++j) {
      const double z = rng.Normal();
      row(j) = j < heavy ? 50.0 * z : z;
    }
    d.X.row(i) = (std::sqrt(mu_scale) / row.norm()) * row.transpose();
  }
  d.planted = Vector::Zero(n);
  d.planted.head(heavy).setConstant(3.0);
  d.b = d.X * d.planted;
  for (int i = 0; i < num_points; ++i) d.b(i) += sigma_b * rng.Normal();
  d.gram = d.X.transpose() * d.X / num_points;
  d.gram = 0.5 * (d.gram + d.gram.transpose());
  d.xtb = d.X.transpose() * d.b / num_points;
  d.bb = d.b.squaredNorm() / num_points;
  return d;
}

// Gradient of the single sampled loss (<a_i, x> - b_i)².
inline GradientOracle SampleOracle(const LassoDataset& d, int i) {
  GradientOracle g;
  g.gradient = [&d, i](const Vector& x) -> Vector {
    const double r = d.X.row(i).dot(x) - d.b(i);
    return 2.0 * r * d.X.row(i).transpose();
  };
  g.nu = 2.0 * d.mu_scale;
  return g;
}

inline AdmmProblem LassoProblem(int n, double c1, double c2, double beta,
                                double eta) {
  ConstraintSystem cs{Matrix::Identity(n, n), -Matrix::Identity(n, n),
                      Vector::Zero(n)};
  return AdmmProblem(std::move(cs), Regularizer::MakeElasticNet(c1, c2), beta,
                     eta);
}

struct ReferenceOptimum {
  Vector x;
  Vector y;
  double value = 0.0;
  int admm_iterations = 0;
  double prox_value = 0.0;
  double value_rel_diff = 0.0;
  double x_rel_diff = 0.0;
};

inline double LassoObjective(const LassoDataset& d, double c1, double c2,
                             const Vector& x) {
  return d.Loss(x) + c1 * x.lpNorm<1>() + c2 * x.squaredNorm();
}

// Accelerated proximal gradient with restart on the same objective.
inline Vector ProxGradientSolve(const LassoDataset& d, double c1, double c2,
                                int max_iterations = 200000) {
  const double lip = d.Smoothness() + 2.0 * c2;
  const double step = 1.0 / lip;
  Vector x = Vector::Zero(d.n);
  Vector v = x;
  double theta = 1.0;
  double prev_obj = LassoObjective(d, c1, c2, x);
  for (int k = 0; k < max_iterations; ++k) {
    const Vector grad = d.LossGradient(v) + 2.0 * c2 * v;
    Vector next = v - step * grad;
    for (Eigen::Index j = 0; j < next.size(); ++j) {
      next(j) = SoftThreshold(next(j), step * c1);
    }
    const double obj = LassoObjective(d, c1, c2, next);
    const double change = (next - x).norm();
    if (obj > prev_obj) {
      theta = 1.0;
      v = x;
      continue;
    }
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    v = next + ((theta - 1.0) / theta_next) * (next - x);
    x = next;
    theta = theta_next;
    prev_obj = obj;
    if (change <= 1e-15 * (1.0 + x.norm())) break;
  }
  return x;
}

// Noiseless full-gradient ADMM, cross-checked by proximal gradient.
inline ReferenceOptimum ComputeReferenceOptimum(const LassoDataset& d,
                                                double c1, double c2,
                                                int max_iterations = 50000) {
  const double nu = d.Smoothness();
  const double eta = 1.0 / nu;
  const double beta = 1.0;
  const AdmmProblem problem = LassoProblem(d.n, c1, c2, beta, eta);
  GradientOracle full;
  full.gradient = [&d](const Vector& x) -> Vector { return d.LossGradient(x); };
  full.nu = nu;
  const CustomNormParams norm{eta, beta, Matrix::Identity(d.n, d.n)};
  AdmmState s{Vector::Constant(d.n, 3.0), Vector::Zero(d.n)};
  int it = 0;
  for (; it < max_iterations; ++it) {
    const AdmmState next = AdmmIteration(s, full, problem);
    const double step =
        std::sqrt(CustomNormSq(next.x - s.x, next.lambda - s.lambda, norm));
    s = next;
    if (step < 1e-12) {
      ++it;
      break;
    }
  }
  ReferenceOptimum out;
  out.admm_iterations = it;
  const Vector x_prox = ProxGradientSolve(d, c1, c2);
  const double v_admm = LassoObjective(d, c1, c2, s.x);
  const double v_prox = LassoObjective(d, c1, c2, x_prox);
  out.prox_value = v_prox;
  out.value_rel_diff =
      std::abs(v_admm - v_prox) / std::max(1e-300, std::abs(v_prox));
  out.x_rel_diff = (s.x - x_prox).norm() / (1.0 + x_prox.norm());
  if (out.x_rel_diff > 1e-4) {
    throw Error(ErrorCode::kNotConverged,
                "reference solvers disagree by " +
                    std::to_string(out.x_rel_diff));
  }
  out.x = v_admm <= v_prox ? s.x : x_prox;
  out.y = out.x;
  out.value = std::min(v_admm, v_prox);
  return out;
}

struct LassoSetting {
  std::string id;
  double mu = 0.25;
  double beta = 0.9;
  double c2 = 0.1;
  double c1 = 0.0;
  double sigma = 0.0;
  std::optional<double> eta;  // midpoint of the admissible interval if unset
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  int trials = 100;
  int iterations = 100;
  int n = 64;
  int N = 1000;
  double sigma_b = 0.01;
  double x0_value = 3.0;
  int gap_every = 1;
  bool gap_uses_noisy_x = true;
  int ttest_iteration = 100;
  double confidence = 0.95;
  bool plots = true;
  std::vector<LassoSetting> settings;

  void Validate() const {
    Require(trials >= 1 && iterations >= 1, ErrorCode::kInvalidArgument,
            "trials and iterations must be >= 1");
    Require(n >= 5 && N >= 1, ErrorCode::kInvalidArgument,
            "need n >= 5 and N >= 1");
    Require(gap_every >= 1, ErrorCode::kInvalidArgument, "gap_every >= 1");
    Require(confidence > 0.0 && confidence < 1.0, ErrorCode::kInvalidArgument,
            "confidence must lie in (0, 1)");
    Require(!settings.empty(), ErrorCode::kInvalidArgument, "no settings");
    for (const LassoSetting& s : settings) {
      Require(s.mu > 0.0 && s.beta > 0.0 && s.c1 >= 0.0 && s.c2 >= 0.0 &&
                  s.sigma >= 0.0,
              ErrorCode::kInvalidArgument, "bad setting " + s.id);
    }
  }
};

inline double ResolveEta(const LassoSetting& s) {
  if (s.eta) return *s.eta;
  return TableRowReport({s.mu, s.beta, s.c2, s.c1}).eta_mid;
}

struct GapTrajectory {
  std::string setting_id;
  std::vector<int> iters;
  std::vector<std::vector<double>> gaps;  // gaps[trial][k] at iters[k]
  std::vector<double> mean;

  std::vector<double> Column(std::size_t k) const {
    std::vector<double> out;
    out.reserve(gaps.size());
    for (const std::vector<double>& row : gaps) out.push_back(row[k]);
    return out;
  }
};

inline GapTrajectory RunTrials(const LassoDataset& d, const LassoSetting& s,
                               const ExperimentConfig& cfg,
                               const ReferenceOptimum& ref) {
  const double eta = ResolveEta(s);
  const AdmmProblem problem = LassoProblem(d.n, s.c1, s.c2, s.beta, eta);
  const Regularizer& g = problem.regularizer();
  GapTrajectory traj;
  traj.setting_id = s.id;
  for (int t = cfg.gap_every; t <= cfg.iterations; t += cfg.gap_every) {
    traj.iters.push_back(t);
  }
  traj.gaps.assign(static_cast<std::size_t>(cfg.trials),
                   std::vector<double>(traj.iters.size(), 0.0));
  std::vector<GradientOracle> oracles;
  oracles.reserve(static_cast<std::size_t>(d.N));
  for (int i = 0; i < d.N; ++i) oracles.push_back(SampleOracle(d, i));

  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng picks = Rng::Substream(cfg.seed, {kFunctionStream,
                                          static_cast<std::uint64_t>(trial)});
    NoiseTape tape = NoiseTape::Recording(
        cfg.seed, {kNoiseStream, static_cast<std::uint64_t>(trial)});
    AdmmState st{Vector::Constant(d.n, cfg.x0_value), Vector::Zero(d.n)};
    std::size_t k = 0;
    std::vector<double>& row = traj.gaps[static_cast<std::size_t>(trial)];
    for (int t = 1; t <= cfg.iterations; ++t) {
      const int pick = static_cast<int>(picks.UniformInt(0, d.N - 1));
      const AdmmState clean =
          AdmmIteration(st, oracles[static_cast<std::size_t>(pick)], problem);
      st = clean;
      st.x += s.sigma * tape.Draw(d.n);
      if (k < traj.iters.size() && traj.iters[k] == t) {
        const Vector& x_eval = cfg.gap_uses_noisy_x ? st.x : clean.x;
        const Vector y = problem.YUpdate(st.lambda - s.beta * x_eval);
        row[k] = d.Loss(x_eval) + g.Value(y) - ref.value;
        ++k;
      }
    }
  }
  traj.mean.assign(traj.iters.size(), 0.0);
  for (std::size_t k = 0; k < traj.iters.size(); ++k) {
    double acc = 0.0;
    for (const std::vector<double>& row : traj.gaps) acc += row[k];
    traj.mean[k] = acc / cfg.trials;
  }
  return traj;
}

// Two-sided Welch test.
inline double WelchTTest(const std::vector<double>& s1,
                         const std::vector<double>& s2) {
  Require(s1.size() >= 2 && s2.size() >= 2, ErrorCode::kInvalidArgument,
          "each sample needs at least two values");
  auto moments = [](const std::vector<double>& s) {
    const double n = static_cast<double>(s.size());
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : s) ss += (v - mean) * (v - mean);
    return std::pair<double, double>(mean, ss / (n - 1.0));
  };
  const auto [m1, v1] = moments(s1);
  const auto [m2, v2] = moments(s2);
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  const double a = v1 / n1;
  const double b = v2 / n2;
  const double se2 = a + b;
  if (se2 == 0.0) return m1 == m2 ? 1.0 : 0.0;
  const double t = (m1 - m2) / std::sqrt(se2);
  const double df = se2 * se2 / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
  const double x = df / (df + t * t);
  if (x <= 0.0) return 0.0;
  return std::clamp(boost::math::ibeta(0.5 * df, 0.5, x), 0.0, 1.0);
}

// First iteration t whose gaps are not significantly different from those
// five iterations later.
inline int ConvergenceIterations(const GapTrajectory& traj,
                                 double confidence = 0.95, int lag = 5) {
  const double threshold = 1.0 - confidence;
  std::map<int, std::size_t> index;
  for (std::size_t k = 0; k < traj.iters.size(); ++k) index[traj.iters[k]] = k;
  for (std::size_t k = 0; k < traj.iters.size(); ++k) {
    const auto later = index.find(traj.iters[k] + lag);
    if (later == index.end()) continue;
    if (WelchTTest(traj.Column(k), traj.Column(later->second)) > threshold) {
      return traj.iters[k];
    }
  }
  throw Error(ErrorCode::kNeverConverged,
              "no insignificant step within the horizon");
}

struct TTestRow {
  std::string setting_a;
  std::string setting_b;
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  int iter = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double p_value = 1.0;
};

struct SettingSummary {
  std::string setting_id;
  double sigma = 0.0;
  double eta = 0.0;
  std::optional<double> contraction;
  std::optional<int> convergence_iterations;
  double reference_value = 0.0;
};

struct ExperimentResult {
  std::vector<GapTrajectory> trajectories;
  std::vector<SettingSummary> summaries;
  std::vector<TTestRow> ttests;
};

inline bool SameRow(const LassoSetting& a, const LassoSetting& b) {
  return a.mu == b.mu && a.beta == b.beta && a.c2 == b.c2 && a.c1 == b.c1 &&
         ResolveEta(a) == ResolveEta(b);
}

// Datasets depend on (seed, mu) and are shared by settings with equal mu.
inline ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  ExperimentResult out;
  std::map<double, LassoDataset> datasets;
  std::map<std::tuple<double, double, double>, ReferenceOptimum> refs;
  for (const LassoSetting& s : cfg.settings) {
    auto dit = datasets.find(s.mu);
    if (dit == datasets.end()) {
      dit = datasets.emplace(s.mu, GenLasso(cfg.n, cfg.N, s.mu, cfg.sigma_b,
                                            cfg.seed)).first;
    }
    const auto key = std::make_tuple(s.mu, s.c1, s.c2);
    auto rit = refs.find(key);
    if (rit == refs.end()) {
      rit = refs.emplace(key, ComputeReferenceOptimum(dit->second, s.c1, s.c2))
                .first;
    }
    out.trajectories.push_back(RunTrials(dit->second, s, cfg, rit->second));
    SettingSummary sum;
    sum.setting_id = s.id;
    sum.sigma = s.sigma;
    sum.eta = ResolveEta(s);
    sum.reference_value = rit->second.value;
    try {
      const double curvature = 2.0 * s.mu;
      sum.contraction = ContractionFactor(curvature, curvature, 2.0 * s.c2,
                                          s.beta, 1.0, sum.eta)
                            .contraction;
    } catch (const Error&) {
      sum.contraction.reset();
    }
    try {
      sum.convergence_iterations =
          ConvergenceIterations(out.trajectories.back(), cfg.confidence);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNeverConverged) throw;
    }
    out.summaries.push_back(sum);
  }
  for (std::size_t i = 0; i < cfg.settings.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.settings.size(); ++j) {
      if (!SameRow(cfg.settings[i], cfg.settings[j])) continue;
      const GapTrajectory& a = out.trajectories[i];
      const GapTrajectory& b = out.trajectories[j];
      std::size_t k = a.iters.size() - 1;
      for (std::size_t q = 0; q < a.iters.size(); ++q) {
        if (a.iters[q] == cfg.ttest_iteration) k = q;
      }
      TTestRow row;
      row.setting_a = a.setting_id;
      row.setting_b = b.setting_id;
      row.sigma_a = cfg.settings[i].sigma;
      row.sigma_b = cfg.settings[j].sigma;
      row.iter = a.iters[k];
      row.mean_a = a.mean[k];
      row.mean_b = b.mean[k];
      row.p_value = cfg.trials >= 2 ? WelchTTest(a.Column(k), b.Column(k)) : 1.0;
      out.ttests.push_back(row);
    }
  }
  return out;
}

inline double UtilityBoundRhs(int t, int n, double beta, double op_a,
                              double rho, double g_bound, double dist_x0,
                              double dist_by0) {
  Require(t >= 1, ErrorCode::kInvalidArgument, "T must be >= 1");
  const double td = static_cast<double>(t);
  const double rt = std::sqrt(td);
  const double nd = static_cast<double>(n);
  const double r2 = rho * rho;
  const double a2 = op_a * op_a;
  return beta * dist_by0 * dist_by0 / (2.0 * td) +
         dist_x0 * dist_x0 / (2.0 * rt) +
         (g_bound * g_bound + nd * r2) / (2.0 * rt) +
         nd * beta * beta * r2 * a2 * a2 / (2.0 * td * rt) +
         nd * beta * r2 * a2 / td;
}

// Quadratic configuration for the utility check: f is the average of
// ½(<a_i, x> - b_i)², g = c2 |y|², B = -I.
struct UtilityInstance {
  Matrix X;
  Vector b;
  ConstraintSystem cs;
  double c2 = 0.1;
  double beta = 1.0;
  double rho = 0.1;
  int T = 100;
  Vector x0;

  double Loss(const Vector& x) const {
    return 0.5 * (X * x - b).squaredNorm() / static_cast<double>(X.rows());
  }
};

inline UtilityInstance RandomUtilityInstance(Rng& rng) {
  UtilityInstance u;
  const int n = static_cast<int>(rng.UniformInt(2, 6));
  const int m = static_cast<int>(rng.UniformInt(1, n));
  const int points = 20;
  u.X = rng.NormalMatrix(points, n);
  u.b = rng.NormalVector(points);
  u.cs.A = Matrix::Zero(m, n);
  u.cs.A.leftCols(m) = Matrix::Identity(m, m);
  if (n > m) u.cs.A.rightCols(n - m) = 0.5 * rng.NormalMatrix(m, n - m);
  u.cs.B = -Matrix::Identity(m, m);
  u.cs.c = 0.5 * rng.NormalVector(m);
  u.c2 = rng.Uniform(0.05, 0.5);
  u.beta = rng.Uniform(0.5, 2.0);
  u.rho = rng.Uniform(0.05, 1.0);
  const int horizons[] = {25, 50, 100, 200, 400};
  u.T = horizons[rng.UniformInt(0, 4)];
  u.x0 = rng.NormalVector(n);
  return u;
}

struct UtilityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double g_bound = 0.0;
  bool holds = false;
  double worst_feasibility_excess = 0.0;
};

inline UtilityCheck RunUtilityCheck(const UtilityInstance& u, int trials,
                                    std::uint64_t seed) {
  const Eigen::Index n = u.X.cols();
  const Eigen::Index m = u.cs.m();
  const double eta = 1.0 / std::sqrt(static_cast<double>(u.T));
  const double points = static_cast<double>(u.X.rows());
  const AdmmProblem problem(u.cs, Regularizer::MakeElasticNet(0.0, u.c2),
                            u.beta, eta);
  const Regularizer& g = problem.regularizer();

  // Optimum of f(x) + c2 |Ax - c|².
  const Matrix& a = u.cs.A;
  const Matrix h = u.X.transpose() * u.X / points + 2.0 * u.c2 * a.transpose() * a;
  const Vector r = u.X.transpose() * u.b / points + 2.0 * u.c2 * a.transpose() * u.cs.c;
  const Vector x_star = SolveSpd(h, r);
  const Vector y_star = a * x_star - u.cs.c;
  const double f_star = u.Loss(x_star);
  const double g_star = g.Value(y_star);

  std::vector<GradientOracle> oracles;
  for (Eigen::Index i = 0; i < u.X.rows(); ++i) {
    GradientOracle o;
    o.gradient = [&u, i](const Vector& x) -> Vector {
      return (u.X.row(i).dot(x) - u.b(i)) * u.X.row(i).transpose();
    };
    oracles.push_back(std::move(o));
  }

  UtilityCheck out;
  double lhs_sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng picks = Rng::Substream(
        seed, {kUtilityStream, kFunctionStream, static_cast<std::uint64_t>(trial)});
    NoiseTape tape = NoiseTape::Recording(
        seed, {kUtilityStream, kNoiseStream, static_cast<std::uint64_t>(trial)});
    OracleState st{u.x0, Vector::Zero(m), Vector::Zero(m)};
    Vector x_sum_0 = Vector::Zero(n);  // x_0 .. x_{T-1}
    Vector x_sum_1 = Vector::Zero(n);  // x_1 .. x_T
    Vector y_sum_1 = Vector::Zero(m);  // y_1 .. y_T
    for (int t = 0; t < u.T; ++t) {
      const int pick = static_cast<int>(picks.UniformInt(0, u.X.rows() - 1));
      const GradientOracle& f = oracles[static_cast<std::size_t>(pick)];
      out.g_bound = std::max(out.g_bound, f(st.x).norm());
      x_sum_0 += st.x;
      const OracleState next = OracleAdmmIteration(st, f, u.rho, tape, problem);
      const double before = (a * next.x + u.cs.B * st.y - u.cs.c).norm();
      const double after = (a * next.x + u.cs.B * next.y - u.cs.c).norm();
      out.worst_feasibility_excess =
          std::max(out.worst_feasibility_excess,
                   (after - before) / (1.0 + before));
      st = next;
      x_sum_1 += st.x;
      y_sum_1 += st.y;
    }
    const double td = static_cast<double>(u.T);
    const Vector xb0 = x_sum_0 / td;
    const Vector xb1 = x_sum_1 / td;
    const Vector yb1 = y_sum_1 / td;
    lhs_sum += u.Loss(xb0) - f_star + g.Value(yb1) - g_star +
               0.5 * u.beta * (a * xb1 + u.cs.B * yb1 - u.cs.c).squaredNorm();
  }
  out.lhs = lhs_sum / trials;
  out.rhs = UtilityBoundRhs(u.T, static_cast<int>(n), u.beta, OperatorNorm(a),
                            u.rho, out.g_bound, (u.x0 - x_star).norm(),
                            y_star.norm());
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace padmm

#endif  // PADMM_EXPERIMENT_H_
