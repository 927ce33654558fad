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

#include "padmm/experiment.h"

#include <cmath>

#include <gtest/gtest.h>

namespace padmm {
namespace {

TEST(GenLassoTest, RowNormsAndPlantedSignal) {
  const LassoDataset d = GenLasso(12, 40, 0.36, 0.0, 7);
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    EXPECT_NEAR(d.X.row(i).norm(), 0.6, 1e-12);
  }
  EXPECT_EQ((d.planted.array() == 3.0).count(), 2);
  EXPECT_NEAR(d.Loss(d.planted), 0.0, 1e-20);
  EXPECT_LE((d.X * d.planted - d.b).norm(), 1e-13);
}

TEST(GenLassoTest, Deterministic) {
  const LassoDataset a = GenLasso(10, 30, 0.5, 0.01, 9);
  const LassoDataset b = GenLasso(10, 30, 0.5, 0.01, 9);
  EXPECT_EQ(a.X, b.X);
  EXPECT_EQ(a.b, b.b);
  EXPECT_NE(a.X, GenLasso(10, 30, 0.5, 0.01, 10).X);
}

TEST(GenLassoTest, RejectsSmallDimension) {
  EXPECT_THROW(GenLasso(4, 10, 0.5, 0.0, 1), Error);
}

TEST(GenLassoTest, SampledGradientsAverageToFullGradient) {
  const LassoDataset d = GenLasso(6, 25, 0.5, 0.1, 3);
  const Vector x = Vector::LinSpaced(6, -1.0, 2.0);
  Vector acc = Vector::Zero(6);
  for (int i = 0; i < d.N; ++i) acc += SampleOracle(d, i)(x);
  EXPECT_LE((acc / d.N - d.LossGradient(x)).norm(), 1e-12);
}

TEST(ReferenceOptimumTest, RidgeClosedForm) {
  const LassoDataset d = GenLasso(8, 60, 0.5, 0.01, 11);
  const double c2 = 0.1;
  const ReferenceOptimum ref = ComputeReferenceOptimum(d, 0.0, c2);
  const Matrix h = 2.0 * d.gram + 2.0 * c2 * Matrix::Identity(8, 8);
  const Vector x = h.ldlt().solve(2.0 * d.xtb);
  EXPECT_LE((ref.x - x).norm(), 1e-6);
}

TEST(ReferenceOptimumTest, ProbeCertificate) {
  const LassoDataset d = GenLasso(10, 80, 0.25, 0.01, 12);
  const ReferenceOptimum ref = ComputeReferenceOptimum(d, 0.05, 0.1);
  EXPECT_LE(ref.x_rel_diff, 1e-6);
  Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const Vector probe = ref.x + rng.NormalVector(10) * rng.Uniform(1e-3, 2.0);
    EXPECT_LE(ref.value, LassoObjective(d, 0.05, 0.1, probe));
  }
}

TEST(ReferenceOptimumTest, PlantedNoiselessRecovery) {
  const LassoDataset d = GenLasso(5, 400, 1.0, 0.0, 14);
  const ReferenceOptimum ref = ComputeReferenceOptimum(d, 0.0, 0.0);
  EXPECT_LE((ref.x - d.planted).norm(), 1e-6);
}

ExperimentConfig SmallConfig(double sigma) {
  ExperimentConfig cfg;
  cfg.trials = 6;
  cfg.iterations = 30;
  cfg.n = 10;
  cfg.N = 60;
  LassoSetting s;
  s.id = "row2";
  s.mu = 0.09;
  s.beta = 0.5;
  s.sigma = sigma;
  cfg.settings = {s};
  return cfg;
}

TEST(RunTrialsTest, DeterministicAndShaped) {
  const ExperimentConfig cfg = SmallConfig(0.2);
  const LassoDataset d = GenLasso(cfg.n, cfg.N, 0.09, cfg.sigma_b, cfg.seed);
  const ReferenceOptimum ref = ComputeReferenceOptimum(d, 0.0, 0.1);
  const GapTrajectory a = RunTrials(d, cfg.settings[0], cfg, ref);
  const GapTrajectory b = RunTrials(d, cfg.settings[0], cfg, ref);
  ASSERT_EQ(a.gaps.size(), 6u);
  ASSERT_EQ(a.iters.size(), 30u);
  EXPECT_EQ(a.gaps, b.gaps);
  EXPECT_EQ(a.mean, b.mean);
  for (const std::vector<double>& row : a.gaps) {
    for (double g : row) EXPECT_TRUE(std::isfinite(g));
  }
}

TEST(RunTrialsTest, NoiselessGapDecreases) {
  ExperimentConfig cfg = SmallConfig(0.0);
  cfg.iterations = 60;
  const LassoDataset d = GenLasso(cfg.n, cfg.N, 0.09, cfg.sigma_b, cfg.seed);
  const ReferenceOptimum ref = ComputeReferenceOptimum(d, 0.0, 0.1);
  const GapTrajectory t = RunTrials(d, cfg.settings[0], cfg, ref);
  EXPECT_LT(t.mean.back(), t.mean.front());
}

TEST(RunTrialsTest, GapCadence) {
  ExperimentConfig cfg = SmallConfig(0.1);
  cfg.gap_every = 7;
  const LassoDataset d = GenLasso(cfg.n, cfg.N, 0.09, cfg.sigma_b, cfg.seed);
  const ReferenceOptimum ref = ComputeReferenceOptimum(d, 0.0, 0.1);
  const GapTrajectory t = RunTrials(d, cfg.settings[0], cfg, ref);
  EXPECT_EQ(t.iters, (std::vector<int>{7, 14, 21, 28}));
}

TEST(WelchTest, Examples) {
  const std::vector<double> s = {1.0, 2.0, 4.0, 7.0};
  EXPECT_EQ(WelchTTest(s, s), 1.0);
  std::vector<double> lo;
  std::vector<double> hi;
  for (int i = 0; i < 100; ++i) {
    lo.push_back(1e-9 * (i % 3));
    hi.push_back(10.0 + 1e-9 * (i % 5));
  }
  EXPECT_LT(WelchTTest(lo, hi), 1e-6);
  EXPECT_THROW(WelchTTest({1.0}, s), Error);
}

TEST(WelchTest, FrozenReferenceValues) {
  EXPECT_NEAR(WelchTTest({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10, 12}),
              0.04928433820673049, 1e-12);
  EXPECT_NEAR(WelchTTest({0.5, 1.5, 0.7, 1.1}, {1.0, 1.2, 0.9, 1.3, 1.25, 0.95, 1.1}),
              0.5544092836391181, 1e-12);
}

TEST(WelchTest, Symmetric) {
  Rng rng(15);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> a;
    std::vector<double> b;
    for (int i = 0; i < 10; ++i) a.push_back(rng.Normal());
    for (int i = 0; i < 13; ++i) b.push_back(0.5 + 2.0 * rng.Normal());
    EXPECT_DOUBLE_EQ(WelchTTest(a, b), WelchTTest(b, a));
  }
}

GapTrajectory Synthetic(int iterations, double (*value)(int, int)) {
  GapTrajectory t;
  for (int k = 1; k <= iterations; ++k) t.iters.push_back(k);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> row;
    for (int k = 1; k <= iterations; ++k) row.push_back(value(k, trial));
    t.gaps.push_back(row);
  }
  return t;
}

TEST(ConvergenceTest, ConstantTrajectory) {
  const GapTrajectory t = Synthetic(20, [](int, int) { return 2.0; });
  EXPECT_EQ(ConvergenceIterations(t), 1);
}

TEST(ConvergenceTest, DecreasingTrajectoryNeverConverges) {
  const GapTrajectory t = Synthetic(
      40, [](int k, int trial) { return 100.0 - k + 1e-6 * trial; });
  try {
    ConvergenceIterations(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNeverConverged);
  }
}

TEST(ConvergenceTest, FlattensAtKnownIteration) {
  const GapTrajectory t = Synthetic(40, [](int k, int trial) {
    return std::max(0.0, 12.0 - k) + 0.01 * (trial % 4);
  });
  EXPECT_EQ(ConvergenceIterations(t), 12);
}

TEST(UtilityBoundTest, Examples) {
  EXPECT_NEAR(UtilityBoundRhs(100, 4, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0), 0.347, 1e-12);
  EXPECT_EQ(UtilityBoundRhs(50, 3, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0), 0.0);
  EXPECT_NEAR(UtilityBoundRhs(400, 3, 1.0, 2.0, 0.0, 1.5, 2.0, 0.0),
              0.5 * UtilityBoundRhs(100, 3, 1.0, 2.0, 0.0, 1.5, 2.0, 0.0), 1e-15);
}

TEST(UtilityCheckTest, HoldsOnFixedInstance) {
  Rng rng(16);
  const UtilityInstance u = RandomUtilityInstance(rng);
  const UtilityCheck c = RunUtilityCheck(u, 10, 17);
  EXPECT_TRUE(std::isfinite(c.lhs));
  EXPECT_GT(c.rhs, 0.0);
  EXPECT_LE(c.worst_feasibility_excess, 1e-9);
  const UtilityCheck again = RunUtilityCheck(u, 10, 17);
  EXPECT_EQ(c.lhs, again.lhs);
}

TEST(RunExperimentTest, SharedRowsProduceTTests) {
  ExperimentConfig cfg = SmallConfig(0.05);
  LassoSetting other = cfg.settings[0];
  other.id = "row2_noisy";
  other.sigma = 0.5;
  cfg.settings.push_back(other);
  cfg.ttest_iteration = 30;
  const ExperimentResult r = RunExperiment(cfg);
  ASSERT_EQ(r.trajectories.size(), 2u);
  ASSERT_EQ(r.ttests.size(), 1u);
  EXPECT_EQ(r.ttests[0].iter, 30);
  EXPECT_LT(r.ttests[0].mean_a, r.ttests[0].mean_b);
  ASSERT_TRUE(r.summaries[0].contraction.has_value());
  EXPECT_NEAR(*r.summaries[0].contraction, 0.9147, 5e-4);
}

}  // namespace
}  // namespace padmm
