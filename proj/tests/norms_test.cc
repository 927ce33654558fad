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

#include "padmm/norms.h"

#include <cmath>

#include <gtest/gtest.h>

#include "padmm/engine.h"
#include "padmm/instances.h"

namespace padmm {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

TEST(CustomNormTest, Zero) {
  const CustomNormParams p{0.5, 2.0, Matrix::Ones(2, 3)};
  EXPECT_EQ(CustomNormSq(Vector::Zero(3), Vector::Zero(2), p), 0.0);
}

TEST(CustomNormTest, CancellationLeavesXPart) {
  Rng rng(1);
  const CustomNormParams p{0.5, 2.0, rng.NormalMatrix(2, 3)};
  const Vector x = rng.NormalVector(3);
  EXPECT_NEAR(CustomNormSq(x, p.beta * (p.A * x), p), x.squaredNorm(), 1e-14);
}

TEST(CustomNormTest, Homogeneity) {
  Rng rng(2);
  const CustomNormParams p{0.8, 1.3, rng.NormalMatrix(2, 3)};
  const Vector x = rng.NormalVector(3);
  const Vector l = rng.NormalVector(2);
  EXPECT_NEAR(CustomNormSq(-3.0 * x, -3.0 * l, p), 9.0 * CustomNormSq(x, l, p),
              1e-12);
}

TEST(ScNormTest, Zero) {
  const ScNormParams p{0.5, 1.0, Matrix::Ones(1, 2), 1.0, 0.5};
  EXPECT_EQ(ScNormSq(Vector::Zero(2), Vector::Zero(1), p), 0.0);
}

TEST(ScNormTest, KappaZeroIsRejected) {
  const double nu = 0.7;
  EXPECT_EQ(CodeOf([&] { ScKappa(1.0 / nu, nu, nu); }), ErrorCode::kBadEta);
}

TEST(ScNormTest, EtaOutsideRangeIsRejected) {
  EXPECT_EQ(CodeOf([] { ScKappa(2.0, 0.5, 0.5); }), ErrorCode::kBadEta);
  EXPECT_EQ(CodeOf([] { ScKappa(0.0, 0.5, 0.5); }), ErrorCode::kBadEta);
}

TEST(ScNormTest, CancellationLeavesKappaTerm) {
  Rng rng(3);
  const ScNormParams p{1.2, 0.9, rng.NormalMatrix(2, 3), 1.0, 0.4};
  const double kappa = (1.0 - 2.0 * 1.2 * 0.4 / 1.4) + (2.0 / 1.4 - 1.2) / 1.2;
  const Vector x = rng.NormalVector(3);
  EXPECT_NEAR(ScKappa(p), kappa, 1e-14);
  EXPECT_NEAR(ScNormSq(x, p.beta * (p.A * x), p), kappa * x.squaredNorm(), 1e-12);
}

TEST(EtaIntervalTest, SmallCurvatureRow) {
  const EtaInterval iv = ComputeEtaInterval(0.02, 0.02, 0.2, 0.15, 1.0);
  EXPECT_NEAR(iv.low, 36.603, 5e-4);
  EXPECT_NEAR(iv.high, 50.0, 1e-12);
  EXPECT_NEAR(iv.mid(), 43.30, 5e-3);
}

TEST(EtaIntervalTest, MidCurvatureRow) {
  EXPECT_NEAR(ComputeEtaInterval(0.045, 0.045, 0.2, 0.3, 1.0).mid(), 20.0, 1e-9);
}

TEST(EtaIntervalTest, LargeRegularizerLeavesFirstTerm) {
  const double nu = 0.9;
  const double mu = 0.3;
  const double s = nu + mu;
  const double first = 4.0 / (s + std::sqrt(s * s + 8.0 * nu * mu));
  EXPECT_DOUBLE_EQ(ComputeEtaInterval(nu, mu, 1e12, 1.0, 1.0).low, first);
}

TEST(EtaIntervalTest, NonemptyForValidInputs) {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const double nu = rng.Uniform(1e-3, 10.0);
    const double mu = nu * rng.Uniform(1e-3, 1.0);
    const EtaInterval iv = ComputeEtaInterval(nu, mu, rng.Uniform(1e-6, 5.0),
                                              rng.Uniform(0.01, 5.0),
                                              rng.Uniform(0.01, 5.0));
    EXPECT_LT(iv.low, iv.high);
  }
}

TEST(EtaIntervalTest, RejectsInvalidCurvature) {
  EXPECT_EQ(CodeOf([] { ComputeEtaInterval(0.5, 1.0, 0.2, 1.0, 1.0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ComputeEtaInterval(1.0, 0.0, 0.2, 1.0, 1.0); }),
            ErrorCode::kInvalidArgument);
}

TEST(ContractionTest, TableRowsTwoToFour) {
  EXPECT_NEAR(ContractionFactor(0.18, 0.18, 0.2, 0.5, 1.0, 4.81).contraction,
              0.9147, 5e-4);
  EXPECT_NEAR(ContractionFactor(0.045, 0.045, 0.2, 0.3, 1.0, 20.0).contraction,
              0.857, 5e-4);
  EXPECT_NEAR(ContractionFactor(0.02, 0.02, 0.2, 0.15, 1.0, 43.30).contraction,
              0.799, 5e-4);
}

TEST(ContractionTest, HandEvaluatedRowTwo) {
  const double nu = 0.18;
  const double beta = 0.5;
  const double eta = 4.81;
  const double h = 1.0 / nu;
  const double sq = 1.0 / (1.0 + 0.25 * beta * (h - eta));
  const double rp = ((1.0 - eta * nu) + (h - eta) / eta) / (1.0 - (h - eta) / eta);
  const ContractionReport r = ContractionFactor(nu, nu, 0.2, beta, 1.0, eta);
  EXPECT_NEAR(r.S / r.Q, sq, 1e-12);
  EXPECT_NEAR(r.R / r.P, rp, 1e-12);
  EXPECT_NEAR(r.R / r.P, 0.342, 1e-3);
}

TEST(ContractionTest, TableRowConvention) {
  const ContractionReport r = TableRowReport({0.09, 0.5, 0.1, 0.0});
  EXPECT_NEAR(r.eta_mid, 4.81, 0.01);
  EXPECT_NEAR(r.contraction, 0.91, 0.01);
  const ContractionReport first = TableRowReport({0.25, 0.9, 0.1, 0.0});
  EXPECT_NEAR(first.eta_mid, 1.7531, 1e-4);
  EXPECT_NEAR(first.contraction, 0.9474, 1e-4);
}

TEST(ContractionTest, RejectsEtaOutside) {
  EXPECT_EQ(CodeOf([] { ContractionFactor(0.18, 0.18, 0.2, 0.5, 1.0, 10.0); }),
            ErrorCode::kEtaOutsideInterval);
  const EtaInterval iv = ComputeEtaInterval(0.18, 0.18, 0.2, 0.5, 1.0);
  EXPECT_EQ(CodeOf([&] { ContractionFactor(0.18, 0.18, 0.2, 0.5, 1.0, iv.low); }),
            ErrorCode::kEtaOutsideInterval);
}

InstanceOptions RandomOptions(Rng& rng, int k, bool sc) {
  InstanceOptions opt;
  opt.n = static_cast<int>(rng.UniformInt(1, 6));
  opt.m = static_cast<int>(rng.UniformInt(1, opt.n));
  opt.standard_form = k % 3 != 0;
  opt.strongly_convex = sc;
  opt.regularizer =
      k % 2 == 0 ? RegularizerChoice::kQuadratic : RegularizerChoice::kElasticNet;
  opt.num_losses = 1;
  return opt;
}

TEST(NonExpansionTest, ThousandConvexInstances) {
  Rng rng(42);
  for (int k = 0; k < 1000; ++k) {
    const QuadraticInstance inst = RandomInstance(rng, RandomOptions(rng, k, false));
    const AdmmProblem p = inst.Problem();
    const GradientOracle f = inst.losses[0].Oracle();
    const AdmmState a{rng.NormalVector(p.n()), rng.NormalVector(p.m())};
    const AdmmState b{rng.NormalVector(p.n()), rng.NormalVector(p.m())};
    const AdmmState a1 = AdmmIteration(a, f, p);
    const AdmmState b1 = AdmmIteration(b, f, p);
    const CustomNormParams np{p.eta(), p.beta(), p.A()};
    const double in = CustomNormSq(a.x - b.x, a.lambda - b.lambda, np);
    const double out = CustomNormSq(a1.x - b1.x, a1.lambda - b1.lambda, np);
    ASSERT_LE(out, in * (1.0 + 1e-9)) << "instance " << k;
  }
}

TEST(ContractionTest, FiveHundredScInstances) {
  Rng rng(43);
  for (int k = 0; k < 500; ++k) {
    const QuadraticInstance inst = RandomInstance(rng, RandomOptions(rng, k, true));
    const AdmmProblem p = inst.Problem();
    const GradientOracle f = inst.losses[0].Oracle();
    const ContractionReport r = ContractionFactor(inst.nu, inst.mu, inst.mu_g,
                                                  inst.beta, inst.op_ab, inst.eta);
    const AdmmState a{rng.NormalVector(p.n()), rng.NormalVector(p.m())};
    const AdmmState b{rng.NormalVector(p.n()), rng.NormalVector(p.m())};
    const AdmmState a1 = AdmmIteration(a, f, p);
    const AdmmState b1 = AdmmIteration(b, f, p);
    const ScNormParams np{p.eta(), p.beta(), p.A(), inst.nu, inst.mu};
    const double in = ScNormSq(a.x - b.x, a.lambda - b.lambda, np);
    const double out = ScNormSq(a1.x - b1.x, a1.lambda - b1.lambda, np);
    ASSERT_LE(out, r.contraction * in * (1.0 + 1e-9)) << "instance " << k;
  }
}

TEST(GradientStepTest, NonExpansiveAndScBound) {
  Rng rng(44);
  for (int k = 0; k < 300; ++k) {
    const bool sc = k % 2 == 1;
    const QuadraticInstance inst = RandomInstance(rng, RandomOptions(rng, k, sc));
    const QuadraticFunction& f = inst.losses[0];
    const Eigen::Index n = f.q.size();
    const double eta = sc ? rng.Uniform(0.01, 2.0 / (inst.nu + inst.mu))
                          : inst.eta;
    const Vector x = rng.NormalVector(n);
    const Vector xp = rng.NormalVector(n);
    const Vector step = (x - eta * f.Gradient(x)) - (xp - eta * f.Gradient(xp));
    const double dx = (x - xp).squaredNorm();
    if (!sc) {
      EXPECT_LE(step.norm(), (x - xp).norm() * (1.0 + 1e-12));
      continue;
    }
    const double dg = (f.Gradient(x) - f.Gradient(xp)).squaredNorm();
    const double s = inst.nu + inst.mu;
    const double rhs = (1.0 - 2.0 * eta * inst.nu * inst.mu / s) * dx +
                       eta * (eta - 2.0 / s) * dg;
    EXPECT_LE(step.squaredNorm(), rhs + 1e-8);
  }
}

}  // namespace
}  // namespace padmm
