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

#include "padmm/accountant.h"

#include <cmath>

#include <gtest/gtest.h>

namespace padmm {
namespace {

Vector Offset(double norm) {
  Vector v = Vector::Zero(3);
  v(1) = norm;
  return v;
}

TEST(GaussianDivergenceTest, Zcdp) {
  const Vector x = Vector::LinSpaced(3, -1.0, 1.0);
  EXPECT_EQ(ZcdpGaussian(x, x, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(ZcdpGaussian(x, x + Offset(2.0), 1.0), 2.0);
  EXPECT_DOUBLE_EQ(ZcdpGaussian(x, x + Offset(2.0), 2.0), 0.5);
  EXPECT_THROW(ZcdpGaussian(x, x, 0.0), Error);
}

TEST(GaussianDivergenceTest, Renyi) {
  const Vector x = Vector::Zero(3);
  EXPECT_DOUBLE_EQ(RenyiGaussian(x, Offset(1.0), 1.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(RenyiGaussian(x, Offset(3.0), 3.0, 3.0), 1.5);
  EXPECT_NEAR(RenyiGaussian(x, Offset(1.0), 1.0, 1.0 + 1e-12),
              ZcdpGaussian(x, Offset(1.0), 1.0), 1e-11);
  try {
    RenyiGaussian(x, x, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadAlpha);
  }
}

TEST(GaussianDivergenceTest, RenyiOverAlphaIsZcdp) {
  const Vector a = Vector::LinSpaced(3, 0.0, 2.0);
  const Vector b = Vector::LinSpaced(3, 1.0, -1.0);
  for (double alpha = 1.25; alpha < 20.0; alpha += 0.75) {
    EXPECT_NEAR(RenyiGaussian(a, b, 0.7, alpha) / alpha, ZcdpGaussian(a, b, 0.7),
                1e-12);
  }
}

TEST(MixTest, PhiExamples) {
  EXPECT_EQ(Phi(1, 0.3), 1.0);
  EXPECT_NEAR(Phi(5, 1.0), 0.2, 1e-15);
  EXPECT_NEAR(Phi(3, 0.5), 2.0 / 7.0, 1e-15);
}

TEST(MixTest, LambdaExamples) {
  EXPECT_NEAR(LambdaMix(2, 0.5), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(LambdaMix(4, 1.0), 0.25, 1e-15);
  EXPECT_EQ(LambdaMix(1, 0.9), 1.0);
}

TEST(MixTest, GammaExamples) {
  EXPECT_NEAR(Gamma(7, 1.0), 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(Gamma(3, 0.5), GammaClosedForm(3, 0.5), 1e-12);
  EXPECT_NEAR(Gamma(2, 1.0), 0.5, 1e-15);
}

TEST(MixTest, SeriesMatchesAccurateFormula) {
  for (int t : {2, 5, 30}) {
    for (double d : {5e-7, 1e-8, 1e-12}) {
      const double s = std::log1p(-d);
      const double lambda = std::expm1(s) / std::expm1(t * s);
      const double phi = std::exp(0.5 * (t - 1) * s) * lambda;
      EXPECT_NEAR(LambdaMix(t, 1.0 - d), lambda, 1e-12 * lambda);
      EXPECT_NEAR(Phi(t, 1.0 - d), phi, 1e-12 * phi);
    }
  }
}

double PhiDirect(int t, double l) {
  return (std::pow(l, -0.5) - std::pow(l, 0.5)) /
         (std::pow(l, -0.5 * t) - std::pow(l, 0.5 * t));
}

TEST(MixTest, GridProperties) {
  for (int t = 2; t <= 50; ++t) {
    for (int k = 1; k <= 100; ++k) {
      const double l = 0.01 * k;
      const double phi = Phi(t, l);
      EXPECT_LE(phi, 1.0 / t * (1.0 + 1e-12)) << t << " " << l;
      const double closed = GammaClosedForm(t, l);
      EXPECT_NEAR(Gamma(t, l), closed, 1e-12 * std::max(closed, 1e-300))
          << t << " " << l;
      if (k < 100 && std::pow(l, -0.5 * t) < 1e150) {
        EXPECT_NEAR(phi, PhiDirect(t, l), 1e-10 * phi);
      }
    }
  }
}

TEST(BoundTest, GeneralExamples) {
  EXPECT_DOUBLE_EQ(GeneralConstant(1.0, 1.0, 1.0), 6.0);
  const PrivacyBoundReport r = AmpBoundGeneral(1.0, 4, 1.0, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(r.amplified_dz, 0.75);
  EXPECT_EQ(r.T_pairs, 4);
  EXPECT_EQ(r.total_iterations, 8);
  EXPECT_NEAR(r.amplified_dz_framework, r.amplified_dz, 1e-12);
  const PrivacyBoundReport one = AmpBoundGeneral(1.3, 1, 0.8, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(one.amplified_dz, 6.0 * 0.64 / (2.0 * 1.69));
  EXPECT_LE(one.amplified_dz, one.local_dz * one.C);
}

TEST(BoundTest, ZeroSigma) {
  try {
    AmpBoundGeneral(0.0, 4, 1.0, 1.0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroSigma);
  }
}

TEST(BoundTest, FirstUserExamples) {
  const PrivacyBoundReport zero = FirstUserBound(1.0, 0.0, 1.0, 1.0, 1.0, 3);
  EXPECT_EQ(zero.local_dz, 0.0);
  EXPECT_EQ(zero.amplified_dz, 0.0);
  const PrivacyBoundReport r = FirstUserBound(1.0, 1.0, 1.0, 1.0, 1.0, 2);
  EXPECT_DOUBLE_EQ(r.local_dz, 0.5);
  EXPECT_DOUBLE_EQ(r.C, 6.0);
  EXPECT_DOUBLE_EQ(r.amplified_dz, 1.5);
  EXPECT_EQ(r.total_iterations, 5);
}

const ScParameters kRowTwo{0.18, 0.18, 0.2, 1.0};

TEST(BoundTest, StronglyConvexBeatsGeneral) {
  const PrivacyBoundReport sc = AmpBoundSc(1.0, 10, 1.0, 0.5, 4.81, 1.0, kRowTwo);
  const PrivacyBoundReport general = AmpBoundGeneral(1.0, 10, 1.0, 0.5, 4.81, 1.0);
  ASSERT_TRUE(sc.contraction.has_value());
  EXPECT_NEAR(*sc.contraction, 0.9147, 5e-4);
  EXPECT_LT(sc.amplified_dz, general.amplified_dz);
}

TEST(BoundTest, StronglyConvexSinglePair) {
  const PrivacyBoundReport r = AmpBoundSc(0.7, 1, 1.1, 0.5, 4.81, 1.0, kRowTwo);
  EXPECT_NEAR(r.amplified_dz, r.C * *r.contraction / (2.0 * 0.49) * 1.21, 1e-12);
  EXPECT_EQ(AmpBoundSc(0.7, 3, 0.0, 0.5, 4.81, 1.0, kRowTwo).amplified_dz, 0.0);
}

TEST(BoundTest, StronglyConvexEtaOutside) {
  try {
    AmpBoundSc(1.0, 2, 1.0, 0.5, 9.0, 1.0, kRowTwo);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEtaOutsideInterval);
  }
}

TEST(BoundTest, Monotonicity) {
  for (int t = 1; t < 30; ++t) {
    EXPECT_LT(AmpBoundGeneral(1.0, t + 1, 1.0, 0.7, 1.2, 1.5).amplified_dz,
              AmpBoundGeneral(1.0, t, 1.0, 0.7, 1.2, 1.5).amplified_dz);
    const PrivacyBoundReport a = AmpBoundSc(1.0, t, 1.0, 0.5, 4.81, 1.0, kRowTwo);
    const PrivacyBoundReport b =
        AmpBoundSc(1.0, t + 1, 1.0, 0.5, 4.81, 1.0, kRowTwo);
    const double l = *a.contraction;
    EXPECT_LE(b.amplified_dz, a.amplified_dz * l * l * (1.0 + 1e-12));
  }
  for (double s = 0.5; s < 5.0; s += 0.5) {
    EXPECT_LT(AmpBoundGeneral(s + 0.5, 3, 1.0, 0.7, 1.2, 1.5).amplified_dz,
              AmpBoundGeneral(s, 3, 1.0, 0.7, 1.2, 1.5).amplified_dz);
  }
}

TEST(AllUsersTest, ExpectedInverseL) {
  for (int u = 1; u <= 4; ++u) {
    EXPECT_NEAR(ExpectedInverseL({SchemeKind::kPermutation, 4}, u), 25.0 / 48.0,
                1e-15);
  }
  EXPECT_NEAR(ExpectedInverseL({SchemeKind::kRandomStopping, 4}, 1), 7.0 / 24.0,
              1e-15);
  EXPECT_EQ(ExpectedInverseL({SchemeKind::kPermutation, 1}, 1), 1.0);
}

TEST(AllUsersTest, UnusedUserContributesZero) {
  // Stops fall in {3, 4}; user 4 is reached only when the stop is 4.
  EXPECT_NEAR(ExpectedInverseL({SchemeKind::kRandomStopping, 4}, 4), 0.5, 1e-15);
}

TEST(AllUsersTest, Bound) {
  EXPECT_DOUBLE_EQ(AllUsersBound(3.0, 0.1, {SchemeKind::kPermutation, 1}), 0.6);
  EXPECT_NO_THROW(AllUsersBound(2.0, 0.5, {SchemeKind::kPermutation, 3}));
  try {
    AllUsersBound(2.0, 0.6, {SchemeKind::kPermutation, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWeakConvexityPreconditionViolated);
  }
}

}  // namespace
}  // namespace padmm
