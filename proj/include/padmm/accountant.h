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

#ifndef PADMM_ACCOUNTANT_H_
#define PADMM_ACCOUNTANT_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "padmm/error.h"
#include "padmm/linalg.h"
#include "padmm/norms.h"

namespace padmm {

inline double ZcdpGaussian(const Vector& x, const Vector& x2, double sigma) {
  Require(sigma > 0.0, ErrorCode::kZeroSigma, "sigma must be positive");
  Require(x.size() == x2.size(), ErrorCode::kDimensionMismatch, "lengths");
  return (x - x2).squaredNorm() / (2.0 * sigma * sigma);
}

inline double RenyiGaussian(const Vector& x, const Vector& x2, double sigma,
                            double alpha) {
  Require(alpha > 1.0, ErrorCode::kBadAlpha, "alpha must exceed 1");
  return alpha * ZcdpGaussian(x, x2, sigma);
}

namespace internal {

inline constexpr double kSeriesCutoff = 1e-6;

inline void CheckTL(int t, double l) {
  Require(t >= 1, ErrorCode::kInvalidArgument, "T must be >= 1");
  Require(l > 0.0 && l <= 1.0, ErrorCode::kInvalidArgument,
          "L must lie in (0, 1]");
}

}  // namespace internal

// (1 - L) / (1 - L^T)
inline double LambdaMix(int t, double l) {
  internal::CheckTL(t, l);
  if (t == 1) return 1.0;
  const double s = -std::log(l);
  const double td = static_cast<double>(t);
  if (std::abs(1.0 - l) < internal::kSeriesCutoff) {
    return (1.0 + 0.5 * (td - 1.0) * s + (td * td - 3.0 * td + 2.0) * s * s / 12.0) /
           td;
  }
  return std::expm1(-s) / std::expm1(-td * s);
}

// (L^{-1/2} - L^{1/2}) / (L^{-T/2} - L^{T/2})
inline double Phi(int t, double l) {
  internal::CheckTL(t, l);
  if (t == 1) return 1.0;
  const double s = -std::log(l);
  const double td = static_cast<double>(t);
  if (std::abs(1.0 - l) < internal::kSeriesCutoff) {
    return (1.0 + (1.0 - td * td) * s * s / 24.0) / td;
  }
  return std::exp(-0.5 * (td - 1.0) * s) * std::expm1(-s) /
         std::expm1(-td * s);
}

// Recurrence form; equals T L^{T-1} Phi(T, L)².
inline double Gamma(int t, double l) {
  Require(t >= 2, ErrorCode::kInvalidArgument, "gamma needs T >= 2");
  internal::CheckTL(t, l);
  const double lam = LambdaMix(t, l);
  const double phi_prev = Phi(t - 1, l);
  const double td = static_cast<double>(t);
  return (td - 1.0) * std::pow(l, td - 2.0) * phi_prev * phi_prev *
             (1.0 - lam) * (1.0 - lam) +
         std::pow(l, 2.0 * (td - 1.0)) * lam * lam;
}

inline double GammaClosedForm(int t, double l) {
  const double phi = Phi(t, l);
  const double td = static_cast<double>(t);
  return td * std::pow(l, td - 1.0) * phi * phi;
}

struct PrivacyBoundReport {
  std::string variant;
  double local_dz = 0.0;
  double amplified_dz = 0.0;
  // amplified value written through the framework quantity T L^{T-1} phi².
  double amplified_dz_framework = 0.0;
  double C = 0.0;
  double C_K = 0.0;
  int T_pairs = 0;
  int total_iterations = 0;
  double sigma = 0.0;
  double delta = 0.0;
  double dist0 = 0.0;
  double eta = 0.0;
  double beta = 0.0;
  double op_norm_a = 0.0;
  std::optional<double> contraction;
  std::optional<double> kappa;
};

inline double GeneralConstant(double beta, double eta, double op_a) {
  return std::max(2.0, 3.0 / (beta * eta)) * (1.0 + beta * eta * op_a * op_a);
}

inline PrivacyBoundReport AmpBoundGeneral(double sigma, int t_pairs,
                                          double dist0, double beta,
                                          double eta, double op_a) {
  Require(sigma > 0.0, ErrorCode::kZeroSigma, "sigma must be positive");
  Require(t_pairs >= 1, ErrorCode::kInvalidArgument, "T_pairs must be >= 1");
  Require(beta > 0.0 && eta > 0.0 && op_a >= 0.0 && dist0 >= 0.0,
          ErrorCode::kInvalidArgument, "bad bound inputs");
  PrivacyBoundReport r;
  r.variant = "general";
  r.C = GeneralConstant(beta, eta, op_a);
  r.C_K = std::max(2.0, 3.0 / (eta * beta)) / (2.0 * sigma * sigma);
  r.T_pairs = t_pairs;
  r.total_iterations = 2 * t_pairs;
  r.sigma = sigma;
  r.dist0 = dist0;
  r.eta = eta;
  r.beta = beta;
  r.op_norm_a = op_a;
  r.local_dz = dist0 * dist0 / (2.0 * sigma * sigma);
  r.amplified_dz = r.C * r.local_dz / static_cast<double>(t_pairs);
  r.amplified_dz_framework =
      r.C * r.local_dz * (t_pairs >= 2 ? GammaClosedForm(t_pairs, 1.0) : 1.0);
  return r;
}

inline PrivacyBoundReport FirstUserBound(double sigma, double delta,
                                         double eta, double beta, double op_a,
                                         int t_pairs) {
  Require(delta >= 0.0, ErrorCode::kInvalidArgument, "delta must be >= 0");
  PrivacyBoundReport r =
      AmpBoundGeneral(sigma, t_pairs, eta * delta, beta, eta, op_a);
  r.variant = "first_user";
  r.delta = delta;
  r.total_iterations = 2 * t_pairs + 1;
  r.local_dz = eta * eta * delta * delta / (2.0 * sigma * sigma);
  r.amplified_dz = r.C / static_cast<double>(t_pairs) * r.local_dz;
  r.amplified_dz_framework =
      r.C * r.local_dz * (t_pairs >= 2 ? GammaClosedForm(t_pairs, 1.0) : 1.0);
  return r;
}

inline PrivacyBoundReport AmpBoundSc(double sigma, int t_pairs, double dist0,
                                     double beta, double eta, double op_a,
                                     const ScParameters& sc) {
  Require(sigma > 0.0, ErrorCode::kZeroSigma, "sigma must be positive");
  Require(t_pairs >= 1, ErrorCode::kInvalidArgument, "T_pairs must be >= 1");
  Require(dist0 >= 0.0 && op_a >= 0.0, ErrorCode::kInvalidArgument,
          "bad bound inputs");
  const ContractionReport cr =
      ContractionFactor(sc.nu, sc.mu, sc.mu_g, beta, sc.op_ab, eta);
  const double kappa = ScKappa(eta, sc.nu, sc.mu);
  const double lc = cr.contraction;
  const double tp = static_cast<double>(t_pairs);
  PrivacyBoundReport r;
  r.variant = "strongly_convex";
  r.C = std::max(2.0 / kappa, 3.0 / (eta * beta)) *
        (kappa + eta * beta * op_a * op_a);
  r.C_K = lc / (2.0 * sigma * sigma) * std::max(2.0 / kappa, 3.0 / (eta * beta));
  r.T_pairs = t_pairs;
  r.total_iterations = 2 * t_pairs;
  r.sigma = sigma;
  r.dist0 = dist0;
  r.eta = eta;
  r.beta = beta;
  r.op_norm_a = op_a;
  r.contraction = lc;
  r.kappa = kappa;
  r.local_dz = dist0 * dist0 / (2.0 * sigma * sigma);
  r.amplified_dz = r.C * std::pow(lc, 2.0 * tp - 1.0) / tp * r.local_dz;
  // The framework contraction is the square of the per-iteration one.
  r.amplified_dz_framework =
      r.C * lc * r.local_dz *
      (t_pairs >= 2 ? GammaClosedForm(t_pairs, lc * lc) : 1.0);
  return r;
}

inline PrivacyBoundReport FirstUserBoundSc(double sigma, double delta,
                                           double eta, double beta,
                                           double op_a, int t_pairs,
                                           const ScParameters& sc) {
  Require(delta >= 0.0, ErrorCode::kInvalidArgument, "delta must be >= 0");
  PrivacyBoundReport r =
      AmpBoundSc(sigma, t_pairs, eta * delta, beta, eta, op_a, sc);
  r.variant = "strongly_convex_first_user";
  r.delta = delta;
  r.total_iterations = 2 * t_pairs + 1;
  r.local_dz = eta * eta * delta * delta / (2.0 * sigma * sigma);
  const double tp = static_cast<double>(t_pairs);
  r.amplified_dz = r.C * std::pow(*r.contraction, 2.0 * tp - 1.0) / tp *
                   r.local_dz;
  r.amplified_dz_framework =
      r.C * *r.contraction * r.local_dz *
      (t_pairs >= 2 ? GammaClosedForm(t_pairs, *r.contraction * *r.contraction)
                    : 1.0);
  return r;
}

enum class SchemeKind { kPermutation, kRandomStopping };

struct AllUsersScheme {
  SchemeKind kind = SchemeKind::kPermutation;
  int users = 1;
};

// E[1/L] where L counts iterations from the user's step to the end; a user
// whose data is never used contributes 0.
inline double ExpectedInverseL(const AllUsersScheme& scheme, int user_index) {
  const int n = scheme.users;
  Require(n >= 1, ErrorCode::kInvalidArgument, "need at least one user");
  Require(user_index >= 1 && user_index <= n, ErrorCode::kInvalidArgument,
          "user index out of range");
  double total = 0.0;
  if (scheme.kind == SchemeKind::kPermutation) {
    for (int l = 1; l <= n; ++l) total += 1.0 / l;
    return total / n;
  }
  const int first = n / 2 + 1;
  const int count = n - first + 1;
  for (int stop = first; stop <= n; ++stop) {
    if (stop >= user_index) total += 1.0 / (stop - user_index + 1);
  }
  return total / count;
}

inline double AllUsersBound(double alpha, double c_assumption,
                            const AllUsersScheme& scheme) {
  Require(alpha > 1.0, ErrorCode::kBadAlpha, "alpha must exceed 1");
  Require(c_assumption >= 0.0, ErrorCode::kInvalidArgument, "C must be >= 0");
  if (c_assumption > 1.0 / (alpha * (alpha - 1.0))) {
    throw Error(ErrorCode::kWeakConvexityPreconditionViolated,
                "C exceeds 1/(alpha (alpha - 1))");
  }
  double worst = 0.0;
  for (int u = 1; u <= scheme.users; ++u) {
    worst = std::max(worst, ExpectedInverseL(scheme, u));
  }
  return 2.0 * alpha * c_assumption * worst;
}

}  // namespace padmm

#endif  // PADMM_ACCOUNTANT_H_
