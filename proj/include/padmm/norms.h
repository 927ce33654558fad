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

#ifndef PADMM_NORMS_H_
#define PADMM_NORMS_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "padmm/error.h"
#include "padmm/linalg.h"

namespace padmm {

struct CustomNormParams {
  double eta = 1.0;
  double beta = 1.0;
  Matrix A;
};

// |x|² + (eta/beta)|lambda - beta A x|²
inline double CustomNormSq(const Vector& x, const Vector& lambda,
                           const CustomNormParams& p) {
  Require(p.eta > 0.0 && p.beta > 0.0, ErrorCode::kInvalidArgument,
          "eta and beta must be positive");
  Require(x.size() == p.A.cols() && lambda.size() == p.A.rows(),
          ErrorCode::kDimensionMismatch, "custom norm dimensions");
  return x.squaredNorm() +
         (p.eta / p.beta) * (lambda - p.beta * (p.A * x)).squaredNorm();
}

struct ScNormParams {
  double eta = 1.0;
  double beta = 1.0;
  Matrix A;
  double nu = 1.0;
  double mu = 1.0;
};

inline double ScKappa(double eta, double nu, double mu) {
  const double h = 2.0 / (nu + mu);
  Require(eta > 0.0 && eta < h, ErrorCode::kBadEta,
          "eta must lie in (0, 2/(nu+mu))");
  const double kappa = (1.0 - 2.0 * eta * nu * mu / (nu + mu)) + (h - eta) / eta;
  Require(kappa > 0.0, ErrorCode::kBadEta,
          "kappa = " + std::to_string(kappa) + " is not positive");
  return kappa;
}

inline double ScKappa(const ScNormParams& p) {
  return ScKappa(p.eta, p.nu, p.mu);
}

// kappa |x|² + (eta/beta)|lambda - beta A x|²
inline double ScNormSq(const Vector& x, const Vector& lambda,
                       const ScNormParams& p) {
  const double kappa = ScKappa(p);
  Require(x.size() == p.A.cols() && lambda.size() == p.A.rows(),
          ErrorCode::kDimensionMismatch, "sc norm dimensions");
  return kappa * x.squaredNorm() +
         (p.eta / p.beta) * (lambda - p.beta * (p.A * x)).squaredNorm();
}

// Curvature data for the strongly convex bounds.
struct ScParameters {
  double nu = 0.0;
  double mu = 0.0;
  double mu_g = 0.0;
  double op_ab = 0.0;
};

struct EtaInterval {
  double low = 0.0;
  double high = 0.0;
  double mid() const { return 0.5 * (low + high); }
};

inline EtaInterval ComputeEtaInterval(double nu, double mu, double mu_g,
                                      double beta, double op_ab) {
  Require(nu >= mu && mu > 0.0 && mu_g > 0.0 && beta > 0.0 && op_ab > 0.0,
          ErrorCode::kInvalidArgument,
          "need nu >= mu > 0, mu_g > 0, beta > 0, |AᵀB| > 0");
  const double s = nu + mu;
  const double first = 4.0 / (s + std::sqrt(s * s + 8.0 * nu * mu));
  const double second = 2.0 / s - 2.0 * mu_g / (beta * beta * op_ab * op_ab);
  EtaInterval out{std::max(first, second), 2.0 / s};
  Require(out.low < out.high, ErrorCode::kEmptyInterval,
          "admissible eta interval is empty");
  return out;
}

struct ContractionReport {
  double nu = 0.0;
  double mu = 0.0;
  double mu_g = 0.0;
  double beta = 0.0;
  double op_ab = 0.0;
  double eta = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double R = 0.0;
  double S = 0.0;
  double contraction = 0.0;
  double eta_low = 0.0;
  double eta_high = 0.0;
  double eta_mid = 0.0;
};

inline constexpr double kEtaMargin = 1e-12;

inline ContractionReport ContractionFactor(double nu, double mu, double mu_g,
                                           double beta, double op_ab,
                                           double eta) {
  const EtaInterval iv = ComputeEtaInterval(nu, mu, mu_g, beta, op_ab);
  if (!(eta > iv.low + kEtaMargin && eta < iv.high - kEtaMargin)) {
    throw Error(ErrorCode::kEtaOutsideInterval,
                "eta " + std::to_string(eta) + " outside (" +
                    std::to_string(iv.low) + ", " + std::to_string(iv.high) +
                    ")");
  }
  const double h = 2.0 / (nu + mu);
  ContractionReport r;
  r.nu = nu;
  r.mu = mu;
  r.mu_g = mu_g;
  r.beta = beta;
  r.op_ab = op_ab;
  r.eta = eta;
  r.P = 1.0 - (h - eta) / eta;
  r.Q = eta / beta + 0.25 * eta * (h - eta);
  r.R = (1.0 - 2.0 * eta * nu * mu / (nu + mu)) + (h - eta) / eta;
  r.S = eta / beta;
  r.contraction = std::max(r.R / r.P, r.S / r.Q);
  r.eta_low = iv.low;
  r.eta_high = iv.high;
  r.eta_mid = iv.mid();
  Require(r.contraction > 0.0 && r.contraction < 1.0,
          ErrorCode::kEtaOutsideInterval, "contraction factor not in (0, 1)");
  return r;
}

// Row of the experiment parameter table, stated in the table's units.
struct TableRow {
  double mu_table = 0.0;
  double beta = 0.0;
  double c2 = 0.1;
  double c1 = 0.0;
};

// nu = mu = 2 mu_table, mu_g = 2 c2, |AᵀB| = 1, eta at the midpoint.
inline ContractionReport TableRowReport(const TableRow& row) {
  const double curvature = 2.0 * row.mu_table;
  const double mu_g = 2.0 * row.c2;
  const EtaInterval iv =
      ComputeEtaInterval(curvature, curvature, mu_g, row.beta, 1.0);
  return ContractionFactor(curvature, curvature, mu_g, row.beta, 1.0, iv.mid());
}

}  // namespace padmm

#endif  // PADMM_NORMS_H_
