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

#ifndef PADMM_GAUSSIAN_ORACLE_H_
#define PADMM_GAUSSIAN_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "padmm/accountant.h"
#include "padmm/error.h"
#include "padmm/format.h"
#include "padmm/instances.h"
#include "padmm/linalg.h"
#include "padmm/norms.h"
#include "padmm/problem.h"
#include "padmm/rng.h"

namespace padmm {

// Law of the stacked (x, lambda).
struct GaussianBelief {
  Vector mean;
  Matrix covariance;

  static GaussianBelief PointMass(const Vector& x, const Vector& lambda) {
    GaussianBelief b;
    b.mean = Vector(x.size() + lambda.size());
    b.mean << x, lambda;
    b.covariance = Matrix::Zero(b.mean.size(), b.mean.size());
    return b;
  }
};

struct AffineMap {
  Matrix M;
  Vector b;

  Vector Apply(const Vector& s) const { return M * s + b; }
};

namespace internal {

inline QuadraticRegularizer AsQuadratic(const Regularizer& g, Eigen::Index l) {
  if (g.IsQuadratic()) return g.quadratic();
  if (g.IsElasticNet() && g.elastic_net().c1 == 0.0) {
    return {2.0 * g.elastic_net().c2 * Matrix::Identity(l, l), Vector::Zero(l)};
  }
  throw Error(ErrorCode::kNonQuadratic, "regularizer is not quadratic");
}

}  // namespace internal

// One noiseless iteration written as s -> M s + b on s = (x, lambda).
inline AffineMap IterationAsAffine(const QuadraticFunction& f,
                                   const AdmmProblem& problem) {
  const Eigen::Index n = problem.n();
  const Eigen::Index m = problem.m();
  const Eigen::Index l = problem.l();
  Require(f.P.rows() == n && f.P.cols() == n && f.q.size() == n,
          ErrorCode::kDimensionMismatch, "loss dimension");
  const double beta = problem.beta();
  const double eta = problem.eta();
  const Matrix& a = problem.A();
  const Matrix& bm = problem.B();
  const Vector& c = problem.c();
  const Regularizer& g = problem.regularizer();
  const QuadraticRegularizer qr = internal::AsQuadratic(g, l);

  // y = ky_lin w + ky_off with w = lambda - beta A x.
  const Eigen::Index k = g.equality_E().rows();
  Matrix kkt = Matrix::Zero(l + k, l + k);
  kkt.topLeftCorner(l, l) = qr.P + beta * bm.transpose() * bm;
  if (k > 0) {
    kkt.topRightCorner(l, k) = g.equality_E().transpose();
    kkt.bottomLeftCorner(k, l) = g.equality_E();
  }
  Eigen::FullPivLU<Matrix> lu(kkt);
  Require(lu.isInvertible(), ErrorCode::kNotSpd, "y-update is singular");
  Matrix rhs_lin = Matrix::Zero(l + k, m);
  rhs_lin.topRows(l) = bm.transpose();
  Vector rhs_off = Vector::Zero(l + k);
  rhs_off.head(l) = beta * (bm.transpose() * c) - qr.q;
  if (k > 0) rhs_off.tail(k) = g.equality_e();
  const Matrix ky_lin = lu.solve(rhs_lin).topRows(l);
  const Vector ky_off = lu.solve(rhs_off).head(l);

  Matrix w_map(m, n + m);
  w_map << -beta * a, Matrix::Identity(m, m);
  Matrix x_sel = Matrix::Zero(n, n + m);
  x_sel.leftCols(n) = Matrix::Identity(n, n);

  const Matrix y_lin = ky_lin * w_map;
  const Matrix lam_lin = w_map - beta * bm * y_lin;
  const Vector lam_off = -beta * (bm * ky_off) + beta * c;

  const Matrix x_factor =
      Matrix::Identity(n, n) + eta * beta * a.transpose() * a;
  const SpdFactor fac(x_factor);
  const Matrix x_pre =
      x_sel - eta * f.P * x_sel -
      eta * a.transpose() * (beta * bm * y_lin - lam_lin);
  const Vector x_pre_off =
      -eta * f.q -
      eta * a.transpose() * (beta * (bm * ky_off) - beta * c - lam_off);

  AffineMap out;
  out.M = Matrix(n + m, n + m);
  out.M.topRows(n) = fac.Solve(x_pre);
  out.M.bottomRows(m) = lam_lin;
  out.b = Vector(n + m);
  out.b << fac.Solve(x_pre_off), lam_off;
  return out;
}

// Noise N(0, sigma² I) lands on the first x_dim coordinates.
inline GaussianBelief Propagate(const GaussianBelief& belief,
                                const AffineMap& map, double sigma,
                                Eigen::Index x_dim) {
  Require(map.M.cols() == belief.mean.size() &&
              map.M.rows() == belief.mean.size(),
          ErrorCode::kDimensionMismatch, "belief and map dimensions");
  GaussianBelief out;
  out.mean = map.M * belief.mean + map.b;
  out.covariance = map.M * belief.covariance * map.M.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  for (Eigen::Index i = 0; i < x_dim; ++i) out.covariance(i, i) += sigma * sigma;
  return out;
}

inline constexpr double kInfiniteDivergence =
    std::numeric_limits<double>::infinity();

// ½ Δmᵀ Σ⁺ Δm for equal covariances; +inf when Δm leaves the range of Σ.
inline double ExactZcdp(const GaussianBelief& b1, const GaussianBelief& b2,
                        double tol = 1e-10) {
  Require(b1.mean.size() == b2.mean.size(), ErrorCode::kDimensionMismatch,
          "belief dimensions");
  const double scale = std::max(1.0, b1.covariance.cwiseAbs().maxCoeff());
  if ((b1.covariance - b2.covariance).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw Error(ErrorCode::kCovarianceMismatch,
                "scenario covariances differ");
  }
  const Vector dm = b1.mean - b2.mean;
  if (dm.isZero(0.0)) return 0.0;
  const std::optional<Vector> v = PseudoSolve(b1.covariance, dm, tol);
  if (!v) return kInfiniteDivergence;
  return 0.5 * dm.dot(*v);
}

struct VerifyResult {
  double exact = 0.0;
  double bound = 0.0;
  bool ok = false;
  bool used_sc_bound = false;
  PrivacyBoundReport report;
};

// Beliefs of both scenarios after `steps` noisy iterations from point masses.
inline std::pair<GaussianBelief, GaussianBelief> PropagatePair(
    const QuadraticInstance& inst, const AdmmProblem& problem,
    const Vector& x0, const Vector& x0_prime, const Vector& lambda0,
    double sigma, int steps) {
  std::vector<AffineMap> maps;
  for (const QuadraticFunction& f : inst.losses) {
    maps.push_back(IterationAsAffine(f, problem));
  }
  GaussianBelief b1 = GaussianBelief::PointMass(x0, lambda0);
  GaussianBelief b2 = GaussianBelief::PointMass(x0_prime, lambda0);
  for (int t = 0; t < steps; ++t) {
    const AffineMap& map = maps[static_cast<std::size_t>(t) % maps.size()];
    b1 = Propagate(b1, map, sigma, problem.n());
    b2 = Propagate(b2, map, sigma, problem.n());
  }
  return {b1, b2};
}

inline VerifyResult VerifyBound(const QuadraticInstance& inst,
                                const Vector& x0, const Vector& x0_prime,
                                double sigma, int t_pairs) {
  Require(t_pairs >= 1, ErrorCode::kInvalidArgument, "T_pairs must be >= 1");
  const AdmmProblem problem = inst.Problem();
  Require(problem.IsStandardForm(), ErrorCode::kNotStandardForm,
          "oracle check needs A = [I | D]");
  const Vector lambda0 = Vector::Zero(problem.m());
  const auto [b1, b2] =
      PropagatePair(inst, problem, x0, x0_prime, lambda0, sigma, 2 * t_pairs);
  VerifyResult out;
  out.exact = ExactZcdp(b1, b2);
  const double dist0 = (x0 - x0_prime).norm();
  bool sc_ok = false;
  if (inst.strongly_convex) {
    try {
      out.report = AmpBoundSc(sigma, t_pairs, dist0, inst.beta, inst.eta,
                              problem.op_norm_a(), inst.Sc());
      sc_ok = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEtaOutsideInterval &&
          e.code() != ErrorCode::kBadEta && e.code() != ErrorCode::kEmptyInterval) {
        throw;
      }
    }
  }
  if (!sc_ok) {
    out.report = AmpBoundGeneral(sigma, t_pairs, dist0, inst.beta, inst.eta,
                                 problem.op_norm_a());
  }
  out.used_sc_bound = sc_ok;
  out.bound = out.report.amplified_dz;
  out.ok = out.exact <= out.bound * (1.0 + 1e-9);
  return out;
}

struct OracleSweepOptions {
  int instances = 100;
  int max_n = 8;
  int max_m = 4;
  int max_t_pairs = 6;
  std::vector<double> sigmas = {0.5, 1.0, 2.0};
  std::uint64_t seed = 42;
};

struct OracleSweepRow {
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  int t_pairs = 0;
  double sigma = 0.0;
  bool strongly_convex = false;
  VerifyResult result;
};

// Odd-numbered instances are strongly convex with eta inside the admissible
// interval; the rest are merely convex with eta = 1/nu.
inline std::vector<OracleSweepRow> RunOracleSweep(const OracleSweepOptions& o) {
  Require(o.instances >= 1 && o.max_n >= 1 && o.max_m >= 1 && o.max_t_pairs >= 1,
          ErrorCode::kInvalidArgument, "sweep sizes must be positive");
  Require(!o.sigmas.empty(), ErrorCode::kInvalidArgument, "no sigma values");
  for (double s : o.sigmas) {
    Require(s > 0.0, ErrorCode::kZeroSigma, "sigma must be positive");
  }
  std::vector<OracleSweepRow> rows;
  for (int k = 0; k < o.instances; ++k) {
    OracleSweepRow row;
    row.seed = DeriveSeed(o.seed, {static_cast<std::uint64_t>(k)});
    Rng rng(row.seed);
    InstanceOptions opt;
    opt.n = static_cast<int>(rng.UniformInt(1, o.max_n));
    opt.m = static_cast<int>(rng.UniformInt(1, std::min(o.max_m, opt.n)));
    opt.strongly_convex = (k % 2) == 1;
    row.n = opt.n;
    row.m = opt.m;
    row.t_pairs = static_cast<int>(rng.UniformInt(1, o.max_t_pairs));
    row.sigma = o.sigmas[static_cast<std::size_t>(k) % o.sigmas.size()];
    row.strongly_convex = opt.strongly_convex;
    const QuadraticInstance inst = RandomInstance(rng, opt);
    const Vector x0 = rng.NormalVector(opt.n);
    const Vector x1 = rng.NormalVector(opt.n);
    row.result = VerifyBound(inst, x0, x1, row.sigma, row.t_pairs);
    rows.push_back(row);
  }
  return rows;
}

inline std::string OracleSweepCsv(const std::vector<OracleSweepRow>& rows) {
  std::string out = "seed,n,m,T_pairs,sigma,exact,bound,ok\n";
  for (const OracleSweepRow& r : rows) {
    out += std::to_string(r.seed) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.m) + ',' + std::to_string(r.t_pairs) + ',' +
           FormatDouble(r.sigma) + ',' + FormatDouble(r.result.exact) + ',' +
           FormatDouble(r.result.bound) + ',' + (r.result.ok ? "true" : "false") +
           '\n';
  }
  return out;
}

}  // namespace padmm

#endif  // PADMM_GAUSSIAN_ORACLE_H_
