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

#ifndef PADMM_PROBLEM_H_
#define PADMM_PROBLEM_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "padmm/error.h"
#include "padmm/linalg.h"

namespace padmm {

// Linear constraint A x + B y = c.
struct ConstraintSystem {
  Matrix A;
  Matrix B;
  Vector c;

  Eigen::Index m() const { return A.rows(); }
  Eigen::Index n() const { return A.cols(); }
  Eigen::Index l() const { return B.cols(); }

  void Validate() const {
    Require(A.rows() >= 1 && A.cols() >= 1, ErrorCode::kDimensionMismatch,
            "A must be nonempty");
    Require(B.rows() == A.rows() && c.size() == A.rows(),
            ErrorCode::kDimensionMismatch, "A, B, c row counts differ");
    Require(A.allFinite() && B.allFinite() && c.allFinite(),
            ErrorCode::kInvalidArgument, "non-finite constraint entry");
  }
};

// Gradient map of one loss together with its curvature metadata.
struct GradientOracle {
  std::function<Vector(const Vector&)> gradient;
  double nu = 0.0;
  double mu = 0.0;
  std::optional<double> gradient_bound;

  Vector operator()(const Vector& x) const { return gradient(x); }
};

// Two losses with gradients at most delta apart. The library never infers
// delta.
struct NeighborPair {
  GradientOracle f;
  GradientOracle f_prime;
  double delta = 0.0;
};

// f(x) = ½ xᵀ P x + qᵀ x.
struct QuadraticFunction {
  Matrix P;
  Vector q;

  double Value(const Vector& x) const { return 0.5 * x.dot(P * x) + q.dot(x); }
  Vector Gradient(const Vector& x) const { return P * x + q; }

  GradientOracle Oracle() const {
    const SymmetricEigen eig = JacobiEigen(P);
    GradientOracle out;
    out.gradient = [p = P, qq = q](const Vector& x) -> Vector {
      return p * x + qq;
    };
    out.nu = std::max(eig.values.maxCoeff(), 0.0);
    out.mu = std::max(eig.values.minCoeff(), 0.0);
    return out;
  }
};

struct ElasticNet {
  double c1 = 0.0;
  double c2 = 0.0;
};

struct QuadraticRegularizer {
  Matrix P;
  Vector q;
};

// The handle maps w to the chosen minimizer and must be deterministic.
struct CustomRegularizer {
  std::function<Vector(const Vector&)> argmin;
  std::function<double(const Vector&)> value;
  double mu_g = 0.0;
};

class Regularizer {
 public:
  using Kind = std::variant<ElasticNet, QuadraticRegularizer, CustomRegularizer>;

  static Regularizer MakeElasticNet(double c1, double c2) {
    Require(c1 >= 0.0 && c2 >= 0.0, ErrorCode::kInvalidArgument,
            "elastic net weights must be nonnegative");
    return Regularizer(ElasticNet{c1, c2});
  }

  static Regularizer MakeQuadratic(Matrix p, Vector q) {
    Require(p.rows() == p.cols() && p.rows() == q.size(),
            ErrorCode::kDimensionMismatch, "quadratic regularizer shape");
    return Regularizer(QuadraticRegularizer{std::move(p), std::move(q)});
  }

  static Regularizer MakeCustom(CustomRegularizer custom) {
    Require(static_cast<bool>(custom.argmin), ErrorCode::kInvalidArgument,
            "custom regularizer needs an argmin handle");
    return Regularizer(std::move(custom));
  }

  const Kind& kind() const { return kind_; }
  bool IsElasticNet() const { return std::holds_alternative<ElasticNet>(kind_); }
  bool IsQuadratic() const {
    return std::holds_alternative<QuadraticRegularizer>(kind_);
  }
  bool IsCustom() const {
    return std::holds_alternative<CustomRegularizer>(kind_);
  }
  const ElasticNet& elastic_net() const { return std::get<ElasticNet>(kind_); }
  const QuadraticRegularizer& quadratic() const {
    return std::get<QuadraticRegularizer>(kind_);
  }
  const CustomRegularizer& custom() const {
    return std::get<CustomRegularizer>(kind_);
  }

  // Equality constraints E y = e absorbed from a standardized system.
  bool HasEquality() const { return equality_E_.rows() > 0; }
  const Matrix& equality_E() const { return equality_E_; }
  const Vector& equality_e() const { return equality_e_; }
  Regularizer WithEquality(Matrix e_mat, Vector e_vec) const {
    Regularizer out = *this;
    out.equality_E_ = std::move(e_mat);
    out.equality_e_ = std::move(e_vec);
    return out;
  }

  double StrongConvexity() const {
    if (IsElasticNet()) return 2.0 * elastic_net().c2;
    if (IsQuadratic()) {
      return std::max(JacobiEigen(quadratic().P).values.minCoeff(), 0.0);
    }
    return custom().mu_g;
  }

  double Value(const Vector& y) const {
    if (IsElasticNet()) {
      const ElasticNet& en = elastic_net();
      return en.c1 * y.lpNorm<1>() + en.c2 * y.squaredNorm();
    }
    if (IsQuadratic()) {
      const QuadraticRegularizer& qr = quadratic();
      return 0.5 * y.dot(qr.P * y) + qr.q.dot(y);
    }
    Require(static_cast<bool>(custom().value), ErrorCode::kUnsupported,
            "custom regularizer has no value handle");
    return custom().value(y);
  }

 private:
  explicit Regularizer(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
  Matrix equality_E_ = Matrix(0, 0);
  Vector equality_e_ = Vector(0);
};

inline double SoftThreshold(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

// Minimizer for g = c1|y|_1 + c2|y|² with B = -I and c = 0.
inline Vector ElasticNetArgmin(const Vector& w, double c1, double c2,
                               double beta) {
  const double denom = 2.0 * c2 + beta;
  Require(denom > 0.0, ErrorCode::kInvalidArgument, "beta + 2 c2 must be > 0");
  Vector y(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    y(j) = SoftThreshold(-w(j), c1) / denom;
  }
  return y;
}

inline bool IsNegativeIdentity(const Matrix& b) {
  return b.rows() == b.cols() && b == -Matrix::Identity(b.rows(), b.cols());
}

// Prepared y-update for fixed (g, B, c, beta); factorizations are cached.
class RegularizerSolver {
 public:
  RegularizerSolver() = default;

  RegularizerSolver(const Regularizer& g, const Matrix& b, const Vector& c,
                    double beta)
      : g_(std::make_shared<Regularizer>(g)), B_(b), c_(c), beta_(beta) {
    Require(beta > 0.0, ErrorCode::kInvalidArgument, "beta must be positive");
    if (g.IsCustom()) return;
    if (g.IsElasticNet()) {
      Require(IsNegativeIdentity(b) && !g.HasEquality(), ErrorCode::kUnsupported,
              "elastic net closed form needs B = -I without extra equalities");
      return;
    }
    const QuadraticRegularizer& qr = g.quadratic();
    Require(qr.P.rows() == b.cols(), ErrorCode::kDimensionMismatch,
            "regularizer dimension differs from B columns");
    const Matrix h = qr.P + beta * b.transpose() * b;
    if (!g.HasEquality()) {
      spd_ = SpdFactor(h);
      return;
    }
    const Eigen::Index l = b.cols();
    const Eigen::Index k = g.equality_E().rows();
    Matrix kkt = Matrix::Zero(l + k, l + k);
    kkt.topLeftCorner(l, l) = h;
    kkt.topRightCorner(l, k) = g.equality_E().transpose();
    kkt.bottomLeftCorner(k, l) = g.equality_E();
    kkt_ = std::make_shared<Eigen::FullPivLU<Matrix>>(kkt);
    Require(kkt_->isInvertible(), ErrorCode::kNotSpd,
            "equality-constrained y-update is singular");
  }

  Vector operator()(const Vector& w) const {
    const Regularizer& g = *g_;
    if (g.IsCustom()) return g.custom().argmin(w);
    if (g.IsElasticNet()) {
      const ElasticNet& en = g.elastic_net();
      return ElasticNetArgmin(w + beta_ * c_, en.c1, en.c2, beta_);
    }
    const Vector rhs =
        B_.transpose() * w + beta_ * (B_.transpose() * c_) - g.quadratic().q;
    if (!kkt_) return spd_.Solve(rhs);
    const Eigen::Index l = B_.cols();
    Vector full(l + g.equality_E().rows());
    full << rhs, g.equality_e();
    return Vector(kkt_->solve(full).head(l));
  }

 private:
  std::shared_ptr<const Regularizer> g_;
  Matrix B_;
  Vector c_;
  double beta_ = 1.0;
  SpdFactor spd_;
  std::shared_ptr<Eigen::FullPivLU<Matrix>> kkt_;
};

inline Vector GenericArgmin(const Regularizer& g, const Vector& w,
                            const Matrix& b, const Vector& c, double beta) {
  return RegularizerSolver(g, b, c, beta)(w);
}

// Result of Gaussian elimination on the constraint rows.
struct StandardForm {
  ConstraintSystem system;
  Matrix b_hat;
  Vector c_hat;
  // column_order[k] is the original index of standardized coordinate k.
  std::vector<Eigen::Index> column_order;
  Regularizer regularizer = Regularizer::MakeElasticNet(0.0, 0.0);

  Matrix D() const {
    return system.A.rightCols(system.n() - system.m());
  }
  bool Permuted() const {
    for (std::size_t k = 0; k < column_order.size(); ++k) {
      if (column_order[k] != static_cast<Eigen::Index>(k)) return true;
    }
    return false;
  }
  Vector ToStandardX(const Vector& x) const {
    Vector out(x.size());
    for (std::size_t k = 0; k < column_order.size(); ++k) {
      out(static_cast<Eigen::Index>(k)) = x(column_order[k]);
    }
    return out;
  }
  Vector FromStandardX(const Vector& x) const {
    Vector out(x.size());
    for (std::size_t k = 0; k < column_order.size(); ++k) {
      out(column_order[k]) = x(static_cast<Eigen::Index>(k));
    }
    return out;
  }
};

inline StandardForm Standardize(const ConstraintSystem& cs,
                                const Regularizer& g) {
  cs.Validate();
  const Eigen::Index m = cs.m();
  const Eigen::Index n = cs.n();
  const Eigen::Index l = cs.l();
  Matrix aug(m, n + l + 1);
  aug << cs.A, cs.B, cs.c;
  const double scale = std::max(1.0, cs.A.cwiseAbs().maxCoeff());
  const double threshold = 1e-10 * scale;

  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < n && r < m; ++j) {
    Eigen::Index best = r;
    for (Eigen::Index p = r + 1; p < m; ++p) {
      if (std::abs(aug(p, j)) > std::abs(aug(best, j))) best = p;
    }
    if (std::abs(aug(best, j)) <= threshold) continue;
    if (best != r) aug.row(best).swap(aug.row(r));
    aug.row(r) /= aug(r, j);
    aug(r, j) = 1.0;
    for (Eigen::Index p = 0; p < m; ++p) {
      if (p == r || aug(p, j) == 0.0) continue;
      aug.row(p) -= aug(p, j) * aug.row(r);
      aug(p, j) = 0.0;
    }
    pivots.push_back(j);
    ++r;
  }
  const Eigen::Index rank = r;
  Require(rank >= 1, ErrorCode::kDegenerateSystem, "A has rank zero");

  StandardForm out;
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Eigen::Index j : pivots) is_pivot[static_cast<std::size_t>(j)] = true;
  out.column_order = pivots;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!is_pivot[static_cast<std::size_t>(j)]) out.column_order.push_back(j);
  }

  out.system.A = Matrix(rank, n);
  for (std::size_t k = 0; k < out.column_order.size(); ++k) {
    out.system.A.col(static_cast<Eigen::Index>(k)) =
        aug.col(out.column_order[k]).head(rank);
  }
  out.system.A.leftCols(rank) = Matrix::Identity(rank, rank);
  out.system.B = aug.block(0, n, rank, l);
  out.system.c = aug.col(n + l).head(rank);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index p = rank; p < m; ++p) {
    const double b_size = aug.block(p, n, 1, l).cwiseAbs().maxCoeff();
    const double c_size = std::abs(aug(p, n + l));
    if (l == 0 || b_size <= threshold) {
      if (c_size > threshold) {
        throw Error(ErrorCode::kDegenerateSystem,
                    "constant row with nonzero right-hand side");
      }
      continue;
    }
    kept.push_back(p);
  }
  out.b_hat = Matrix(static_cast<Eigen::Index>(kept.size()), l);
  out.c_hat = Vector(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    out.b_hat.row(row) = aug.block(kept[k], n, 1, l);
    out.c_hat(row) = aug(kept[k], n + l);
  }
  if (kept.empty()) {
    out.regularizer = g;
  } else {
    Matrix e_mat = g.equality_E();
    Vector e_vec = g.equality_e();
    if (e_mat.rows() == 0) {
      e_mat = out.b_hat;
      e_vec = out.c_hat;
    } else {
      Matrix stacked(e_mat.rows() + out.b_hat.rows(), l);
      stacked << e_mat, out.b_hat;
      Vector stacked_e(e_vec.size() + out.c_hat.size());
      stacked_e << e_vec, out.c_hat;
      e_mat = stacked;
      e_vec = stacked_e;
    }
    out.regularizer = g.WithEquality(std::move(e_mat), std::move(e_vec));
  }
  return out;
}

struct AdmmConfig {
  double beta = 1.0;
  double eta = 1.0;
  double sigma = 0.0;
  int iterations = 1;

  void Validate() const {
    Require(beta > 0.0 && eta > 0.0, ErrorCode::kInvalidArgument,
            "beta and eta must be positive");
    Require(sigma >= 0.0, ErrorCode::kInvalidArgument, "sigma must be >= 0");
    Require(iterations >= 0, ErrorCode::kInvalidArgument,
            "iteration count must be >= 0");
  }
};

// Everything an iteration reads: constraints, regularizer, beta and eta,
// plus the cached factorization of I + eta beta AᵀA.
class AdmmProblem {
 public:
  AdmmProblem(ConstraintSystem cs, Regularizer g, double beta, double eta)
      : cs_(std::move(cs)), g_(std::move(g)), beta_(beta), eta_(eta) {
    cs_.Validate();
    Require(beta_ > 0.0 && eta_ > 0.0, ErrorCode::kInvalidArgument,
            "beta and eta must be positive");
    const Eigen::Index n = cs_.n();
    x_factor_ = SpdFactor(Matrix::Identity(n, n) +
                          eta_ * beta_ * cs_.A.transpose() * cs_.A);
    y_solver_ = RegularizerSolver(g_, cs_.B, cs_.c, beta_);
    op_norm_a_ = OperatorNorm(cs_.A);
  }

  const ConstraintSystem& constraints() const { return cs_; }
  const Matrix& A() const { return cs_.A; }
  const Matrix& B() const { return cs_.B; }
  const Vector& c() const { return cs_.c; }
  const Regularizer& regularizer() const { return g_; }
  double beta() const { return beta_; }
  double eta() const { return eta_; }
  Eigen::Index n() const { return cs_.n(); }
  Eigen::Index m() const { return cs_.m(); }
  Eigen::Index l() const { return cs_.l(); }
  double op_norm_a() const { return op_norm_a_; }

  bool IsStandardForm() const {
    const Eigen::Index m = cs_.m();
    if (m > cs_.n()) return false;
    return cs_.A.leftCols(m) == Matrix::Identity(m, m);
  }

  Matrix D() const {
    Require(IsStandardForm(), ErrorCode::kNotStandardForm,
            "A lacks an identity prefix");
    return cs_.A.rightCols(cs_.n() - cs_.m());
  }

  // y-update as a function of w = lambda - beta A x.
  Vector YUpdate(const Vector& w) const { return y_solver_(w); }

  Vector ApplyXInverse(const Vector& v) const { return x_factor_.Solve(v); }

  Vector XUpdate(const Vector& x, const Vector& grad, const Vector& y,
                 const Vector& lambda_next) const {
    const Vector inner = beta_ * (cs_.B * y - cs_.c) - lambda_next;
    const Vector rhs = x - eta_ * (grad + cs_.A.transpose() * inner);
    return x_factor_.Solve(rhs);
  }

 private:
  ConstraintSystem cs_;
  Regularizer g_;
  double beta_;
  double eta_;
  SpdFactor x_factor_;
  RegularizerSolver y_solver_;
  double op_norm_a_ = 0.0;
};

}  // namespace padmm

#endif  // PADMM_PROBLEM_H_
