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

#ifndef PADMM_LINALG_H_
#define PADMM_LINALG_H_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padmm/error.h"

namespace padmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline bool AllFinite(const Matrix& m) { return m.allFinite(); }

// Eigenvalues in ascending order with matching orthonormal columns.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

// Cyclic Jacobi rotations. The input is symmetrized before iterating.
inline SymmetricEigen JacobiEigen(const Matrix& s, int max_sweeps = 100) {
  Require(s.rows() == s.cols(), ErrorCode::kDimensionMismatch,
          "JacobiEigen needs a square matrix");
  const Eigen::Index n = s.rows();
  Matrix a = 0.5 * (s + s.transpose());
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= 1e-300 || std::sqrt(off) <= 1e-17 * a.norm()) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index i, Eigen::Index j) {
                     return a(i, i) < a(j, j);
                   });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

// Largest singular value. Power iteration on MᵀM, Jacobi fallback.
inline double OperatorNorm(const Matrix& m) {
  Require(m.size() > 0, ErrorCode::kInvalidArgument, "empty matrix");
  const double max_abs = m.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return 0.0;
  const Matrix scaled = m / max_abs;
  const Matrix gram = scaled.transpose() * scaled;
  const double column_floor = gram.diagonal().maxCoeff();
  Vector v(gram.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  }
  v.normalize();
  double theta = 0.0;
  bool converged = false;
  for (int it = 0; it < 100000; ++it) {
    Vector w = gram * v;
    const double next = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    if (it > 0 && std::abs(next - theta) <= 1e-12 * next) {
      theta = next;
      converged = true;
      break;
    }
    theta = next;
  }
  // A Rayleigh quotient below some column norm means the start vector missed
  // the dominant direction.
  if (!converged || theta < column_floor * (1.0 - 1e-12)) {
    theta = JacobiEigen(gram).values.maxCoeff();
  }
  return max_abs * std::sqrt(std::max(theta, 0.0));
}

// Cholesky factor of a symmetric positive definite matrix.
class SpdFactor {
 public:
  SpdFactor() = default;

  explicit SpdFactor(const Matrix& s) : l_(Matrix::Zero(s.rows(), s.cols())) {
    Require(s.rows() == s.cols(), ErrorCode::kDimensionMismatch,
            "SpdFactor needs a square matrix");
    const Eigen::Index n = s.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      double d = s(j, j);
      for (Eigen::Index k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
      if (!(d > 1e-12)) {
        throw Error(ErrorCode::kNotSpd,
                    "pivot " + std::to_string(d) + " at column " +
                        std::to_string(j));
      }
      const double root = std::sqrt(d);
      l_(j, j) = root;
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double e = s(i, j);
        for (Eigen::Index k = 0; k < j; ++k) e -= l_(i, k) * l_(j, k);
        l_(i, j) = e / root;
      }
    }
  }

  Eigen::Index size() const { return l_.rows(); }

  Vector Solve(const Vector& rhs) const {
    Require(rhs.size() == l_.rows(), ErrorCode::kDimensionMismatch,
            "rhs length");
    const Eigen::Index n = l_.rows();
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = rhs(i);
      for (Eigen::Index k = 0; k < i; ++k) acc -= l_(i, k) * z(k);
      z(i) = acc / l_(i, i);
    }
    Vector out(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double acc = z(i);
      for (Eigen::Index k = i + 1; k < n; ++k) acc -= l_(k, i) * out(k);
      out(i) = acc / l_(i, i);
    }
    return out;
  }

  Matrix Solve(const Matrix& rhs) const {
    Matrix out(rhs.rows(), rhs.cols());
    for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
      out.col(j) = Solve(Vector(rhs.col(j)));
    }
    return out;
  }

  const Matrix& lower() const { return l_; }

 private:
  Matrix l_;
};

inline Vector SolveSpd(const Matrix& s, const Vector& rhs) {
  return SpdFactor(s).Solve(rhs);
}

// Minimum-norm solution of S v = rhs for symmetric PSD S. Empty when rhs has
// a null-space component larger than tol * |rhs|.
inline std::optional<Vector> PseudoSolve(const Matrix& s, const Vector& rhs,
                                         double tol = 1e-10) {
  Require(s.rows() == s.cols() && s.rows() == rhs.size(),
          ErrorCode::kDimensionMismatch, "PseudoSolve dimensions");
  const Eigen::Index n = s.rows();
  if (n == 0) return Vector(0);
  const SymmetricEigen eig = JacobiEigen(s);
  const double max_eig = std::max(eig.values.maxCoeff(), 0.0);
  const double cutoff = tol * max_eig;
  const Vector coeffs = eig.vectors.transpose() * rhs;
  double null_sq = 0.0;
  Vector scaled = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (max_eig > 0.0 && eig.values(k) > cutoff) {
      scaled(k) = coeffs(k) / eig.values(k);
    } else {
      null_sq += coeffs(k) * coeffs(k);
    }
  }
  if (std::sqrt(null_sq) > tol * rhs.norm()) return std::nullopt;
  return Vector(eig.vectors * scaled);
}

// Householder QR of a Gaussian matrix gives a Haar-distributed orthogonal
// matrix once column signs are fixed.
inline Matrix OrthogonalFromGaussian(const Matrix& g) {
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace padmm

#endif  // PADMM_LINALG_H_
