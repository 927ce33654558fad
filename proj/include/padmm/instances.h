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

#ifndef PADMM_INSTANCES_H_
#define PADMM_INSTANCES_H_

#include <algorithm>
#include <cstdint>
#include <vector>

#include "padmm/linalg.h"
#include "padmm/norms.h"
#include "padmm/problem.h"
#include "padmm/rng.h"

namespace padmm {

// Random quadratic problems whose curvature is set exactly through the
// sampled spectrum.
struct QuadraticInstance {
  std::vector<QuadraticFunction> losses;
  ConstraintSystem cs;
  Regularizer g = Regularizer::MakeElasticNet(0.0, 0.0);
  double beta = 1.0;
  double eta = 1.0;
  double nu = 0.0;
  double mu = 0.0;
  double mu_g = 0.0;
  double op_ab = 0.0;
  bool strongly_convex = false;

  AdmmProblem Problem() const { return AdmmProblem(cs, g, beta, eta); }
  ScParameters Sc() const { return {nu, mu, mu_g, op_ab}; }
};

enum class RegularizerChoice { kQuadratic, kElasticNet };

struct InstanceOptions {
  int n = 4;
  int m = 2;
  bool standard_form = true;
  bool strongly_convex = false;
  RegularizerChoice regularizer = RegularizerChoice::kQuadratic;
  // Lower end of the regularizer spectrum; positive keeps P_g definite.
  double mu_g_min = 0.1;
  int num_losses = 2;
};

inline Matrix SpdWithSpectrum(Rng& rng, const Vector& spectrum) {
  const Eigen::Index n = spectrum.size();
  const Matrix q = OrthogonalFromGaussian(rng.NormalMatrix(n, n));
  Matrix p = q * spectrum.asDiagonal() * q.transpose();
  return 0.5 * (p + p.transpose());
}

// Spectrum in [lo, hi] with both ends attained when n >= 2.
inline Vector SpectrumBetween(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = rng.Uniform(lo, hi);
  if (n >= 1) s(0) = hi;
  if (n >= 2) s(1) = lo;
  return s;
}

inline QuadraticInstance RandomInstance(Rng& rng, const InstanceOptions& opt) {
  QuadraticInstance inst;
  const Eigen::Index n = opt.n;
  const Eigen::Index m = opt.m;
  const bool elastic = opt.regularizer == RegularizerChoice::kElasticNet;
  const Eigen::Index l = elastic ? m : rng.UniformInt(1, m);

  if (opt.standard_form) {
    inst.cs.A = Matrix::Zero(m, n);
    inst.cs.A.leftCols(m) = Matrix::Identity(m, m);
    if (n > m) inst.cs.A.rightCols(n - m) = rng.NormalMatrix(m, n - m) * 0.7;
  } else {
    inst.cs.A = rng.NormalMatrix(m, n) * 0.7;
  }
  inst.cs.B = elastic ? Matrix(-Matrix::Identity(m, m))
                      : Matrix(rng.NormalMatrix(m, l) * 0.7);
  inst.cs.c = rng.NormalVector(m) * 0.5;
  inst.beta = rng.Uniform(0.3, 2.0);

  if (elastic) {
    const double c2 = rng.Uniform(0.5 * opt.mu_g_min, 1.0);
    inst.g = Regularizer::MakeElasticNet(rng.Uniform(0.0, 0.5), c2);
  } else {
    const double lo = opt.mu_g_min;
    const Vector spec = SpectrumBetween(rng, l, lo, lo + 1.5);
    inst.g = Regularizer::MakeQuadratic(SpdWithSpectrum(rng, spec),
                                        rng.NormalVector(l) * 0.3);
  }
  inst.mu_g = inst.g.StrongConvexity();
  inst.op_ab = OperatorNorm(inst.cs.A.transpose() * inst.cs.B);

  if (opt.strongly_convex) {
    inst.nu = rng.Uniform(0.5, 2.0);
    inst.mu = inst.nu * rng.Uniform(0.2, 1.0);
    const EtaInterval iv =
        ComputeEtaInterval(inst.nu, inst.mu, inst.mu_g, inst.beta, inst.op_ab);
    const double width = iv.high - iv.low;
    inst.eta = iv.low + width * rng.Uniform(0.02, 0.98);
    inst.strongly_convex = true;
  } else {
    inst.eta = rng.Uniform(0.2, 2.0);
    inst.nu = 1.0 / inst.eta;
    inst.mu = 0.0;
  }
  for (int k = 0; k < opt.num_losses; ++k) {
    const Vector spec = SpectrumBetween(rng, n, inst.mu, inst.nu);
    inst.losses.push_back(
        {SpdWithSpectrum(rng, spec), Vector(rng.NormalVector(n) * 0.5)});
  }
  return inst;
}

}  // namespace padmm

#endif  // PADMM_INSTANCES_H_
