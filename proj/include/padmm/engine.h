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

#ifndef PADMM_ENGINE_H_
#define PADMM_ENGINE_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "padmm/error.h"
#include "padmm/format.h"
#include "padmm/linalg.h"
#include "padmm/problem.h"
#include "padmm/rng.h"

namespace padmm {

struct AdmmState {
  Vector x;
  Vector lambda;
};

// Records standard-normal draws so that two runs can share them. In replay
// mode the stored draws are returned in order.
class NoiseTape {
 public:
  static NoiseTape Recording(std::uint64_t seed,
                             std::initializer_list<std::uint64_t> stream = {}) {
    NoiseTape tape;
    tape.seed_ = seed;
    tape.rng_ = std::make_shared<Rng>(Rng::Substream(seed, stream));
    return tape;
  }

  static NoiseTape FromDraws(std::vector<Vector> draws) {
    NoiseTape tape;
    tape.draws_ = std::move(draws);
    return tape;
  }

  // Standard normal vector of length dim.
  Vector Draw(Eigen::Index dim) {
    if (rng_) {
      draws_.push_back(rng_->NormalVector(dim));
      ++cursor_;
      return draws_.back();
    }
    Require(cursor_ < draws_.size(), ErrorCode::kTapeExhausted,
            "replay tape has no draws left");
    const Vector& v = draws_[cursor_];
    Require(v.size() == dim, ErrorCode::kDimensionMismatch,
            "replayed draw has length " + std::to_string(v.size()) +
                ", expected " + std::to_string(dim));
    ++cursor_;
    return v;
  }

  // A fresh replaying tape over everything drawn so far.
  NoiseTape Replay() const { return FromDraws(draws_); }

  bool recording() const { return static_cast<bool>(rng_); }
  std::size_t consumed() const { return cursor_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Vector>& draws() const { return draws_; }

 private:
  NoiseTape() = default;

  std::uint64_t seed_ = 0;
  std::shared_ptr<Rng> rng_;
  std::vector<Vector> draws_;
  std::size_t cursor_ = 0;
};

namespace internal {

struct StepParts {
  Vector y;
  Vector lambda_next;
  Vector x_next;
};

inline StepParts CleanStep(const AdmmState& s, const GradientOracle& f,
                           const AdmmProblem& p) {
  StepParts out;
  out.y = p.YUpdate(s.lambda - p.beta() * (p.A() * s.x));
  out.lambda_next =
      s.lambda - p.beta() * (p.A() * s.x + p.B() * out.y - p.c());
  out.x_next = p.XUpdate(s.x, f(s.x), out.y, out.lambda_next);
  return out;
}

inline void CheckState(const AdmmState& s, const AdmmProblem& p) {
  Require(s.x.size() == p.n() && s.lambda.size() == p.m(),
          ErrorCode::kDimensionMismatch, "state dimensions differ from problem");
}

}  // namespace internal

// One iteration: y, then lambda, then x.
inline AdmmState AdmmIteration(const AdmmState& state, const GradientOracle& f,
                               const AdmmProblem& problem) {
  internal::CheckState(state, problem);
  internal::StepParts parts = internal::CleanStep(state, f, problem);
  return {std::move(parts.x_next), std::move(parts.lambda_next)};
}

inline AdmmState NoisyIteration(const AdmmState& state, const GradientOracle& f,
                                double sigma, NoiseTape& tape,
                                const AdmmProblem& problem,
                                Vector* noise_out = nullptr) {
  Require(sigma >= 0.0, ErrorCode::kInvalidArgument, "sigma must be >= 0");
  AdmmState next = AdmmIteration(state, f, problem);
  const Vector noise = sigma * tape.Draw(problem.n());
  next.x += noise;
  if (noise_out != nullptr) *noise_out = noise;
  return next;
}

// Two noisy iterations. The flag is raised when A lacks an identity prefix.
inline AdmmState MarkovK(const AdmmState& state, const GradientOracle& f1,
                         const GradientOracle& f2, double sigma,
                         NoiseTape& tape, const AdmmProblem& problem,
                         bool* not_standard_form = nullptr) {
  if (not_standard_form != nullptr) {
    *not_standard_form = !problem.IsStandardForm();
  }
  const AdmmState mid = NoisyIteration(state, f1, sigma, tape, problem);
  return NoisyIteration(mid, f2, sigma, tape, problem);
}

inline Vector MechanismM1(const AdmmState& state, const GradientOracle& f1,
                          double sigma, const Vector& z, NoiseTape& tape,
                          const AdmmProblem& problem) {
  internal::CheckState(state, problem);
  const Matrix d = problem.D();
  Require(z.size() == d.cols(), ErrorCode::kDimensionMismatch,
          "z must have length n - m");
  const internal::StepParts parts = internal::CleanStep(state, f1, problem);
  const double beta = problem.beta();
  const Vector w = parts.lambda_next - beta * (problem.A() * parts.x_next);
  const Vector u = sigma * tape.Draw(problem.m());
  return w - beta * (d * z) - beta * u;
}

// Returns (x̃ after the second iteration, lambda after the second iteration).
inline AdmmState MechanismM2(const AdmmState& state, const GradientOracle& f1,
                             const GradientOracle& f2, double sigma,
                             const Vector& z, const Vector& w_tilde,
                             NoiseTape& tape, const AdmmProblem& problem) {
  internal::CheckState(state, problem);
  const Matrix d = problem.D();
  Require(z.size() == d.cols() && w_tilde.size() == problem.m(),
          ErrorCode::kDimensionMismatch, "M2 argument lengths");
  const internal::StepParts parts = internal::CleanStep(state, f1, problem);
  const double beta = problem.beta();
  const Vector w = parts.lambda_next - beta * (problem.A() * parts.x_next);
  const Vector u = (w - w_tilde) / beta - d * z;
  Vector noise(problem.n());
  noise << u, z;
  const Vector x_tilde = parts.x_next + noise;
  const Vector y = problem.YUpdate(w_tilde);
  const Vector lambda2 = w_tilde - beta * (problem.B() * y - problem.c());
  Vector x2 = problem.XUpdate(x_tilde, f2(x_tilde), y, lambda2);
  x2 += sigma * tape.Draw(problem.n());
  return {std::move(x2), lambda2};
}

// State of the oracle variant, which carries y explicitly.
struct OracleState {
  Vector x;
  Vector y;
  Vector lambda;
};

// x, then y, then lambda; the gradient sample is perturbed by
// (I + eta beta AᵀA) z with z ~ N(0, rho² I).
inline OracleState OracleAdmmIteration(const OracleState& state,
                                       const GradientOracle& oracle_sample,
                                       double rho, NoiseTape& tape,
                                       const AdmmProblem& problem,
                                       Vector* z_out = nullptr) {
  Require(rho >= 0.0, ErrorCode::kInvalidArgument, "rho must be >= 0");
  const double beta = problem.beta();
  const double eta = problem.eta();
  const Matrix& a = problem.A();
  const Vector z = rho * tape.Draw(problem.n());
  const Vector g = oracle_sample(state.x) + z + eta * beta * (a.transpose() * (a * z));
  OracleState next;
  next.x = problem.XUpdate(state.x, g, state.y, state.lambda);
  next.y = problem.YUpdate(state.lambda - beta * (a * next.x));
  next.lambda =
      state.lambda - beta * (a * next.x + problem.B() * next.y - problem.c());
  if (z_out != nullptr) *z_out = z;
  return next;
}

// Same step with the noise placed on x after a clean update.
inline OracleState OracleAdmmIterationReparam(const OracleState& state,
                                              const GradientOracle& f,
                                              const Vector& x_noise,
                                              const AdmmProblem& problem) {
  const double beta = problem.beta();
  const Matrix& a = problem.A();
  OracleState next;
  next.x = problem.XUpdate(state.x, f(state.x), state.y, state.lambda) + x_noise;
  next.y = problem.YUpdate(state.lambda - beta * (a * next.x));
  next.lambda =
      state.lambda - beta * (a * next.x + problem.B() * next.y - problem.c());
  return next;
}

struct IterationRecord {
  int iter = 0;
  Vector x;
  Vector y;
  Vector lambda;
  Vector noise;
};

// Record 0 holds the start with empty y and zero noise. Record t >= 1 holds
// the released x̃_t, lambda_t, the y used to produce them, and N_t.
struct IterationTranscript {
  std::vector<IterationRecord> records;
};

using LossSequence = std::function<const GradientOracle&(int)>;

inline IterationTranscript RunNoisy(const AdmmState& start,
                                    const LossSequence& losses, double sigma,
                                    NoiseTape& tape, const AdmmProblem& problem,
                                    int iterations) {
  internal::CheckState(start, problem);
  IterationTranscript out;
  out.records.push_back(
      {0, start.x, Vector(0), start.lambda, Vector::Zero(problem.n())});
  AdmmState s = start;
  for (int t = 0; t < iterations; ++t) {
    const GradientOracle& f = losses(t);
    internal::StepParts parts = internal::CleanStep(s, f, problem);
    const Vector noise = sigma * tape.Draw(problem.n());
    s.x = parts.x_next + noise;
    s.lambda = parts.lambda_next;
    out.records.push_back({t + 1, s.x, parts.y, s.lambda, noise});
  }
  return out;
}

// Largest violation of the update equations between consecutive records.
inline double TranscriptResidual(const IterationTranscript& tr,
                                 const LossSequence& losses,
                                 const AdmmProblem& problem) {
  double worst = 0.0;
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    const IterationRecord& prev = tr.records[k - 1];
    const IterationRecord& cur = tr.records[k];
    const AdmmState next = AdmmIteration({prev.x, prev.lambda},
                                         losses(cur.iter - 1), problem);
    worst = std::max(worst, (next.x + cur.noise - cur.x).cwiseAbs().maxCoeff());
    worst = std::max(worst, (next.lambda - cur.lambda).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline void WriteTranscriptCsv(std::ostream& os,
                               const IterationTranscript& tr) {
  Require(!tr.records.empty(), ErrorCode::kInvalidArgument, "empty transcript");
  const IterationRecord& first = tr.records.front();
  os << "iter";
  for (Eigen::Index i = 0; i < first.x.size(); ++i) os << ",x" << i;
  for (Eigen::Index i = 0; i < first.lambda.size(); ++i) os << ",lambda" << i;
  for (Eigen::Index i = 0; i < first.noise.size(); ++i) os << ",noise" << i;
  os << "\n";
  for (const IterationRecord& r : tr.records) {
    os << r.iter;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) os << ',' << FormatDouble(r.x(i));
    for (Eigen::Index i = 0; i < r.lambda.size(); ++i) {
      os << ',' << FormatDouble(r.lambda(i));
    }
    for (Eigen::Index i = 0; i < r.noise.size(); ++i) {
      os << ',' << FormatDouble(r.noise(i));
    }
    os << "\n";
  }
}

}  // namespace padmm

#endif  // PADMM_ENGINE_H_
