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

#ifndef PADMM_JSON_IO_H_
#define PADMM_JSON_IO_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "padmm/accountant.h"
#include "padmm/error.h"
#include "padmm/experiment.h"
#include "padmm/format.h"
#include "padmm/linalg.h"
#include "padmm/norms.h"
#include "padmm/problem.h"

namespace padmm {

using Json = nlohmann::json;

inline Json VectorToJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json MatrixToJson(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

inline Vector VectorFromJson(const Json& j, const std::string& what) {
  Require(j.is_array(), ErrorCode::kInvalidArgument, what + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    Require(j[i].is_number(), ErrorCode::kInvalidArgument,
            what + " entries must be numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Matrix MatrixFromJson(const Json& j, const std::string& what) {
  Require(j.is_array() && !j.empty(), ErrorCode::kInvalidArgument,
          what + " must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    Require(j[i].is_array() && j[i].size() == cols, ErrorCode::kInvalidArgument,
            what + " rows must have equal length");
    m.row(static_cast<Eigen::Index>(i)) =
        VectorFromJson(j[i], what).transpose();
  }
  return m;
}

inline void RejectUnknownKeys(const Json& j, const std::set<std::string>& known,
                              const std::string& what) {
  Require(j.is_object(), ErrorCode::kInvalidArgument, what + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    Require(known.count(it.key()) == 1, ErrorCode::kInvalidArgument,
            "unknown key '" + it.key() + "' in " + what);
  }
}

template <typename T>
T GetOr(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad value for '") + key + "': " + e.what());
  }
}

inline Json RegularizerToJson(const Regularizer& g) {
  Json out;
  if (g.IsElasticNet()) {
    out["kind"] = "elastic_net";
    out["c1"] = g.elastic_net().c1;
    out["c2"] = g.elastic_net().c2;
  } else if (g.IsQuadratic()) {
    out["kind"] = "quadratic";
    out["P"] = MatrixToJson(g.quadratic().P);
    out["q"] = VectorToJson(g.quadratic().q);
  } else {
    throw Error(ErrorCode::kUnsupported, "custom regularizers have no JSON form");
  }
  if (g.HasEquality()) {
    out["E"] = MatrixToJson(g.equality_E());
    out["e"] = VectorToJson(g.equality_e());
  }
  return out;
}

inline Regularizer RegularizerFromJson(const Json& j) {
  RejectUnknownKeys(j, {"kind", "c1", "c2", "P", "q", "E", "e"}, "regularizer");
  const std::string kind = GetOr<std::string>(j, "kind", "");
  Regularizer g = Regularizer::MakeElasticNet(0.0, 0.0);
  if (kind == "elastic_net") {
    g = Regularizer::MakeElasticNet(GetOr<double>(j, "c1", 0.0),
                                    GetOr<double>(j, "c2", 0.0));
  } else if (kind == "quadratic") {
    Require(j.contains("P") && j.contains("q"), ErrorCode::kInvalidArgument,
            "quadratic regularizer needs P and q");
    g = Regularizer::MakeQuadratic(MatrixFromJson(j["P"], "P"),
                                   VectorFromJson(j["q"], "q"));
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "regularizer kind must be elastic_net or quadratic");
  }
  if (j.contains("E")) {
    g = g.WithEquality(MatrixFromJson(j["E"], "E"), VectorFromJson(j["e"], "e"));
  }
  return g;
}

// A problem instance as stored on disk; the loss is optional.
struct ProblemDocument {
  ConstraintSystem cs;
  Regularizer g = Regularizer::MakeElasticNet(0.0, 0.0);
  double beta = 1.0;
  double eta = 1.0;
  double sigma = 0.0;
  std::optional<QuadraticFunction> f;
};

inline Json ProblemToJson(const ProblemDocument& doc) {
  Json out;
  out["A"] = MatrixToJson(doc.cs.A);
  out["B"] = MatrixToJson(doc.cs.B);
  out["c"] = VectorToJson(doc.cs.c);
  out["beta"] = doc.beta;
  out["eta"] = doc.eta;
  out["sigma"] = doc.sigma;
  out["regularizer"] = RegularizerToJson(doc.g);
  if (doc.f) {
    out["f"] = {{"P", MatrixToJson(doc.f->P)}, {"q", VectorToJson(doc.f->q)}};
  }
  return out;
}

inline ProblemDocument ProblemFromJson(const Json& j) {
  RejectUnknownKeys(j, {"A", "B", "c", "beta", "eta", "sigma", "regularizer", "f"},
                    "problem");
  for (const char* key : {"A", "B", "c", "beta", "eta", "regularizer"}) {
    Require(j.contains(key), ErrorCode::kInvalidArgument,
            std::string("problem is missing '") + key + "'");
  }
  ProblemDocument doc;
  doc.cs.A = MatrixFromJson(j["A"], "A");
  doc.cs.B = MatrixFromJson(j["B"], "B");
  doc.cs.c = VectorFromJson(j["c"], "c");
  doc.cs.Validate();
  doc.beta = GetOr<double>(j, "beta", 1.0);
  doc.eta = GetOr<double>(j, "eta", 1.0);
  doc.sigma = GetOr<double>(j, "sigma", 0.0);
  doc.g = RegularizerFromJson(j["regularizer"]);
  if (j.contains("f")) {
    RejectUnknownKeys(j["f"], {"P", "q"}, "f");
    doc.f = QuadraticFunction{MatrixFromJson(j["f"]["P"], "f.P"),
                              VectorFromJson(j["f"]["q"], "f.q")};
  }
  return doc;
}

inline Json ContractionToJson(const ContractionReport& r) {
  return {{"nu", r.nu},           {"mu", r.mu},
          {"mu_g", r.mu_g},       {"beta", r.beta},
          {"op_norm_ab", r.op_ab}, {"eta", r.eta},
          {"P", r.P},             {"Q", r.Q},
          {"R", r.R},             {"S", r.S},
          {"contraction", r.contraction}, {"eta_low", r.eta_low},
          {"eta_high", r.eta_high}, {"eta_mid", r.eta_mid}};
}

inline Json BoundReportToJson(const PrivacyBoundReport& r) {
  Json out = {{"variant", r.variant},
              {"local_dz", r.local_dz},
              {"amplified_dz", r.amplified_dz},
              {"amplified_dz_framework", r.amplified_dz_framework},
              {"C", r.C},
              {"C_K", r.C_K},
              {"T_pairs", r.T_pairs},
              {"total_iterations", r.total_iterations},
              {"sigma", r.sigma},
              {"delta", r.delta},
              {"dist0", r.dist0},
              {"eta", r.eta},
              {"beta", r.beta},
              {"op_norm_a", r.op_norm_a}};
  if (r.contraction) out["contraction"] = *r.contraction;
  if (r.kappa) out["kappa"] = *r.kappa;
  return out;
}

inline Json SettingToJson(const LassoSetting& s) {
  Json out = {{"id", s.id}, {"mu", s.mu},   {"beta", s.beta},
              {"c2", s.c2}, {"c1", s.c1},   {"sigma", s.sigma}};
  if (s.eta) out["eta"] = *s.eta;
  return out;
}

inline Json ExperimentConfigToJson(const ExperimentConfig& c) {
  Json settings = Json::array();
  for (const LassoSetting& s : c.settings) settings.push_back(SettingToJson(s));
  return {{"seed", c.seed},
          {"trials", c.trials},
          {"iterations", c.iterations},
          {"n", c.n},
          {"N", c.N},
          {"sigma_b", c.sigma_b},
          {"x0_value", c.x0_value},
          {"gap_every", c.gap_every},
          {"gap_uses_noisy_x", c.gap_uses_noisy_x},
          {"ttest_iteration", c.ttest_iteration},
          {"confidence", c.confidence},
          {"plots", c.plots},
          {"settings", settings}};
}

// Settings may list several sigmas; each expands to one setting.
inline ExperimentConfig ExperimentConfigFromJson(const Json& j) {
  RejectUnknownKeys(j,
                    {"seed", "trials", "iterations", "n", "N", "sigma_b",
                     "x0_value", "gap_every", "gap_uses_noisy_x",
                     "ttest_iteration", "confidence", "plots", "settings",
                     "sigmas"},
                    "config");
  ExperimentConfig c;
  c.seed = GetOr<std::uint64_t>(j, "seed", c.seed);
  c.trials = GetOr<int>(j, "trials", c.trials);
  c.iterations = GetOr<int>(j, "iterations", c.iterations);
  c.n = GetOr<int>(j, "n", c.n);
  c.N = GetOr<int>(j, "N", c.N);
  c.sigma_b = GetOr<double>(j, "sigma_b", c.sigma_b);
  c.x0_value = GetOr<double>(j, "x0_value", c.x0_value);
  c.gap_every = GetOr<int>(j, "gap_every", c.gap_every);
  c.gap_uses_noisy_x = GetOr<bool>(j, "gap_uses_noisy_x", c.gap_uses_noisy_x);
  c.ttest_iteration = GetOr<int>(j, "ttest_iteration", c.ttest_iteration);
  c.confidence = GetOr<double>(j, "confidence", c.confidence);
  c.plots = GetOr<bool>(j, "plots", c.plots);
  std::vector<double> shared_sigmas;
  if (j.contains("sigmas")) {
    const Vector v = VectorFromJson(j["sigmas"], "sigmas");
    shared_sigmas.assign(v.data(), v.data() + v.size());
  }
  Require(j.contains("settings") && j["settings"].is_array(),
          ErrorCode::kInvalidArgument, "config needs a 'settings' array");
  int index = 0;
  for (const Json& s : j["settings"]) {
    RejectUnknownKeys(s, {"id", "mu", "beta", "c2", "c1", "sigma", "sigmas", "eta"},
                      "setting");
    LassoSetting base;
    base.id = GetOr<std::string>(s, "id", "s" + std::to_string(index));
    base.mu = GetOr<double>(s, "mu", base.mu);
    base.beta = GetOr<double>(s, "beta", base.beta);
    base.c2 = GetOr<double>(s, "c2", base.c2);
    base.c1 = GetOr<double>(s, "c1", base.c1);
    if (s.contains("eta")) base.eta = GetOr<double>(s, "eta", 0.0);
    std::vector<double> sigmas = shared_sigmas;
    if (s.contains("sigmas")) {
      const Vector v = VectorFromJson(s["sigmas"], "sigmas");
      sigmas.assign(v.data(), v.data() + v.size());
    }
    if (s.contains("sigma")) sigmas = {GetOr<double>(s, "sigma", 0.0)};
    if (sigmas.empty()) sigmas = {0.0};
    for (double sigma : sigmas) {
      LassoSetting one = base;
      one.sigma = sigma;
      if (sigmas.size() > 1) one.id = base.id + "_sigma" + FormatDouble(sigma);
      c.settings.push_back(one);
    }
    ++index;
  }
  c.Validate();
  return c;
}

}  // namespace padmm

#endif  // PADMM_JSON_IO_H_
