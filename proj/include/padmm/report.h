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

#ifndef PADMM_REPORT_H_
#define PADMM_REPORT_H_

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "padmm/experiment.h"
#include "padmm/format.h"
#include "padmm/json_io.h"

namespace padmm {

// Comment lines that open every CSV written by the tools.
inline std::string ProvenanceHeader(std::uint64_t seed, const Json& config) {
  return "# seed=" + std::to_string(seed) + "\n# config=" + config.dump() + "\n";
}

inline std::string GapsCsv(const ExperimentResult& r, const ExperimentConfig& c) {
  std::ostringstream os;
  os << ProvenanceHeader(c.seed, ExperimentConfigToJson(c));
  os << "setting_id,trial,iter,gap\n";
  for (const GapTrajectory& t : r.trajectories) {
    for (std::size_t trial = 0; trial < t.gaps.size(); ++trial) {
      for (std::size_t k = 0; k < t.iters.size(); ++k) {
        os << t.setting_id << ',' << trial << ',' << t.iters[k] << ','
           << FormatDouble(t.gaps[trial][k]) << '\n';
      }
    }
  }
  return os.str();
}

inline std::string SummaryCsv(const ExperimentResult& r,
                              const ExperimentConfig& c) {
  std::ostringstream os;
  os << ProvenanceHeader(c.seed, ExperimentConfigToJson(c));
  os << "setting_id,iter,mean_gap\n";
  for (const GapTrajectory& t : r.trajectories) {
    for (std::size_t k = 0; k < t.iters.size(); ++k) {
      os << t.setting_id << ',' << t.iters[k] << ',' << FormatDouble(t.mean[k])
         << '\n';
    }
  }
  return os.str();
}

inline std::string TTestsCsv(const ExperimentResult& r,
                             const ExperimentConfig& c) {
  std::ostringstream os;
  os << ProvenanceHeader(c.seed, ExperimentConfigToJson(c));
  os << "setting_a,setting_b,sigma_a,sigma_b,iter,mean_a,mean_b,p_value\n";
  for (const TTestRow& t : r.ttests) {
    os << t.setting_a << ',' << t.setting_b << ',' << FormatDouble(t.sigma_a)
       << ',' << FormatDouble(t.sigma_b) << ',' << t.iter << ','
       << FormatDouble(t.mean_a) << ',' << FormatDouble(t.mean_b) << ','
       << FormatDouble(t.p_value) << '\n';
  }
  return os.str();
}

inline std::string ConvergenceCsv(const ExperimentResult& r,
                                  const ExperimentConfig& c) {
  std::ostringstream os;
  os << ProvenanceHeader(c.seed, ExperimentConfigToJson(c));
  os << "setting_id,sigma,eta,contraction,reference_value,convergence_iterations\n";
  for (const SettingSummary& s : r.summaries) {
    os << s.setting_id << ',' << FormatDouble(s.sigma) << ','
       << FormatDouble(s.eta) << ','
       << (s.contraction ? FormatDouble(*s.contraction) : std::string("")) << ','
       << FormatDouble(s.reference_value) << ','
       << (s.convergence_iterations ? std::to_string(*s.convergence_iterations)
                                    : std::string("never"))
       << '\n';
  }
  return os.str();
}

// Mean gap against iteration, one polyline per setting. Log scale when every
// plotted mean is positive.
inline std::string MeanGapSvg(const ExperimentResult& r,
                              const ExperimentConfig& c) {
  const double width = 720.0;
  const double height = 440.0;
  const double left = 70.0;
  const double right = 170.0;
  const double top = 30.0;
  const double bottom = 50.0;
  double lo = INFINITY;
  double hi = -INFINITY;
  int max_iter = 1;
  for (const GapTrajectory& t : r.trajectories) {
    for (double v : t.mean) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!t.iters.empty()) max_iter = std::max(max_iter, t.iters.back());
  }
  const bool log_scale = lo > 0.0;
  auto tr = [log_scale](double v) { return log_scale ? std::log10(v) : v; };
  double ylo = tr(lo);
  double yhi = tr(hi);
  if (!(yhi > ylo)) {
    ylo -= 1.0;
    yhi += 1.0;
  }
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double it) { return left + pw * it / max_iter; };
  auto py = [&](double v) { return top + ph * (1.0 - (tr(v) - ylo) / (yhi - ylo)); };
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<!-- seed=" << c.seed << " -->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw
     << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
     << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">iteration</text>\n";
  os << "<text x=\"14\" y=\"" << top + ph / 2
     << "\" font-size=\"13\" transform=\"rotate(-90 14 " << top + ph / 2
     << ")\" text-anchor=\"middle\">" << (log_scale ? "log10 mean gap" : "mean gap")
     << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + 4
     << "\" text-anchor=\"end\" font-size=\"11\">" << FormatDouble(hi)
     << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + ph
     << "\" text-anchor=\"end\" font-size=\"11\">" << FormatDouble(lo)
     << "</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 16
     << "\" text-anchor=\"end\" font-size=\"11\">" << max_iter << "</text>\n";
  for (std::size_t s = 0; s < r.trajectories.size(); ++s) {
    const GapTrajectory& t = r.trajectories[s];
    const char* color = kColors[s % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < t.iters.size(); ++k) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(t.iters[k]), py(t.mean[k]));
      os << buf;
    }
    os << "\"/>\n";
    os << "<text x=\"" << left + pw + 10 << "\" y=\"" << top + 16 * (s + 1)
       << "\" font-size=\"12\" fill=\"" << color << "\">" << t.setting_id
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace padmm

#endif  // PADMM_REPORT_H_
