// core/src/evaluation.cc

// Copyright 2026  The Dialogic Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialogic/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dialogic {

namespace {

void check_examples(const std::vector<ScoredExample>& examples) {
  int n_pos = 0, n_neg = 0;
  for (const ScoredExample& e : examples) {
    if (!std::isfinite(e.score)) {
      throw std::invalid_argument("scores must be finite");
    }
    if (e.label != 0 && e.label != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    (e.label == 1 ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateLabels("ROC/AUC needs at least one example of each class");
  }
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string format_g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Canvas geometry shared by render_report and svg_point.
constexpr double kSvgWidth = 720.0;
constexpr double kSvgHeight = 480.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginTop = 20.0;
constexpr double kPlotWidth = 480.0;
constexpr double kPlotHeight = 400.0;

const char* kCurveColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b"};

}  // namespace

RocCurve roc_curve(const std::vector<ScoredExample>& examples) {
  check_examples(examples);
  std::vector<ScoredExample> sorted = examples;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredExample& a, const ScoredExample& b) {
              return a.score > b.score;
            });
  double n_pos = 0, n_neg = 0;
  for (const ScoredExample& e : sorted) (e.label == 1 ? n_pos : n_neg) += 1;

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  double tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    double score = sorted[i].score;
    // Tied scores move in one step, which draws the diagonal segment.
    while (i < sorted.size() && sorted[i].score == score) {
      (sorted[i].label == 1 ? tp : fp) += 1;
      ++i;
    }
    curve.thresholds.push_back(score);
    curve.points.emplace_back(fp / n_neg, tp / n_pos);
  }
  if (curve.points.back() != std::make_pair(1.0, 1.0)) {
    curve.points.emplace_back(1.0, 1.0);
  }
  return curve;
}

double auc(const std::vector<ScoredExample>& examples) {
  RocCurve curve = roc_curve(examples);
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    auto [x0, y0] = curve.points[k - 1];
    auto [x1, y1] = curve.points[k];
    area += (x1 - x0) * (y0 + y1) * 0.5;
  }
  return area;
}

double auc_pairwise(const std::vector<ScoredExample>& examples) {
  check_examples(examples);
  double concordant = 0.0;
  std::int64_t pairs = 0;
  for (const ScoredExample& p : examples) {
    if (p.label != 1) continue;
    for (const ScoredExample& n : examples) {
      if (n.label != 0) continue;
      ++pairs;
      if (p.score > n.score) {
        concordant += 1.0;
      } else if (p.score == n.score) {
        concordant += 0.5;
      }
    }
  }
  return concordant / static_cast<double>(pairs);
}

EvalReport evaluate_models(
    const std::map<std::string, Scorer>& models,
    const std::map<InstructionType, std::vector<LabeledSentence>>& test_sets) {
  EvalReport report;
  // std::map iteration already yields canonical (instruction, model) order.
  for (const auto& [instruction, sentences] : test_sets) {
    for (const auto& [name, scorer] : models) {
      std::vector<ScoredExample> scored;
      scored.reserve(sentences.size());
      int n_pos = 0, n_neg = 0;
      for (const LabeledSentence& s : sentences) {
        scored.push_back({scorer(s), s.label});
        (s.label == 1 ? n_pos : n_neg) += 1;
      }
      EvalEntry entry;
      entry.instruction = instruction;
      entry.model = name;
      entry.curve = roc_curve(scored);
      entry.auc = {auc(scored), instruction, name, n_pos, n_neg};
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

std::pair<double, double> svg_point(double fpr, double tpr) {
  return {kMarginLeft + fpr * kPlotWidth,
          kMarginTop + (1.0 - tpr) * kPlotHeight};
}

void render_report(const EvalReport& report,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir / "auc_report.csv");
  if (!csv) {
    throw Error("cannot write report CSV in " + out_dir.string());
  }
  csv << "instruction,model,auc,n_pos,n_neg\n";
  std::map<InstructionType, std::vector<const EvalEntry*>> by_type;
  for (const EvalEntry& entry : report.entries) {
    csv << to_string(entry.instruction) << ',' << entry.model << ','
        << format_g12(entry.auc.value) << ',' << entry.auc.n_pos << ','
        << entry.auc.n_neg << '\n';
    by_type[entry.instruction].push_back(&entry);
  }
  csv.close();

  for (const auto& [instruction, entries] : by_type) {
    std::ofstream svg(out_dir / ("roc_" + to_string(instruction) + ".svg"));
    if (!svg) {
      throw Error("cannot write SVG report in " + out_dir.string());
    }
    auto [x0, y0] = svg_point(0.0, 1.0);
    auto [x1, y1] = svg_point(1.0, 0.0);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth
        << "\" height=\"" << kSvgHeight << "\">\n";
    svg << "  <rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\""
        << (x1 - x0) << "\" height=\"" << (y1 - y0)
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    auto [dx0, dy0] = svg_point(0.0, 0.0);
    auto [dx1, dy1] = svg_point(1.0, 1.0);
    svg << "  <line x1=\"" << dx0 << "\" y1=\"" << dy0 << "\" x2=\"" << dx1
        << "\" y2=\"" << dy1
        << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";
    svg << "  <text x=\"" << (kMarginLeft + kPlotWidth / 2) << "\" y=\""
        << (kMarginTop + kPlotHeight + 35)
        << "\" text-anchor=\"middle\">FPR</text>\n";
    svg << "  <text x=\"20\" y=\"" << (kMarginTop + kPlotHeight / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (kMarginTop + kPlotHeight / 2) << ")\">TPR</text>\n";
    svg << "  <text x=\"" << (kMarginLeft + kPlotWidth / 2) << "\" y=\""
        << (kMarginTop + kPlotHeight + 55) << "\" text-anchor=\"middle\">"
        << to_string(instruction) << "</text>\n";

    int color_index = 0;
    double legend_y = kMarginTop + 20.0;
    for (const EvalEntry* entry : entries) {
      const char* color =
          kCurveColors[color_index % (sizeof(kCurveColors) /
                                      sizeof(kCurveColors[0]))];
      svg << "  <polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (auto [fpr, tpr] : entry->curve.points) {
        auto [px, py] = svg_point(fpr, tpr);
        if (!first) svg << ' ';
        svg << format_g12(px) << ',' << format_g12(py);
        first = false;
      }
      svg << "\"/>\n";
      double lx = kMarginLeft + kPlotWidth + 20.0;
      svg << "  <line x1=\"" << lx << "\" y1=\"" << (legend_y - 4) << "\" x2=\""
          << (lx + 24) << "\" y2=\"" << (legend_y - 4) << "\" stroke=\""
          << color << "\" stroke-width=\"1.5\"/>\n";
      svg << "  <text x=\"" << (lx + 30) << "\" y=\"" << legend_y << "\">"
          << entry->model << " (AUC=" << format_fixed(entry->auc.value, 3)
          << ")</text>\n";
      legend_y += 20.0;
      ++color_index;
    }
    svg << "</svg>\n";
  }
}

}  // namespace dialogic
