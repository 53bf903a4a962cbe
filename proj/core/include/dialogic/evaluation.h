// core/include/dialogic/evaluation.h

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

#ifndef DIALOGIC_EVALUATION_H_
#define DIALOGIC_EVALUATION_H_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/error.h"

namespace dialogic {

struct ScoredExample {
  double score = 0.0;
  int label = 0;
};

/// Threshold sweep over descending distinct scores; tied scores collapse
/// into one step. Points run from (0,0) to (1,1) with fpr and tpr both
/// non-decreasing.
struct RocCurve {
  std::vector<std::pair<double, double>> points;
  std::vector<double> thresholds;
};

struct AucScore {
  double value = 0.0;
  InstructionType instruction = InstructionType::kGreeting;
  std::string model;
  int n_pos = 0;
  int n_neg = 0;
};

/// Requires at least one positive and one negative (DegenerateLabels
/// otherwise) and finite scores.
RocCurve roc_curve(const std::vector<ScoredExample>& examples);

/// Trapezoid area under roc_curve. Equals the rank statistic
/// (concordant + 0.5 * tied) / (n_pos * n_neg); auc_pairwise computes that
/// form directly and exists as the independent cross-check.
double auc(const std::vector<ScoredExample>& examples);
double auc_pairwise(const std::vector<ScoredExample>& examples);

using Scorer = std::function<double(const LabeledSentence&)>;

struct EvalEntry {
  InstructionType instruction = InstructionType::kGreeting;
  std::string model;
  AucScore auc;
  RocCurve curve;
};

/// One entry per (instruction, model), ordered by instruction then model
/// name so the report is canonical regardless of insertion order.
struct EvalReport {
  std::vector<EvalEntry> entries;
};

EvalReport evaluate_models(
    const std::map<std::string, Scorer>& models,
    const std::map<InstructionType, std::vector<LabeledSentence>>& test_sets);

/// Writes `auc_report.csv` (header instruction,model,auc,n_pos,n_neg) and
/// one self-contained `roc_<instruction>.svg` per instruction with every
/// model's curve, FPR/TPR axes, the chance diagonal and a legend carrying
/// AUC to 3 decimals.
void render_report(const EvalReport& report,
                   const std::filesystem::path& out_dir);

/// Maps an ROC point to SVG canvas coordinates; exposed so readers of the
/// emitted files can invert it exactly.
std::pair<double, double> svg_point(double fpr, double tpr);

}  // namespace dialogic

#endif  // DIALOGIC_EVALUATION_H_
