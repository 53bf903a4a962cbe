// core/include/dialogic/baselines.h

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

#ifndef DIALOGIC_BASELINES_H_
#define DIALOGIC_BASELINES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dialogic/embedding.h"
#include "dialogic/matrix.h"

namespace dialogic {

/// Arithmetic mean of the sentence's embedding rows; the shared feature map
/// for all baselines, so differences against the LSTM isolate sequence
/// modeling. An empty sentence maps to the zero vector.
Vec featurize_mean(const std::string& text, const EmbeddingTable& table);

/// w . x + b. Serves logistic regression (probability via sigmoid) and the
/// linear SVM (raw margin).
struct LinearModel {
  Vec weights;
  double bias = 0.0;

  double score(std::span<const double> x) const;
};

/// Full-batch gradient descent on binary cross-entropy with an L2 penalty
/// on the weights (not the bias). Weights start uniform in [-0.01, 0.01]
/// from the seed.
LinearModel train_logreg(const Mat& features, const std::vector<int>& labels,
                         double l2, int epochs, double learning_rate,
                         std::uint64_t seed);

/// Probability in (0,1) for a logreg model.
double logreg_probability(const LinearModel& model, std::span<const double> x);

/// Deterministic full-batch subgradient descent on
/// 0.5 * ||w||^2 + c * mean hinge(1 - y * score) with labels in {-1,+1}
/// internally and a linearly decaying step. Scores are raw margins; AUC is
/// rank based, so no calibration is needed.
LinearModel train_linear_svm(const Mat& features,
                             const std::vector<int>& labels, double c,
                             int epochs, double learning_rate,
                             std::uint64_t seed);

/// One node of a regression tree; nodes live in a flat vector, children by
/// index, leaves carry `value` and have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  double value = 0.0;
  int left = -1;
  int right = -1;
};

struct GbdtModel {
  std::vector<std::vector<TreeNode>> trees;
  double shrinkage = 0.1;

  double score(std::span<const double> x) const;
};

struct GbdtConfig {
  int n_trees = 50;
  int max_depth = 3;
  double shrinkage = 0.1;
};

/// Stagewise logistic-loss boosting: each tree fits the residual y - p by
/// exact greedy splits over midpoints of sorted unique feature values
/// (gain ties broken by lowest feature index, then lowest threshold), leaf
/// values by one Newton step. The scan is exhaustive and deterministic;
/// `seed` is accepted for interface symmetry with the other trainers but
/// no subsampling exists to consume it.
GbdtModel train_gbdt(const Mat& features, const std::vector<int>& labels,
                     const GbdtConfig& config, std::uint64_t seed);

/// Mean logistic loss of the model truncated to its first `n_trees` trees;
/// exposed so the monotone-loss property is checkable from outside.
double gbdt_train_loss(const GbdtModel& model, const Mat& features,
                       const std::vector<int>& labels, int n_trees);

/// Serialization for all three baselines of one instruction type, one JSON
/// document with a `kind` tag per model.
struct BaselineSet {
  LinearModel logreg;
  LinearModel svm;
  GbdtModel gbdt;
};

void save_baselines(const BaselineSet& set, const std::filesystem::path& path);
BaselineSet load_baselines(const std::filesystem::path& path);

}  // namespace dialogic

#endif  // DIALOGIC_BASELINES_H_
