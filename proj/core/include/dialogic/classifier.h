// core/include/dialogic/classifier.h

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

#ifndef DIALOGIC_CLASSIFIER_H_
#define DIALOGIC_CLASSIFIER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/embedding.h"
#include "dialogic/lstm.h"
#include "dialogic/matrix.h"

namespace dialogic {

/// Two-layer fully connected head on the final LSTM hidden state:
/// rectifier between the layers, logistic sigmoid on the scalar output.
struct FeedForwardHead {
  Mat w1;   // ff_dim x hidden
  Vec b1;   // ff_dim
  Vec w2;   // ff_dim
  double b2 = 0.0;

  static FeedForwardHead zeros(int hidden, int ff_dim);
  static FeedForwardHead init(int hidden, int ff_dim, Rng& rng);
};

/// Head output before the sigmoid. `hidden_pre` receives the layer-1
/// pre-activations when non-null (needed by the backward pass).
double head_logit(const FeedForwardHead& head, const Vec& h,
                  Vec* hidden_pre = nullptr);

/// Probability in (0,1): sigmoid of the clamped logit.
double head_probability(const FeedForwardHead& head, const Vec& h);

struct TrainMeta {
  std::uint64_t seed = 0;
  int epochs_run = 0;
  double best_val_auc = 0.0;
};

/// One binary classifier for one instruction type.
struct LstmClassifier {
  InstructionType instruction = InstructionType::kGreeting;
  int input_dim = 0;
  int hidden = 0;
  int ff_dim = 0;
  LstmParams lstm;
  FeedForwardHead head;
  TrainMeta meta;
};

struct TrainConfig {
  int hidden = 64;
  int ff_dim = 32;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int max_epochs = 30;
  double clip_norm = 5.0;
  int patience = 5;
  std::uint64_t seed = 0;
  void validate() const;
};

struct EpochStats {
  double train_loss = 0.0;
  double val_auc = 0.0;
};

struct TrainResult {
  LstmClassifier model;
  std::vector<EpochStats> history;
};

/// Probability that `text` is an instance of the model's instruction type.
/// Tokenize, embed, run the LSTM, apply the head. ShapeMismatch when the
/// table dimension disagrees with the model.
double predict(const std::string& text, const EmbeddingTable& table,
               const LstmClassifier& model);

/// Minimizes mean binary cross-entropy with mini-batch Adam (0.9/0.999,
/// eps 1e-8), exact BPTT gradients and global-norm clipping. Sequences in a
/// batch are processed individually and gradients accumulated, so no
/// padding or masking is involved. After each epoch the validation AUC is
/// computed; the best snapshot is kept and training stops once `patience`
/// consecutive epochs fail to improve it. Deterministic in config.seed.
/// Throws DegenerateLabels when either split lacks a class.
TrainResult train_classifier(const std::vector<LabeledSentence>& train,
                             const std::vector<LabeledSentence>& validation,
                             const EmbeddingTable& table,
                             const TrainConfig& config);

/// Versioned JSON document with dims, weights in row-major order and
/// training metadata. Load rejects any format_version it does not know.
void save_classifier(const LstmClassifier& model,
                     const std::filesystem::path& path);
LstmClassifier load_classifier(const std::filesystem::path& path);

}  // namespace dialogic

#endif  // DIALOGIC_CLASSIFIER_H_
