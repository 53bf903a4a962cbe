// core/include/dialogic/pipeline.h

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

#ifndef DIALOGIC_PIPELINE_H_
#define DIALOGIC_PIPELINE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dialogic/baselines.h"
#include "dialogic/classifier.h"
#include "dialogic/corpus.h"
#include "dialogic/embedding.h"
#include "dialogic/evaluation.h"
#include "dialogic/transcription.h"
#include "dialogic/vad.h"

namespace dialogic {

struct LogRegConfig {
  double l2 = 1e-4;
  int epochs = 300;
  double learning_rate = 0.5;
};

struct SvmConfig {
  double c = 1.0;
  int epochs = 300;
  double learning_rate = 0.1;
};

struct BaselinesConfig {
  LogRegConfig logreg;
  SvmConfig svm;
  GbdtConfig gbdt;
};

/// One configuration for the whole workflow. Every stage derives its own
/// seed from `seed` with a fixed tag, so a single root seed reproduces the
/// full run; no output file contains a timestamp.
struct PipelineConfig {
  std::filesystem::path audio_dir;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 42;
  std::array<double, 3> split_ratios = {0.8, 0.1, 0.1};
  int sentences_per_type = 2940;
  double predict_threshold = 0.5;
  /// Per-type overrides of predict_threshold, keyed by serialized name.
  std::map<std::string, double> thresholds;
  VadConfig vad;
  AsrBackendConfig asr;
  TrainConfig train;
  SkipGramConfig embedding;
  BaselinesConfig baselines;

  double threshold_for(InstructionType type) const;
  void validate() const;

  // Artifact locations under out_dir.
  std::filesystem::path segments_dir() const { return out_dir / "segments"; }
  std::filesystem::path utterances_dir() const {
    return out_dir / "utterances";
  }
  std::filesystem::path datasets_dir() const { return out_dir / "datasets"; }
  std::filesystem::path models_dir() const { return out_dir / "models"; }
  std::filesystem::path reports_dir() const { return out_dir / "reports"; }
  std::filesystem::path timelines_dir() const {
    return out_dir / "timelines";
  }
  std::filesystem::path embeddings_file() const {
    return out_dir / "embeddings.txt";
  }
  std::filesystem::path dataset_file(InstructionType type) const {
    return datasets_dir() / (to_string(type) + ".jsonl");
  }
  std::filesystem::path model_file(InstructionType type) const {
    return models_dir() / (to_string(type) + ".lstm.json");
  }
  std::filesystem::path baselines_file(InstructionType type) const {
    return models_dir() / (to_string(type) + ".baselines.json");
  }
  std::filesystem::path history_file(InstructionType type) const {
    return models_dir() / (to_string(type) + ".history.csv");
  }
};

/// Strict JSON parse: unknown keys are configuration errors.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct StageStatus {
  int processed = 0;
  int failed = 0;
  std::vector<std::string> warnings;
};

/// audio_dir WAVs -> one segment TSV per recording. Per-file parse errors
/// become warnings; Error is raised only when every file fails.
StageStatus cmd_vad(const PipelineConfig& config);

/// Segment TSVs -> utterance JSONL per recording via the configured ASR
/// backend.
StageStatus cmd_transcribe(const PipelineConfig& config);

/// Six synthetic dataset files, sentences_per_type each, split half
/// positive half negative.
void cmd_gen_data(const PipelineConfig& config);

/// Skip-gram table trained on the text of all six datasets.
void cmd_train_embeddings(const PipelineConfig& config);

/// Six LSTM classifiers plus baselines plus per-epoch history files.
void cmd_train(const PipelineConfig& config);

/// Test-split AUCs and ROC curves for all four model families.
EvalReport cmd_evaluate(const PipelineConfig& config);

struct Prediction {
  std::string text;
  std::vector<std::string> tags;
  std::map<std::string, double> probs;
};

/// All six classifiers on one sentence; tags are the types whose
/// probability reaches the per-type threshold, in canonical type order.
Prediction predict_sentence(const std::string& text,
                            const EmbeddingTable& table,
                            const std::vector<LstmClassifier>& models,
                            const PipelineConfig& config);

/// Raw text in, prediction out (loads table and models from out_dir).
Prediction cmd_predict_text(const PipelineConfig& config,
                            const std::string& text);

/// Utterance file in, one prediction per utterance out; skipped utterances
/// yield empty tag sets.
std::vector<Prediction> cmd_predict_file(
    const PipelineConfig& config, const std::filesystem::path& utterance_file,
    const std::filesystem::path& output_file);

/// vad -> transcribe -> predict on one recording; writes the timeline
/// JSONL {start_ms, end_ms, text, tags, probs}, one record per VAD segment.
std::filesystem::path cmd_e2e(const PipelineConfig& config,
                              const std::filesystem::path& wav_path);

/// Max relative gradient error over `instances` random small models.
double cmd_gradcheck(const PipelineConfig& config, int instances = 20,
                     double epsilon = 1e-5);

}  // namespace dialogic

#endif  // DIALOGIC_PIPELINE_H_
