// core/src/pipeline.cc

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

#include "dialogic/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "dialogic/audio.h"
#include "dialogic/gradcheck.h"
#include "dialogic/rng.h"

namespace dialogic {

namespace {

void reject_unknown_keys(const nlohmann::json& obj,
                         const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (known.find(key) == known.end()) {
      throw std::invalid_argument("unknown config key '" + key + "' in " +
                                  where);
    }
  }
}

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& into) {
  if (obj.contains(key)) into = obj.at(key).get<T>();
}

std::vector<std::filesystem::path> wav_files_in(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string format_g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<LabeledSentence> read_required_dataset(
    const PipelineConfig& config, InstructionType type) {
  std::filesystem::path path = config.dataset_file(type);
  if (!std::filesystem::exists(path)) {
    throw std::invalid_argument("dataset file missing (run gen-data first): " +
                                path.string());
  }
  return read_dataset_file(path);
}

EmbeddingTable load_required_embeddings(const PipelineConfig& config) {
  if (!std::filesystem::exists(config.embeddings_file())) {
    throw std::invalid_argument(
        "embeddings file missing (run train-embeddings first): " +
        config.embeddings_file().string());
  }
  return load_embeddings(config.embeddings_file());
}

std::vector<LstmClassifier> load_all_classifiers(
    const PipelineConfig& config) {
  std::vector<LstmClassifier> models;
  for (InstructionType type : kAllInstructionTypes) {
    std::filesystem::path path = config.model_file(type);
    if (!std::filesystem::exists(path)) {
      throw std::invalid_argument("model file missing (run train first): " +
                                  path.string());
    }
    models.push_back(load_classifier(path));
  }
  return models;
}

Mat feature_matrix(const std::vector<LabeledSentence>& sentences,
                   const EmbeddingTable& table, std::vector<int>* labels) {
  Mat features(static_cast<int>(sentences.size()), table.dim);
  if (labels) labels->clear();
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Vec mean = featurize_mean(sentences[i].text, table);
    std::copy(mean.begin(), mean.end(),
              features.row(static_cast<int>(i)).begin());
    if (labels) labels->push_back(sentences[i].label);
  }
  return features;
}

nlohmann::json prediction_to_json(const Prediction& p,
                                  std::int64_t start_ms = -1,
                                  std::int64_t end_ms = -1) {
  nlohmann::json probs = nlohmann::json::object();
  for (const auto& [name, value] : p.probs) probs[name] = value;
  nlohmann::json record = {
      {"text", p.text},
      {"tags", p.tags},
      {"probs", std::move(probs)},
  };
  if (start_ms >= 0) {
    record["start_ms"] = start_ms;
    record["end_ms"] = end_ms;
  }
  return record;
}

}  // namespace

double PipelineConfig::threshold_for(InstructionType type) const {
  auto it = thresholds.find(to_string(type));
  return it == thresholds.end() ? predict_threshold : it->second;
}

void PipelineConfig::validate() const {
  double sum = split_ratios[0] + split_ratios[1] + split_ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_ratios must sum to 1");
  }
  if (sentences_per_type < 2) {
    throw std::invalid_argument("sentences_per_type must be >= 2");
  }
  for (const auto& [name, value] : thresholds) {
    instruction_from_string(name);
    if (value < 0.0 || value > 1.0) {
      throw std::invalid_argument("threshold for " + name +
                                  " must be in [0,1]");
    }
  }
  vad.validate();
  train.validate();
  embedding.validate();
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file is not valid JSON: " +
                                std::string(e.what()));
  }
  reject_unknown_keys(doc,
                      {"audio_dir", "out_dir", "seed", "split_ratios",
                       "sentences_per_type", "predict_threshold", "thresholds",
                       "vad", "asr", "train", "embedding", "baselines"},
                      "top level");
  PipelineConfig config;
  if (doc.contains("audio_dir")) {
    config.audio_dir = doc["audio_dir"].get<std::string>();
  }
  if (doc.contains("out_dir")) {
    config.out_dir = doc["out_dir"].get<std::string>();
  }
  read_field(doc, "seed", config.seed);
  if (doc.contains("split_ratios")) {
    auto ratios = doc["split_ratios"].get<std::vector<double>>();
    if (ratios.size() != 3) {
      throw std::invalid_argument("split_ratios must have 3 entries");
    }
    std::copy(ratios.begin(), ratios.end(), config.split_ratios.begin());
  }
  read_field(doc, "sentences_per_type", config.sentences_per_type);
  read_field(doc, "predict_threshold", config.predict_threshold);
  if (doc.contains("thresholds")) {
    for (const auto& [name, value] : doc["thresholds"].items()) {
      config.thresholds[name] = value.get<double>();
    }
  }
  if (doc.contains("vad")) {
    const nlohmann::json& v = doc["vad"];
    reject_unknown_keys(v,
                        {"frame_ms", "hop_ms", "noise_percentile",
                         "threshold_factor", "min_speech_ms", "max_gap_ms",
                         "pad_ms"},
                        "vad");
    read_field(v, "frame_ms", config.vad.frame_ms);
    read_field(v, "hop_ms", config.vad.hop_ms);
    read_field(v, "noise_percentile", config.vad.noise_percentile);
    read_field(v, "threshold_factor", config.vad.threshold_factor);
    read_field(v, "min_speech_ms", config.vad.min_speech_ms);
    read_field(v, "max_gap_ms", config.vad.max_gap_ms);
    read_field(v, "pad_ms", config.vad.pad_ms);
  }
  if (doc.contains("asr")) {
    const nlohmann::json& a = doc["asr"];
    reject_unknown_keys(a,
                        {"mode", "endpoint", "transcript_path", "timeout_ms",
                         "max_retries", "max_inflight"},
                        "asr");
    if (a.contains("mode")) {
      std::string mode = a["mode"].get<std::string>();
      if (mode == "remote") {
        config.asr.mode = AsrMode::kRemote;
      } else if (mode == "offline") {
        config.asr.mode = AsrMode::kOffline;
      } else {
        throw std::invalid_argument("asr mode must be remote or offline");
      }
    }
    read_field(a, "endpoint", config.asr.endpoint);
    if (a.contains("transcript_path")) {
      config.asr.transcript_path = a["transcript_path"].get<std::string>();
    }
    read_field(a, "timeout_ms", config.asr.timeout_ms);
    read_field(a, "max_retries", config.asr.max_retries);
    read_field(a, "max_inflight", config.asr.max_inflight);
  }
  if (doc.contains("train")) {
    const nlohmann::json& t = doc["train"];
    reject_unknown_keys(t,
                        {"hidden", "ff_dim", "learning_rate", "batch_size",
                         "max_epochs", "clip_norm", "patience"},
                        "train");
    read_field(t, "hidden", config.train.hidden);
    read_field(t, "ff_dim", config.train.ff_dim);
    read_field(t, "learning_rate", config.train.learning_rate);
    read_field(t, "batch_size", config.train.batch_size);
    read_field(t, "max_epochs", config.train.max_epochs);
    read_field(t, "clip_norm", config.train.clip_norm);
    read_field(t, "patience", config.train.patience);
  }
  if (doc.contains("embedding")) {
    const nlohmann::json& e = doc["embedding"];
    reject_unknown_keys(
        e, {"dim", "window", "negatives", "epochs", "learning_rate"},
        "embedding");
    read_field(e, "dim", config.embedding.dim);
    read_field(e, "window", config.embedding.window);
    read_field(e, "negatives", config.embedding.negatives);
    read_field(e, "epochs", config.embedding.epochs);
    read_field(e, "learning_rate", config.embedding.learning_rate);
  }
  if (doc.contains("baselines")) {
    const nlohmann::json& b = doc["baselines"];
    reject_unknown_keys(b, {"logreg", "svm", "gbdt"}, "baselines");
    if (b.contains("logreg")) {
      const nlohmann::json& m = b["logreg"];
      reject_unknown_keys(m, {"l2", "epochs", "learning_rate"}, "logreg");
      read_field(m, "l2", config.baselines.logreg.l2);
      read_field(m, "epochs", config.baselines.logreg.epochs);
      read_field(m, "learning_rate", config.baselines.logreg.learning_rate);
    }
    if (b.contains("svm")) {
      const nlohmann::json& m = b["svm"];
      reject_unknown_keys(m, {"c", "epochs", "learning_rate"}, "svm");
      read_field(m, "c", config.baselines.svm.c);
      read_field(m, "epochs", config.baselines.svm.epochs);
      read_field(m, "learning_rate", config.baselines.svm.learning_rate);
    }
    if (b.contains("gbdt")) {
      const nlohmann::json& m = b["gbdt"];
      reject_unknown_keys(m, {"n_trees", "max_depth", "shrinkage"}, "gbdt");
      read_field(m, "n_trees", config.baselines.gbdt.n_trees);
      read_field(m, "max_depth", config.baselines.gbdt.max_depth);
      read_field(m, "shrinkage", config.baselines.gbdt.shrinkage);
    }
  }
  config.validate();
  return config;
}

StageStatus cmd_vad(const PipelineConfig& config) {
  config.validate();
  if (config.audio_dir.empty() ||
      !std::filesystem::is_directory(config.audio_dir)) {
    throw std::invalid_argument("audio_dir is not a directory: " +
                                config.audio_dir.string());
  }
  std::vector<std::filesystem::path> files = wav_files_in(config.audio_dir);
  if (files.empty()) {
    throw std::invalid_argument("no .wav files in " +
                                config.audio_dir.string());
  }
  std::filesystem::create_directories(config.segments_dir());

  StageStatus status;
  for (const std::filesystem::path& file : files) {
    try {
      AudioBuffer buffer = load_wav_file(file);
      std::vector<AudioSegment> segments = detect_segments(buffer, config.vad);
      write_segments_file(segments,
                          config.segments_dir() /
                              (file.stem().string() + ".tsv"));
      ++status.processed;
    } catch (const Error& e) {
      ++status.failed;
      status.warnings.push_back(file.filename().string() + ": " + e.what());
    }
  }
  if (status.processed == 0) {
    throw Error("vad failed for every input file in " +
                config.audio_dir.string());
  }
  return status;
}

StageStatus cmd_transcribe(const PipelineConfig& config) {
  config.validate();
  config.asr.validate();
  if (!std::filesystem::is_directory(config.segments_dir())) {
    throw std::invalid_argument("segments directory missing (run vad first): " +
                                config.segments_dir().string());
  }
  std::vector<std::filesystem::path> segment_files;
  for (const auto& entry :
       std::filesystem::directory_iterator(config.segments_dir())) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
      segment_files.push_back(entry.path());
    }
  }
  std::sort(segment_files.begin(), segment_files.end());
  if (segment_files.empty()) {
    throw std::invalid_argument("no segment files in " +
                                config.segments_dir().string());
  }
  std::filesystem::create_directories(config.utterances_dir());

  StageStatus status;
  for (const std::filesystem::path& file : segment_files) {
    std::string stem = file.stem().string();
    std::vector<AudioSegment> segments = read_segments_file(file);
    std::filesystem::path out_path =
        config.utterances_dir() / (stem + ".jsonl");
    if (segments.empty()) {
      write_utterances_file({}, out_path);
      ++status.processed;
      continue;
    }
    AudioBuffer buffer = load_wav_file(config.audio_dir / (stem + ".wav"));
    std::vector<std::pair<AudioSegment, AudioBuffer>> cut;
    std::vector<AudioBuffer> buffers = cut_segments(buffer, segments);
    cut.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      cut.emplace_back(segments[i], std::move(buffers[i]));
    }
    TranscriptionSummary summary;
    std::vector<Utterance> utterances =
        transcribe_segments(cut, config.asr, &summary);
    write_utterances_file(utterances, out_path);
    ++status.processed;
    if (summary.skipped > 0) {
      status.warnings.push_back(stem + ": " +
                                std::to_string(summary.skipped) +
                                " segment(s) skipped");
    }
  }
  return status;
}

void cmd_gen_data(const PipelineConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.datasets_dir());
  for (InstructionType type : kAllInstructionTypes) {
    int n_pos = config.sentences_per_type / 2;
    int n_neg = config.sentences_per_type - n_pos;
    std::vector<LabeledSentence> corpus = generate_corpus(
        type, n_pos, n_neg,
        derive_seed(config.seed, "gen-data:" + to_string(type)));
    write_dataset_file(corpus, config.dataset_file(type));
  }
}

void cmd_train_embeddings(const PipelineConfig& config) {
  config.validate();
  std::vector<std::vector<std::string>> corpus;
  for (InstructionType type : kAllInstructionTypes) {
    for (const LabeledSentence& sentence :
         read_required_dataset(config, type)) {
      corpus.push_back(tokenize(sentence.text));
    }
  }
  SkipGramResult result = train_skipgram(
      corpus, config.embedding, derive_seed(config.seed, "embeddings"));
  save_embeddings(result.table, config.embeddings_file());
}

void cmd_train(const PipelineConfig& config) {
  config.validate();
  EmbeddingTable table = load_required_embeddings(config);
  std::filesystem::create_directories(config.models_dir());

  for (InstructionType type : kAllInstructionTypes) {
    std::vector<LabeledSentence> corpus = read_required_dataset(config, type);
    DatasetSplit split = split_dataset(
        corpus, derive_seed(config.seed, "split:" + to_string(type)),
        config.split_ratios);

    TrainConfig train_config = config.train;
    train_config.seed = derive_seed(config.seed, "train:" + to_string(type));
    TrainResult result =
        train_classifier(split.train, split.validation, table, train_config);
    save_classifier(result.model, config.model_file(type));

    std::ofstream history(config.history_file(type));
    if (!history) {
      throw Error("cannot write history file for " + to_string(type));
    }
    history << "epoch,train_loss,val_auc\n";
    for (std::size_t e = 0; e < result.history.size(); ++e) {
      history << (e + 1) << ',' << format_g12(result.history[e].train_loss)
              << ',' << format_g12(result.history[e].val_auc) << '\n';
    }

    std::vector<int> labels;
    Mat features = feature_matrix(split.train, table, &labels);
    BaselineSet baselines;
    baselines.logreg = train_logreg(
        features, labels, config.baselines.logreg.l2,
        config.baselines.logreg.epochs, config.baselines.logreg.learning_rate,
        derive_seed(config.seed, "logreg:" + to_string(type)));
    baselines.svm = train_linear_svm(
        features, labels, config.baselines.svm.c, config.baselines.svm.epochs,
        config.baselines.svm.learning_rate,
        derive_seed(config.seed, "svm:" + to_string(type)));
    baselines.gbdt =
        train_gbdt(features, labels, config.baselines.gbdt,
                   derive_seed(config.seed, "gbdt:" + to_string(type)));
    save_baselines(baselines, config.baselines_file(type));
  }
}

EvalReport cmd_evaluate(const PipelineConfig& config) {
  config.validate();
  EmbeddingTable table = load_required_embeddings(config);
  std::map<InstructionType, std::vector<LabeledSentence>> test_sets;
  std::map<InstructionType, LstmClassifier> classifiers;
  std::map<InstructionType, BaselineSet> baseline_sets;
  for (InstructionType type : kAllInstructionTypes) {
    std::vector<LabeledSentence> corpus = read_required_dataset(config, type);
    DatasetSplit split = split_dataset(
        corpus, derive_seed(config.seed, "split:" + to_string(type)),
        config.split_ratios);
    test_sets[type] = std::move(split.test);
    classifiers[type] = load_classifier(config.model_file(type));
    baseline_sets[type] = load_baselines(config.baselines_file(type));
  }

  std::map<std::string, Scorer> models;
  models["lstm"] = [&](const LabeledSentence& s) {
    return predict(s.text, table, classifiers.at(s.instruction));
  };
  models["logreg"] = [&](const LabeledSentence& s) {
    return logreg_probability(baseline_sets.at(s.instruction).logreg,
                              featurize_mean(s.text, table));
  };
  models["svm"] = [&](const LabeledSentence& s) {
    return baseline_sets.at(s.instruction)
        .svm.score(featurize_mean(s.text, table));
  };
  models["gbdt"] = [&](const LabeledSentence& s) {
    return baseline_sets.at(s.instruction)
        .gbdt.score(featurize_mean(s.text, table));
  };

  EvalReport report = evaluate_models(models, test_sets);
  render_report(report, config.reports_dir());
  return report;
}

Prediction predict_sentence(const std::string& text,
                            const EmbeddingTable& table,
                            const std::vector<LstmClassifier>& models,
                            const PipelineConfig& config) {
  Prediction prediction;
  prediction.text = text;
  for (const LstmClassifier& model : models) {
    double p = predict(text, table, model);
    std::string name = to_string(model.instruction);
    prediction.probs[name] = p;
    if (p >= config.threshold_for(model.instruction)) {
      prediction.tags.push_back(name);
    }
  }
  return prediction;
}

Prediction cmd_predict_text(const PipelineConfig& config,
                            const std::string& text) {
  config.validate();
  EmbeddingTable table = load_required_embeddings(config);
  std::vector<LstmClassifier> models = load_all_classifiers(config);
  return predict_sentence(text, table, models, config);
}

std::vector<Prediction> cmd_predict_file(
    const PipelineConfig& config, const std::filesystem::path& utterance_file,
    const std::filesystem::path& output_file) {
  config.validate();
  EmbeddingTable table = load_required_embeddings(config);
  std::vector<LstmClassifier> models = load_all_classifiers(config);

  std::vector<Prediction> predictions;
  std::vector<Utterance> utterances = read_utterances_file(utterance_file);
  for (const Utterance& u : utterances) {
    if (u.skipped) {
      Prediction p;
      p.text = u.text;
      predictions.push_back(std::move(p));
    } else {
      predictions.push_back(predict_sentence(u.text, table, models, config));
    }
  }
  if (!output_file.empty()) {
    std::ofstream out(output_file);
    if (!out) {
      throw Error("cannot open prediction output file: " +
                  output_file.string());
    }
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      out << prediction_to_json(predictions[i], utterances[i].start_ms,
                                utterances[i].end_ms)
                 .dump()
          << '\n';
    }
  }
  return predictions;
}

std::filesystem::path cmd_e2e(const PipelineConfig& config,
                              const std::filesystem::path& wav_path) {
  config.validate();
  config.asr.validate();
  EmbeddingTable table = load_required_embeddings(config);
  std::vector<LstmClassifier> models = load_all_classifiers(config);

  AudioBuffer buffer = load_wav_file(wav_path);
  std::vector<AudioSegment> segments = detect_segments(buffer, config.vad);

  std::vector<Utterance> utterances;
  if (!segments.empty()) {
    std::vector<AudioBuffer> buffers = cut_segments(buffer, segments);
    std::vector<std::pair<AudioSegment, AudioBuffer>> cut;
    cut.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      cut.emplace_back(segments[i], std::move(buffers[i]));
    }
    utterances = transcribe_segments(cut, config.asr);
  }

  std::filesystem::create_directories(config.timelines_dir());
  std::filesystem::path out_path =
      config.timelines_dir() / (wav_path.stem().string() + ".jsonl");
  std::ofstream out(out_path);
  if (!out) {
    throw Error("cannot open timeline file for writing: " + out_path.string());
  }
  for (const Utterance& u : utterances) {
    nlohmann::json probs = nlohmann::json::object();
    std::vector<std::string> tags;
    if (!u.skipped) {
      Prediction p = predict_sentence(u.text, table, models, config);
      for (const auto& [name, value] : p.probs) probs[name] = value;
      tags = std::move(p.tags);
    }
    nlohmann::json record = {
        {"start_ms", u.start_ms},
        {"end_ms", u.end_ms},
        {"text", u.text},
        {"tags", tags},
        {"probs", std::move(probs)},
    };
    out << record.dump() << '\n';
  }
  return out_path;
}

double cmd_gradcheck(const PipelineConfig& config, int instances,
                     double epsilon) {
  if (instances < 1) {
    throw std::invalid_argument("gradcheck needs >= 1 instance");
  }
  double max_rel = 0.0;
  for (int k = 0; k < instances; ++k) {
    std::uint64_t seed =
        derive_seed(config.seed, "gradcheck:" + std::to_string(k));
    Rng dims(seed);
    int d = 2 + static_cast<int>(dims.below(7));
    int h = 2 + static_cast<int>(dims.below(7));
    int f = 2 + static_cast<int>(dims.below(7));
    int len = 1 + static_cast<int>(dims.below(10));
    max_rel = std::max(max_rel, gradient_check_random(d, h, f, len,
                                                      dims.next_u64(),
                                                      epsilon));
  }
  return max_rel;
}

}  // namespace dialogic
