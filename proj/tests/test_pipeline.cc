// tests/test_pipeline.cc

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

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "dialogic/pipeline.h"
#include "test_helpers.h"

using dialogic::InstructionType;
using dialogic::PipelineConfig;
using namespace dialogic_tests;

namespace {

// Small but trainable settings so the whole chain runs in seconds.
PipelineConfig tiny_config(const std::filesystem::path& out_dir) {
  PipelineConfig config;
  config.out_dir = out_dir;
  config.seed = 7;
  config.sentences_per_type = 48;
  config.split_ratios = {0.5, 0.25, 0.25};
  config.embedding.dim = 8;
  config.embedding.window = 2;
  config.embedding.negatives = 2;
  config.embedding.epochs = 2;
  config.train.hidden = 8;
  config.train.ff_dim = 4;
  config.train.batch_size = 16;
  config.train.max_epochs = 4;
  config.train.patience = 4;
  config.baselines.logreg.epochs = 30;
  config.baselines.svm.epochs = 30;
  config.baselines.gbdt.n_trees = 4;
  config.baselines.gbdt.max_depth = 2;
  return config;
}

int line_count(const std::filesystem::path& path) {
  std::string text = read_text(path);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  static std::atomic<int> counter{0};
  std::filesystem::path capture =
      std::filesystem::temp_directory_path() /
      ("dialogic_cli_out_" + std::to_string(::getpid()) + "_" +
       std::to_string(counter.fetch_add(1)) + ".txt");
  std::string command = std::string(DIALOGIC_CLI_PATH) + " " + args + " > " +
                        capture.string() + " 2>&1";
  int raw = std::system(command.c_str());
  CliResult result;
  if (raw != -1) result.code = WEXITSTATUS(raw);
  result.output = read_text(capture);
  std::filesystem::remove(capture);
  return result;
}

}  // namespace

TEST_CASE("per-type thresholds override the global default") {
  PipelineConfig config;
  CHECK(config.threshold_for(InstructionType::kGreeting) == 0.5);
  config.predict_threshold = 0.3;
  config.thresholds["greeting"] = 0.9;
  CHECK(config.threshold_for(InstructionType::kGreeting) == 0.9);
  CHECK(config.threshold_for(InstructionType::kGuidance) == 0.3);
}

TEST_CASE("config validation rejects inconsistent settings") {
  PipelineConfig config;
  CHECK_NOTHROW(config.validate());

  config.split_ratios = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.split_ratios = {0.8, 0.1, 0.1};

  config.sentences_per_type = 1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.sentences_per_type = 100;

  config.thresholds["applauding"] = 0.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.thresholds.clear();
  config.thresholds["greeting"] = 1.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.thresholds.clear();

  config.vad.frame_ms = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("artifact paths hang off out_dir") {
  PipelineConfig config;
  config.out_dir = "work";
  CHECK(config.segments_dir() == std::filesystem::path("work/segments"));
  CHECK(config.utterances_dir() == std::filesystem::path("work/utterances"));
  CHECK(config.embeddings_file() ==
        std::filesystem::path("work/embeddings.txt"));
  CHECK(config.dataset_file(InstructionType::kGreeting) ==
        std::filesystem::path("work/datasets/greeting.jsonl"));
  CHECK(config.model_file(InstructionType::kNoteTaking) ==
        std::filesystem::path("work/models/note_taking.lstm.json"));
  CHECK(config.baselines_file(InstructionType::kSummarization) ==
        std::filesystem::path("work/models/summarization.baselines.json"));
  CHECK(config.history_file(InstructionType::kRepeating) ==
        std::filesystem::path("work/models/repeating.history.csv"));
}

TEST_CASE("a full config file populates every section") {
  TempDir dir;
  const auto path = dir / "config.json";
  write_text(path, R"json({
    "audio_dir": "aud",
    "out_dir": "workdir",
    "seed": 99,
    "split_ratios": [0.6, 0.2, 0.2],
    "sentences_per_type": 10,
    "predict_threshold": 0.4,
    "thresholds": {"greeting": 0.9},
    "vad": {"frame_ms": 20, "hop_ms": 10, "noise_percentile": 0.2,
            "threshold_factor": 2.5, "min_speech_ms": 100,
            "max_gap_ms": 200, "pad_ms": 50},
    "asr": {"mode": "remote", "endpoint": "http://localhost:9",
            "transcript_path": "t.jsonl", "timeout_ms": 100,
            "max_retries": 1, "max_inflight": 2},
    "train": {"hidden": 16, "ff_dim": 8, "learning_rate": 0.01,
              "batch_size": 4, "max_epochs": 9, "clip_norm": 2.5,
              "patience": 3},
    "embedding": {"dim": 12, "window": 3, "negatives": 4, "epochs": 2,
                  "learning_rate": 0.04},
    "baselines": {
      "logreg": {"l2": 0.01, "epochs": 5, "learning_rate": 0.3},
      "svm": {"c": 0.5, "epochs": 6, "learning_rate": 0.2},
      "gbdt": {"n_trees": 7, "max_depth": 3, "shrinkage": 0.25}}
  })json");

  PipelineConfig config = dialogic::load_pipeline_config(path);
  CHECK(config.audio_dir == "aud");
  CHECK(config.out_dir == "workdir");
  CHECK(config.seed == 99);
  CHECK(config.split_ratios == std::array<double, 3>{0.6, 0.2, 0.2});
  CHECK(config.sentences_per_type == 10);
  CHECK(config.predict_threshold == 0.4);
  CHECK(config.threshold_for(InstructionType::kGreeting) == 0.9);
  CHECK(config.vad.frame_ms == 20);
  CHECK(config.vad.noise_percentile == 0.2);
  CHECK(config.vad.pad_ms == 50);
  CHECK(config.asr.mode == dialogic::AsrMode::kRemote);
  CHECK(config.asr.endpoint == "http://localhost:9");
  CHECK(config.asr.transcript_path == "t.jsonl");
  CHECK(config.asr.timeout_ms == 100);
  CHECK(config.asr.max_retries == 1);
  CHECK(config.asr.max_inflight == 2);
  CHECK(config.train.hidden == 16);
  CHECK(config.train.ff_dim == 8);
  CHECK(config.train.learning_rate == 0.01);
  CHECK(config.train.batch_size == 4);
  CHECK(config.train.max_epochs == 9);
  CHECK(config.train.clip_norm == 2.5);
  CHECK(config.train.patience == 3);
  CHECK(config.embedding.dim == 12);
  CHECK(config.embedding.window == 3);
  CHECK(config.embedding.negatives == 4);
  CHECK(config.embedding.epochs == 2);
  CHECK(config.embedding.learning_rate == 0.04);
  CHECK(config.baselines.logreg.l2 == 0.01);
  CHECK(config.baselines.logreg.epochs == 5);
  CHECK(config.baselines.logreg.learning_rate == 0.3);
  CHECK(config.baselines.svm.c == 0.5);
  CHECK(config.baselines.svm.epochs == 6);
  CHECK(config.baselines.svm.learning_rate == 0.2);
  CHECK(config.baselines.gbdt.n_trees == 7);
  CHECK(config.baselines.gbdt.max_depth == 3);
  CHECK(config.baselines.gbdt.shrinkage == 0.25);
}

TEST_CASE("an empty config file keeps the built-in defaults") {
  TempDir dir;
  write_text(dir / "config.json", "{}");
  PipelineConfig config = dialogic::load_pipeline_config(dir / "config.json");
  CHECK(config.seed == 42);
  CHECK(config.out_dir == "out");
  CHECK(config.sentences_per_type == 2940);
  CHECK(config.predict_threshold == 0.5);
  CHECK(config.split_ratios == std::array<double, 3>{0.8, 0.1, 0.1});
  CHECK(config.vad.frame_ms == 30);
  CHECK(config.asr.mode == dialogic::AsrMode::kOffline);
}

TEST_CASE("unknown config keys are rejected at every level") {
  TempDir dir;
  auto load = [&](const std::string& text) {
    write_text(dir / "config.json", text);
    return dialogic::load_pipeline_config(dir / "config.json");
  };
  CHECK_THROWS_WITH_AS(load(R"({"bogus": 1})"),
                       "unknown config key 'bogus' in top level",
                       std::invalid_argument);
  CHECK_THROWS_AS(load(R"({"vad": {"frames": 1}})"), std::invalid_argument);
  CHECK_THROWS_AS(load(R"({"asr": {"host": "x"}})"), std::invalid_argument);
  CHECK_THROWS_AS(load(R"({"train": {"hidden_dim": 4}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load(R"({"embedding": {"dims": 4}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load(R"({"baselines": {"logreg": {"alpha": 1}}})"),
                  std::invalid_argument);
}

TEST_CASE("broken config files are configuration errors") {
  TempDir dir;
  CHECK_THROWS_AS(dialogic::load_pipeline_config(dir / "none.json"),
                  std::invalid_argument);

  write_text(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(dialogic::load_pipeline_config(dir / "bad.json"),
                  std::invalid_argument);

  write_text(dir / "ratios.json", R"({"split_ratios": [0.5, 0.5]})");
  CHECK_THROWS_AS(dialogic::load_pipeline_config(dir / "ratios.json"),
                  std::invalid_argument);

  write_text(dir / "mode.json", R"({"asr": {"mode": "streaming"}})");
  CHECK_THROWS_AS(dialogic::load_pipeline_config(dir / "mode.json"),
                  std::invalid_argument);

  write_text(dir / "small.json", R"({"sentences_per_type": 1})");
  CHECK_THROWS_AS(dialogic::load_pipeline_config(dir / "small.json"),
                  std::invalid_argument);
}

TEST_CASE("stages demand their upstream artifacts") {
  TempDir dir;
  PipelineConfig config = tiny_config(dir / "out");
  CHECK_THROWS_AS(dialogic::cmd_train_embeddings(config),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::cmd_train(config), std::invalid_argument);
  CHECK_THROWS_AS(dialogic::cmd_evaluate(config), std::invalid_argument);
  CHECK_THROWS_AS(dialogic::cmd_predict_text(config, "hello"),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::cmd_transcribe(config), std::invalid_argument);
  CHECK_THROWS_AS(dialogic::cmd_vad(config), std::invalid_argument);
}

TEST_CASE("vad stage reports bad recordings as warnings, not failures") {
  TempDir dir;
  std::filesystem::create_directories(dir / "audio");
  write_bytes(dir / "audio" / "good.wav",
              wav_bytes(tone_samples(400, 440.0, 8000), 8000, 1));
  write_text(dir / "audio" / "bad.wav", "RIFFjunk");

  PipelineConfig config = tiny_config(dir / "out");
  config.audio_dir = dir / "audio";
  dialogic::StageStatus status = dialogic::cmd_vad(config);
  CHECK(status.processed == 1);
  CHECK(status.failed == 1);
  REQUIRE(status.warnings.size() == 1);
  CHECK(status.warnings[0].find("bad.wav") != std::string::npos);
  CHECK(std::filesystem::exists(config.segments_dir() / "good.tsv"));

  std::filesystem::create_directories(dir / "only_bad");
  write_text(dir / "only_bad" / "bad.wav", "RIFFjunk");
  config.audio_dir = dir / "only_bad";
  CHECK_THROWS_AS(dialogic::cmd_vad(config), dialogic::Error);

  std::filesystem::create_directories(dir / "empty");
  config.audio_dir = dir / "empty";
  CHECK_THROWS_AS(dialogic::cmd_vad(config), std::invalid_argument);
}

TEST_CASE("the stage chain trains, evaluates, and tags a recording") {
  TempDir dir;
  PipelineConfig config = tiny_config(dir / "out");

  dialogic::cmd_gen_data(config);
  for (InstructionType type : dialogic::kAllInstructionTypes) {
    REQUIRE(std::filesystem::exists(config.dataset_file(type)));
    CHECK(line_count(config.dataset_file(type)) == 48);
  }

  dialogic::cmd_train_embeddings(config);
  dialogic::EmbeddingTable table =
      dialogic::load_embeddings(config.embeddings_file());
  CHECK(table.dim == 8);

  dialogic::cmd_train(config);
  for (InstructionType type : dialogic::kAllInstructionTypes) {
    CHECK(std::filesystem::exists(config.model_file(type)));
    CHECK(std::filesystem::exists(config.baselines_file(type)));
    REQUIRE(std::filesystem::exists(config.history_file(type)));
    CHECK(read_text(config.history_file(type))
              .starts_with("epoch,train_loss,val_auc\n"));
  }

  dialogic::EvalReport report = dialogic::cmd_evaluate(config);
  REQUIRE(report.entries.size() == 24);  // 6 types x 4 model families
  const char* expected_models[] = {"gbdt", "logreg", "lstm", "svm"};
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    CHECK(report.entries[i].model == expected_models[i % 4]);
    CHECK(report.entries[i].auc.value >= 0.0);
    CHECK(report.entries[i].auc.value <= 1.0);
  }
  CHECK(std::filesystem::exists(config.reports_dir() / "auc_report.csv"));
  CHECK(std::filesystem::exists(config.reports_dir() / "roc_greeting.svg"));
  CHECK(
      std::filesystem::exists(config.reports_dir() / "roc_summarization.svg"));

  dialogic::Prediction prediction =
      dialogic::cmd_predict_text(config, "hello everyone how are you doing");
  CHECK(prediction.text == "hello everyone how are you doing");
  REQUIRE(prediction.probs.size() == 6);
  for (const auto& [name, p] : prediction.probs) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
  for (const std::string& tag : prediction.tags) {
    CHECK(prediction.probs.count(tag) == 1);
    CHECK(prediction.probs.at(tag) >= config.threshold_for(
                                          dialogic::instruction_from_string(tag)));
  }

  // One recording: tone, silence, tone -> two VAD segments.
  std::filesystem::create_directories(dir / "audio");
  std::vector<std::int16_t> samples = tone_samples(600, 440.0, 16000);
  append_samples(samples, silence_samples(900, 16000));
  append_samples(samples, tone_samples(600, 220.0, 16000));
  write_bytes(dir / "audio" / "lesson.wav", wav_bytes(samples, 16000, 1));
  config.audio_dir = dir / "audio";

  dialogic::StageStatus vad_status = dialogic::cmd_vad(config);
  CHECK(vad_status.processed == 1);
  std::vector<dialogic::AudioSegment> segments =
      dialogic::read_segments_file(config.segments_dir() / "lesson.tsv");
  REQUIRE(segments.size() == 2);
  CHECK(segments[0].source_id == "lesson");

  std::string transcript;
  const char* lines[] = {"hello everyone how are you doing",
                         "please write this down"};
  for (const dialogic::AudioSegment& segment : segments) {
    nlohmann::json record = {{"source_id", segment.source_id},
                             {"segment_index", segment.index},
                             {"text", lines[segment.index % 2]}};
    transcript += record.dump() + "\n";
  }
  write_text(dir / "transcript.jsonl", transcript);
  config.asr.transcript_path = dir / "transcript.jsonl";

  dialogic::StageStatus asr_status = dialogic::cmd_transcribe(config);
  CHECK(asr_status.processed == 1);
  CHECK(asr_status.warnings.empty());
  std::vector<dialogic::Utterance> utterances =
      dialogic::read_utterances_file(config.utterances_dir() /
                                     "lesson.jsonl");
  REQUIRE(utterances.size() == 2);
  CHECK(utterances[0].text == lines[0]);
  CHECK(utterances[1].text == lines[1]);

  // Utterance file -> per-utterance predictions, skipped rows untagged.
  utterances[1].skipped = true;
  dialogic::write_utterances_file(utterances, dir / "mixed.jsonl");
  std::vector<dialogic::Prediction> predictions = dialogic::cmd_predict_file(
      config, dir / "mixed.jsonl", dir / "predictions.jsonl");
  REQUIRE(predictions.size() == 2);
  CHECK(predictions[0].probs.size() == 6);
  CHECK(predictions[1].probs.empty());
  CHECK(predictions[1].tags.empty());
  {
    std::ifstream in(dir / "predictions.jsonl");
    std::string line;
    REQUIRE(std::getline(in, line));
    nlohmann::json first = nlohmann::json::parse(line);
    CHECK(first.at("text") == lines[0]);
    CHECK(first.at("start_ms") == utterances[0].start_ms);
    CHECK(first.at("probs").size() == 6);
  }

  std::filesystem::path timeline =
      dialogic::cmd_e2e(config, dir / "audio" / "lesson.wav");
  CHECK(timeline == config.timelines_dir() / "lesson.jsonl");
  std::string first_run = read_text(timeline);
  {
    std::ifstream in(timeline);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      nlohmann::json record = nlohmann::json::parse(line);
      CHECK(record.at("end_ms").get<std::int64_t>() >
            record.at("start_ms").get<std::int64_t>());
      CHECK(record.at("text") == lines[rows]);
      CHECK(record.at("probs").size() == 6);
      CHECK(record.contains("tags"));
      ++rows;
    }
    CHECK(rows == 2);
  }

  // The whole chain is seeded; a rerun reproduces the timeline exactly.
  dialogic::cmd_e2e(config, dir / "audio" / "lesson.wav");
  CHECK(read_text(timeline) == first_run);
}

TEST_CASE("pipeline gradcheck stays under the acceptance bound") {
  PipelineConfig config;
  double max_rel = dialogic::cmd_gradcheck(config, 3);
  CHECK(max_rel < 1e-4);
  CHECK(max_rel > 0.0);
  CHECK_THROWS_AS(dialogic::cmd_gradcheck(config, 0), std::invalid_argument);
}

TEST_CASE("cli maps errors to exit codes") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("frobnicate").code == 1);

  TempDir dir;
  CHECK(run_cli("gen-data --config " + (dir / "none.json").string()).code ==
        1);
  write_text(dir / "bad.json", "{oops");
  CliResult bad = run_cli("gen-data --config " + (dir / "bad.json").string());
  CHECK(bad.code == 1);
  CHECK(bad.output.find("config error") != std::string::npos);

  CHECK(run_cli("predict --text hi --input x.jsonl --out " +
                (dir / "out").string())
            .code == 1);
  CHECK(run_cli("predict --text hi --out " + (dir / "out").string()).code ==
        1);

  // A present but unreadable dataset is a runtime failure, not misuse.
  std::filesystem::create_directories(dir / "out" / "datasets");
  write_text(dir / "out" / "datasets" / "greeting.jsonl", "garbage\n");
  CliResult runtime =
      run_cli("train-embeddings --out " + (dir / "out").string());
  CHECK(runtime.code == 2);
  CHECK(runtime.output.find("error:") != std::string::npos);
}

TEST_CASE("cli gen-data honors seed and output overrides") {
  TempDir dir;
  CliResult first = run_cli("gen-data --out " + (dir / "a").string() +
                            " --seed 5 --sentences-per-type 10");
  REQUIRE(first.code == 0);
  CHECK(first.output.find("gen-data: 6 dataset file(s)") !=
        std::string::npos);
  const auto a = dir / "a";
  CHECK(line_count(a / "datasets" / "greeting.jsonl") == 10);

  REQUIRE(run_cli("gen-data --out " + (dir / "b").string() +
                  " --seed 5 --sentences-per-type 10")
              .code == 0);
  CHECK(read_text(a / "datasets" / "greeting.jsonl") ==
        read_text(dir / "b" / "datasets" / "greeting.jsonl"));

  REQUIRE(run_cli("gen-data --out " + (dir / "c").string() +
                  " --seed 6 --sentences-per-type 10")
              .code == 0);
  CHECK(read_text(a / "datasets" / "greeting.jsonl") !=
        read_text(dir / "c" / "datasets" / "greeting.jsonl"));
}
