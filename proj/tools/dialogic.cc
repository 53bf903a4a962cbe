// tools/dialogic.cc

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

// Command line front end: every pipeline stage as a subcommand over one
// JSON configuration. Exit codes: 0 success (warnings allowed), 1 usage or
// configuration error, 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialogic/error.h"
#include "dialogic/pipeline.h"

namespace {

using dialogic::PipelineConfig;

struct GlobalArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
};

// Precedence: flags > config file > built-in defaults.
PipelineConfig make_config(const GlobalArgs& args) {
  PipelineConfig config;
  if (!args.config_path.empty()) {
    config = dialogic::load_pipeline_config(args.config_path);
  }
  if (args.seed_set) config.seed = args.seed;
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

void print_status(const char* stage, const dialogic::StageStatus& status) {
  for (const std::string& warning : status.warnings) {
    std::cerr << stage << " warning: " << warning << '\n';
  }
  std::cout << stage << ": " << status.processed << " file(s) processed, "
            << status.failed << " failed\n";
}

nlohmann::json prediction_json(const dialogic::Prediction& p) {
  nlohmann::json probs = nlohmann::json::object();
  for (const auto& [name, value] : p.probs) probs[name] = value;
  return {{"text", p.text}, {"tags", p.tags}, {"probs", std::move(probs)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialogic instruction detection pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalArgs args;
  app.add_option("--config", args.config_path,
                 "JSON configuration file (flags override it)");
  app.add_option("--seed", args.seed, "root random seed override")
      ->each([&](const std::string&) { args.seed_set = true; });
  app.add_option("--out", args.out_dir, "output directory override");

  std::string audio_dir, transcript, endpoint, asr_mode;
  std::string predict_text, predict_input, predict_output, e2e_input;
  int instances = 20;
  double epsilon = 1e-5;
  int sentences_per_type = -1;

  CLI::App* vad = app.add_subcommand("vad", "segment WAV recordings");
  vad->add_option("--audio-dir", audio_dir, "directory of WAV files");

  CLI::App* transcribe =
      app.add_subcommand("transcribe", "run ASR over segment files");
  transcribe->add_option("--audio-dir", audio_dir, "directory of WAV files");
  transcribe->add_option("--transcript", transcript,
                         "offline transcript JSONL");
  transcribe->add_option("--endpoint", endpoint, "remote ASR endpoint");
  transcribe->add_option("--mode", asr_mode, "asr mode: offline or remote");

  CLI::App* gen = app.add_subcommand("gen-data", "synthesize datasets");
  gen->add_option("--sentences-per-type", sentences_per_type,
                  "sentences per instruction type");

  app.add_subcommand("train-embeddings",
                     "train the skip-gram table on the datasets");
  app.add_subcommand("train", "train LSTM classifiers and baselines");
  app.add_subcommand("evaluate", "write AUC table and ROC curves");

  CLI::App* predict = app.add_subcommand("predict", "tag sentences");
  predict->add_option("--text", predict_text, "classify one sentence");
  predict->add_option("--input", predict_input, "utterance JSONL to classify");
  predict->add_option("--output", predict_output, "prediction JSONL path");

  CLI::App* e2e =
      app.add_subcommand("e2e", "vad + transcribe + predict one recording");
  e2e->add_option("--input", e2e_input, "WAV recording")->required();
  e2e->add_option("--transcript", transcript, "offline transcript JSONL");
  e2e->add_option("--endpoint", endpoint, "remote ASR endpoint");
  e2e->add_option("--mode", asr_mode, "asr mode: offline or remote");

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "verify BPTT gradients");
  gradcheck->add_option("--instances", instances, "random instances to check");
  gradcheck->add_option("--epsilon", epsilon, "finite-difference step");

  try {
    app.parse(argc, argv);

    PipelineConfig config = make_config(args);
    if (!audio_dir.empty()) config.audio_dir = audio_dir;
    if (!transcript.empty()) {
      config.asr.transcript_path = transcript;
      if (asr_mode.empty()) config.asr.mode = dialogic::AsrMode::kOffline;
    }
    if (!endpoint.empty()) {
      config.asr.endpoint = endpoint;
      if (asr_mode.empty()) config.asr.mode = dialogic::AsrMode::kRemote;
    }
    if (asr_mode == "offline") {
      config.asr.mode = dialogic::AsrMode::kOffline;
    } else if (asr_mode == "remote") {
      config.asr.mode = dialogic::AsrMode::kRemote;
    } else if (!asr_mode.empty()) {
      throw std::invalid_argument("--mode must be offline or remote");
    }
    if (sentences_per_type > 0) {
      config.sentences_per_type = sentences_per_type;
    }

    if (app.got_subcommand("vad")) {
      print_status("vad", dialogic::cmd_vad(config));
    } else if (app.got_subcommand("transcribe")) {
      print_status("transcribe", dialogic::cmd_transcribe(config));
    } else if (app.got_subcommand("gen-data")) {
      dialogic::cmd_gen_data(config);
      std::cout << "gen-data: 6 dataset file(s) in "
                << config.datasets_dir().string() << '\n';
    } else if (app.got_subcommand("train-embeddings")) {
      dialogic::cmd_train_embeddings(config);
      std::cout << "train-embeddings: wrote "
                << config.embeddings_file().string() << '\n';
    } else if (app.got_subcommand("train")) {
      dialogic::cmd_train(config);
      std::cout << "train: models in " << config.models_dir().string() << '\n';
    } else if (app.got_subcommand("evaluate")) {
      dialogic::EvalReport report = dialogic::cmd_evaluate(config);
      for (const dialogic::EvalEntry& entry : report.entries) {
        std::printf("%-14s %-8s auc=%.4f\n",
                    dialogic::to_string(entry.instruction).c_str(),
                    entry.model.c_str(), entry.auc.value);
      }
      std::cout << "evaluate: report in " << config.reports_dir().string()
                << '\n';
    } else if (app.got_subcommand("predict")) {
      if (predict_text.empty() == predict_input.empty()) {
        throw std::invalid_argument(
            "predict needs exactly one of --text or --input");
      }
      if (!predict_text.empty()) {
        dialogic::Prediction p =
            dialogic::cmd_predict_text(config, predict_text);
        std::cout << prediction_json(p).dump() << '\n';
      } else {
        std::vector<dialogic::Prediction> predictions =
            dialogic::cmd_predict_file(config, predict_input, predict_output);
        if (predict_output.empty()) {
          for (const dialogic::Prediction& p : predictions) {
            std::cout << prediction_json(p).dump() << '\n';
          }
        } else {
          std::cout << "predict: " << predictions.size() << " sentence(s) to "
                    << predict_output << '\n';
        }
      }
    } else if (app.got_subcommand("e2e")) {
      std::filesystem::path timeline = dialogic::cmd_e2e(config, e2e_input);
      std::cout << "e2e: timeline " << timeline.string() << '\n';
    } else if (app.got_subcommand("gradcheck")) {
      double max_rel = dialogic::cmd_gradcheck(config, instances, epsilon);
      std::printf("gradcheck: max relative error %.3e over %d instance(s)\n",
                  max_rel, instances);
      if (!(max_rel < 1e-4)) {
        std::cerr << "gradcheck failed: error not below 1e-4\n";
        return 2;
      }
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const dialogic::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
