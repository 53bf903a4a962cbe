// benchmarks/bench_pipeline.cc

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

#include <cmath>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "dialogic/audio.h"
#include "dialogic/corpus.h"
#include "dialogic/evaluation.h"
#include "dialogic/lstm.h"
#include "dialogic/rng.h"

namespace {

dialogic::AudioBuffer tone_buffer(int seconds) {
  dialogic::AudioBuffer buffer;
  buffer.sample_rate = 16000;
  buffer.samples.resize(static_cast<std::size_t>(seconds) * 16000);
  for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
    buffer.samples[i] =
        0.4 * std::sin(2.0 * 3.14159265358979323846 * 440.0 *
                       static_cast<double>(i) / 16000.0);
  }
  return buffer;
}

void BM_FrameEnergies(benchmark::State& state) {
  dialogic::AudioBuffer buffer = tone_buffer(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    dialogic::FrameEnergySeries series =
        dialogic::frame_energies(buffer, 30, 10);
    benchmark::DoNotOptimize(series.energies.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(buffer.samples.size()));
}
BENCHMARK(BM_FrameEnergies)->Arg(10)->Arg(60);

void BM_LstmForward(benchmark::State& state) {
  const std::size_t dim = 64;
  const std::size_t hidden = static_cast<std::size_t>(state.range(0));
  dialogic::Rng rng(7);
  dialogic::LstmParams params = dialogic::LstmParams::init(dim, hidden, rng);
  std::vector<dialogic::Vec> inputs(20, dialogic::Vec(dim));
  for (dialogic::Vec& x : inputs) {
    for (double& v : x) v = rng.uniform() - 0.5;
  }
  for (auto _ : state) {
    dialogic::Vec h = dialogic::lstm_forward(inputs, params);
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_LstmForward)->Arg(32)->Arg(64)->Arg(128);

void BM_Auc(benchmark::State& state) {
  dialogic::Rng rng(11);
  std::vector<dialogic::ScoredExample> examples;
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  examples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    examples.push_back({rng.uniform(), static_cast<int>(rng.below(2))});
  }
  for (auto _ : state) {
    double value = dialogic::auc(examples);
    benchmark::DoNotOptimize(value);
  }
}
BENCHMARK(BM_Auc)->Arg(1000)->Arg(100000);

void BM_Tokenize(benchmark::State& state) {
  std::string text =
      "Hello, can you hear me? Please write down the key points and "
      "repeat after me: great job, everyone.";
  for (auto _ : state) {
    std::vector<std::string> tokens = dialogic::tokenize(text);
    benchmark::DoNotOptimize(tokens.data());
  }
}
BENCHMARK(BM_Tokenize);

}  // namespace

BENCHMARK_MAIN();
