// core/src/corpus.cc

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

#include "dialogic/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "corpus_banks.h"
#include "dialogic/rng.h"

namespace dialogic {

std::string to_string(InstructionType type) {
  switch (type) {
    case InstructionType::kGreeting:
      return "greeting";
    case InstructionType::kGuidance:
      return "guidance";
    case InstructionType::kNoteTaking:
      return "note_taking";
    case InstructionType::kCommending:
      return "commending";
    case InstructionType::kRepeating:
      return "repeating";
    case InstructionType::kSummarization:
      return "summarization";
  }
  throw std::logic_error("unknown instruction type");
}

InstructionType instruction_from_string(std::string_view name) {
  for (InstructionType type : kAllInstructionTypes) {
    if (to_string(type) == name) return type;
  }
  throw std::invalid_argument("unknown instruction type: " +
                              std::string(name));
}

std::vector<std::string> tokenize(std::string_view text) {
  auto is_detached = [](char c) {
    return c == '.' || c == ',' || c == '?' || c == '!' || c == ';' ||
           c == ':' || c == '\'' || c == '"';
  };
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (is_detached(raw)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, int min_count)
    : tokens_(std::move(tokens)), min_count_(min_count) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<int>(i) + 2);
    if (!inserted) {
      throw Error("duplicate token in vocabulary: " + tokens_[i]);
    }
  }
}

int Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkIndex : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return index_.find(token) != index_.end();
}

Vocabulary build_vocabulary(const std::vector<LabeledSentence>& sentences,
                            int min_count) {
  if (sentences.empty()) {
    throw EmptyCorpus("cannot build a vocabulary from an empty corpus");
  }
  if (min_count < 1) {
    throw std::invalid_argument("min_count must be >= 1");
  }
  std::map<std::string, std::int64_t> counts;
  for (const LabeledSentence& sentence : sentences) {
    for (std::string& token : tokenize(sentence.text)) {
      ++counts[std::move(token)];
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> ordered;
  ordered.reserve(kept.size());
  for (auto& [token, count] : kept) ordered.push_back(std::move(token));
  return Vocabulary(std::move(ordered), min_count);
}

DatasetSplit split_dataset(const std::vector<LabeledSentence>& corpus,
                           std::uint64_t seed,
                           const std::array<double, 3>& ratios) {
  if (corpus.empty()) {
    throw EmptyCorpus("cannot split an empty corpus");
  }
  for (double r : ratios) {
    if (r < 0.0) throw std::invalid_argument("split ratios must be >= 0");
  }
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }
  std::vector<LabeledSentence> shuffled = corpus;
  Rng rng(seed);
  rng.shuffle(shuffled);

  std::size_t n = shuffled.size();
  std::size_t n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * ratios[1]));
  std::size_t n_test = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * ratios[2]));
  std::size_t n_train = n - n_val - n_test;

  DatasetSplit split;
  split.seed = seed;
  split.train.assign(shuffled.begin(), shuffled.begin() + n_train);
  split.validation.assign(shuffled.begin() + n_train,
                          shuffled.begin() + n_train + n_val);
  split.test.assign(shuffled.begin() + n_train + n_val, shuffled.end());
  return split;
}

std::vector<LabeledSentence> generate_corpus(InstructionType type, int n_pos,
                                             int n_neg, std::uint64_t seed) {
  if (n_pos < 0 || n_neg < 0) {
    throw std::invalid_argument("sentence counts must be >= 0");
  }
  const internal::PhraseBank& bank = internal::bank_for(type);

  // The type's full surface set; negatives must never land in it.
  std::vector<std::string> own_forms = enumerate_instruction_phrases(type);
  std::unordered_set<std::string> own(own_forms.begin(), own_forms.end());

  std::vector<InstructionType> others;
  for (InstructionType other : kAllInstructionTypes) {
    if (other != type) others.push_back(other);
  }

  Rng rng(seed);
  std::vector<LabeledSentence> out;
  out.reserve(static_cast<std::size_t>(n_pos) + n_neg);
  for (int i = 0; i < n_pos; ++i) {
    out.push_back({internal::sample_phrase(bank, rng), 1, type});
  }
  for (int i = 0; i < n_neg; ++i) {
    std::string text;
    do {
      double u = rng.uniform();
      if (u < bank.p_twin) {
        text = internal::sample_twin(bank, rng);
      } else if (u < bank.p_twin + bank.p_confuser) {
        text = bank.confusers[rng.below(bank.confusers.size())];
      } else if (u < bank.p_twin + bank.p_confuser + bank.p_generic) {
        const auto& generic = internal::generic_distractors();
        text = generic[rng.below(generic.size())];
      } else {
        InstructionType other = others[rng.below(others.size())];
        text = internal::sample_phrase(internal::bank_for(other), rng);
      }
    } while (own.count(text) > 0);
    out.push_back({std::move(text), 0, type});
  }
  return out;
}

void write_dataset_file(const std::vector<LabeledSentence>& sentences,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open dataset file for writing: " + path.string());
  }
  for (const LabeledSentence& sentence : sentences) {
    nlohmann::json record = {
        {"instruction", to_string(sentence.instruction)},
        {"label", sentence.label},
        {"text", sentence.text},
    };
    out << record.dump() << '\n';
  }
}

std::vector<LabeledSentence> read_dataset_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open dataset file: " + path.string());
  }
  std::vector<LabeledSentence> sentences;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    LabeledSentence sentence;
    try {
      nlohmann::json record = nlohmann::json::parse(line);
      sentence.text = record.at("text").get<std::string>();
      sentence.label = record.at("label").get<int>();
      sentence.instruction =
          instruction_from_string(record.at("instruction").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed dataset record in " + path.string() + ": " +
                  e.what());
    }
    if (sentence.label != 0 && sentence.label != 1) {
      throw Error("dataset label must be 0 or 1 in " + path.string());
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

void write_vocabulary_file(const Vocabulary& vocabulary,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open vocabulary file for writing: " + path.string());
  }
  for (const std::string& token : vocabulary.tokens()) {
    out << token << '\n';
  }
}

Vocabulary read_vocabulary_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open vocabulary file: " + path.string());
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) tokens.push_back(line);
  }
  return Vocabulary(std::move(tokens));
}

}  // namespace dialogic
