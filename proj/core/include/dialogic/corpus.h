// core/include/dialogic/corpus.h

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

#ifndef DIALOGIC_CORPUS_H_
#define DIALOGIC_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialogic/error.h"

namespace dialogic {

/// The six dialogic instruction categories. Closed set; serialized as the
/// lowercase names below.
enum class InstructionType {
  kGreeting,
  kGuidance,
  kNoteTaking,
  kCommending,
  kRepeating,
  kSummarization,
};

inline constexpr std::array<InstructionType, 6> kAllInstructionTypes{
    InstructionType::kGreeting,    InstructionType::kGuidance,
    InstructionType::kNoteTaking,  InstructionType::kCommending,
    InstructionType::kRepeating,   InstructionType::kSummarization,
};

std::string to_string(InstructionType type);
InstructionType instruction_from_string(std::string_view name);

/// One sentence with a binary label against a single instruction type.
/// label == 1 means "this sentence is an instance of `instruction`".
struct LabeledSentence {
  std::string text;
  int label = 0;
  InstructionType instruction = InstructionType::kGreeting;
};

struct EmptyCorpus : Error {
  using Error::Error;
};

/// Lowercases, splits on whitespace and detaches . , ? ! ; : ' " into their
/// own tokens. Punctuation-only input yields an empty list.
std::vector<std::string> tokenize(std::string_view text);

/// Token -> index map with two reserved entries: PAD = 0 and UNK = 1.
/// Non-reserved indices are contiguous from 2 in the order the tokens were
/// supplied.
class Vocabulary {
 public:
  static constexpr int kPadIndex = 0;
  static constexpr int kUnkIndex = 1;

  Vocabulary() = default;
  /// Tokens in index order (index = position + 2). Duplicates are an Error.
  explicit Vocabulary(std::vector<std::string> tokens, int min_count = 1);

  /// Index for a token; UNK for anything unknown.
  int index_of(const std::string& token) const;
  bool contains(const std::string& token) const;

  /// Total entries including PAD and UNK.
  int size() const { return static_cast<int>(tokens_.size()) + 2; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  int min_count() const { return min_count_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  int min_count_ = 1;
};

/// Builds a vocabulary from tokenized sentence text. Tokens with corpus
/// frequency >= min_count are kept, ordered by descending frequency with
/// lexicographic tie-break; everything else maps to UNK.
/// Throws EmptyCorpus when `sentences` is empty.
Vocabulary build_vocabulary(const std::vector<LabeledSentence>& sentences,
                            int min_count);

struct DatasetSplit {
  std::vector<LabeledSentence> train;
  std::vector<LabeledSentence> validation;
  std::vector<LabeledSentence> test;
  std::uint64_t seed = 0;
};

/// Deterministic shuffle by seed, then contiguous slicing. Validation and
/// test sizes are floor(n * ratio); the remainder goes to train.
/// Ratios must sum to 1. Throws EmptyCorpus on an empty corpus.
DatasetSplit split_dataset(const std::vector<LabeledSentence>& corpus,
                           std::uint64_t seed,
                           const std::array<double, 3>& ratios = {0.8, 0.1, 0.1});

/// Synthesises a labeled dataset for one instruction type, mimicking
/// lowercase unpunctuated ASR transcripts. Positives come from a per-type
/// phrase bank expanded by slot filling; negatives mix generic classroom
/// talk, phrases that reuse the type's marker words in non-instructional
/// frames, and positives of the other five types. For the high-variation
/// types the negatives also include word-order twins of request templates
/// (same token multiset, non-directive reading), so the label is carried by
/// word order rather than vocabulary. A sentence never appears under both
/// labels in one corpus. Deterministic in the seed.
std::vector<LabeledSentence> generate_corpus(InstructionType type, int n_pos,
                                             int n_neg, std::uint64_t seed);

/// Marker words of a type's phrase bank. Every positive the bank can emit
/// contains at least one of them.
const std::vector<std::string>& instruction_lemmas(InstructionType type);

/// Every surface form the type's phrase bank can emit (templates fully
/// expanded). Small enough to enumerate; used to audit generated corpora.
std::vector<std::string> enumerate_instruction_phrases(InstructionType type);

/// Dataset wire format: one JSON object {"instruction","label","text"} per line.
void write_dataset_file(const std::vector<LabeledSentence>& sentences,
                        const std::filesystem::path& path);
std::vector<LabeledSentence> read_dataset_file(const std::filesystem::path& path);

/// Vocabulary wire format: one token per line, line number = index - 2.
void write_vocabulary_file(const Vocabulary& vocabulary,
                           const std::filesystem::path& path);
Vocabulary read_vocabulary_file(const std::filesystem::path& path);

}  // namespace dialogic

#endif  // DIALOGIC_CORPUS_H_
