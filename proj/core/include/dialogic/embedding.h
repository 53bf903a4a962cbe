// core/include/dialogic/embedding.h

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

#ifndef DIALOGIC_EMBEDDING_H_
#define DIALOGIC_EMBEDDING_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/error.h"
#include "dialogic/matrix.h"

namespace dialogic {

struct HeaderMismatch : Error {
  using Error::Error;
};
struct DimMismatch : Error {
  using Error::Error;
};
struct DuplicateToken : Error {
  using Error::Error;
};

/// Token vectors, one row per vocabulary index. Row 0 (PAD) is all zeros;
/// row 1 (UNK) is the mean of the known rows.
struct EmbeddingTable {
  Vocabulary vocabulary;
  Mat matrix;
  int dim = 0;

  std::span<const double> row(int index) const { return matrix.row(index); }
};

/// Text format: header "V d", then V lines "token f1 ... fd".
/// UNK is set to the mean of the loaded rows, PAD to zeros.
EmbeddingTable load_embeddings(const std::filesystem::path& path);

/// Inverse of load_embeddings: header then one line per non-reserved token,
/// components printed to 12 significant digits.
void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path);

struct SkipGramConfig {
  int dim = 64;
  int window = 4;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  void validate() const;
};

struct SkipGramResult {
  EmbeddingTable table;
  /// Mean per-pair objective of each epoch (negative log likelihood).
  std::vector<double> epoch_objective;
};

/// Skip-gram with negative sampling over tokenized sentences. For every
/// (center, context) pair inside the symmetric window the objective
/// log sigma(u_ctx . v_ctr) + sum_k log sigma(-u_neg . v_ctr) is maximized
/// by SGD; negatives come from the unigram distribution raised to 0.75 and
/// the learning rate decays linearly over the run. Both matrices start
/// uniform in [-0.5/d, 0.5/d] from the seed; the center table is returned.
/// Single-threaded on purpose: same seed, same matrices.
SkipGramResult train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipGramConfig& config, std::uint64_t seed);

/// Per-token row lookup; OOV tokens map to the UNK row. An empty token list
/// yields a single PAD vector so downstream models always see length >= 1.
std::vector<Vec> embed_sentence(const std::vector<std::string>& tokens,
                                const EmbeddingTable& table);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace dialogic

#endif  // DIALOGIC_EMBEDDING_H_
