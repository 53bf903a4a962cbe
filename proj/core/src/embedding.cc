// core/src/embedding.cc

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

#include "dialogic/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dialogic/rng.h"

namespace dialogic {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string format_component(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void set_unk_to_mean(Mat& matrix) {
  // Rows 0 and 1 are PAD and UNK; the mean runs over the known rows only.
  int known = matrix.rows - 2;
  for (int j = 0; j < matrix.cols; ++j) matrix.at(1, j) = 0.0;
  if (known <= 0) return;
  for (int i = 2; i < matrix.rows; ++i) {
    for (int j = 0; j < matrix.cols; ++j) matrix.at(1, j) += matrix.at(i, j);
  }
  for (int j = 0; j < matrix.cols; ++j) matrix.at(1, j) /= known;
}

}  // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open embeddings file: " + path.string());
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw HeaderMismatch("embeddings file is empty: " + path.string());
  }
  long long v = 0, d = 0;
  {
    std::istringstream hs(header);
    std::string extra;
    if (!(hs >> v >> d) || (hs >> extra)) {
      throw HeaderMismatch("embeddings header must be \"V d\", got: " + header);
    }
  }
  if (v < 1 || d < 1) {
    throw HeaderMismatch("embeddings header requires V >= 1 and d >= 1");
  }

  std::vector<std::string> tokens;
  Mat matrix(static_cast<int>(v) + 2, static_cast<int>(d));
  std::string line;
  long long rows_read = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (rows_read == v) {
      throw HeaderMismatch("embeddings file has more rows than declared");
    }
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    for (long long j = 0; j < d; ++j) {
      double value = 0.0;
      if (!(ls >> value) || !std::isfinite(value)) {
        throw DimMismatch("embeddings row for '" + token + "' does not have " +
                          std::to_string(d) + " finite values");
      }
      matrix.at(static_cast<int>(rows_read) + 2, static_cast<int>(j)) = value;
    }
    std::string extra;
    if (ls >> extra) {
      throw DimMismatch("embeddings row for '" + token + "' has more than " +
                        std::to_string(d) + " values");
    }
    if (std::find(tokens.begin(), tokens.end(), token) != tokens.end()) {
      throw DuplicateToken("duplicate token in embeddings file: " + token);
    }
    tokens.push_back(std::move(token));
    ++rows_read;
  }
  if (rows_read != v) {
    throw HeaderMismatch("embeddings file declares " + std::to_string(v) +
                         " rows but has " + std::to_string(rows_read));
  }
  set_unk_to_mean(matrix);

  EmbeddingTable table;
  table.dim = static_cast<int>(d);
  table.vocabulary = Vocabulary(std::move(tokens));
  table.matrix = std::move(matrix);
  return table;
}

void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open embeddings file for writing: " + path.string());
  }
  const std::vector<std::string>& tokens = table.vocabulary.tokens();
  out << tokens.size() << ' ' << table.dim << '\n';
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out << tokens[i];
    std::span<const double> row = table.matrix.row(static_cast<int>(i) + 2);
    for (double v : row) out << ' ' << format_component(v);
    out << '\n';
  }
}

void SkipGramConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("skip-gram dim must be >= 2");
  if (window < 1) throw std::invalid_argument("skip-gram window must be >= 1");
  if (negatives < 1) {
    throw std::invalid_argument("skip-gram negatives must be >= 1");
  }
  if (epochs < 1) throw std::invalid_argument("skip-gram epochs must be >= 1");
  if (learning_rate <= 0.0) {
    throw std::invalid_argument("skip-gram learning rate must be > 0");
  }
}

SkipGramResult train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipGramConfig& config,
                              std::uint64_t seed) {
  config.validate();

  // Vocabulary over all tokens, same ordering rule as build_vocabulary.
  std::map<std::string, std::int64_t> counts;
  for (const auto& sentence : corpus) {
    for (const std::string& token : sentence) ++counts[token];
  }
  if (counts.empty()) {
    throw EmptyCorpus("skip-gram training needs at least one token");
  }
  std::vector<std::pair<std::string, std::int64_t>> ordered(counts.begin(),
                                                            counts.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> token_list;
  token_list.reserve(ordered.size());
  for (auto& [token, count] : ordered) token_list.push_back(token);
  Vocabulary vocabulary(token_list);
  int n_tokens = static_cast<int>(token_list.size());

  // Sentences as non-reserved row offsets (0-based over real tokens).
  std::vector<std::vector<int>> encoded;
  encoded.reserve(corpus.size());
  std::int64_t total_centers = 0;
  for (const auto& sentence : corpus) {
    std::vector<int> ids;
    ids.reserve(sentence.size());
    for (const std::string& token : sentence) {
      ids.push_back(vocabulary.index_of(token) - 2);
    }
    total_centers += static_cast<std::int64_t>(ids.size());
    encoded.push_back(std::move(ids));
  }

  // Cumulative unigram^0.75 mass for binary-search negative sampling.
  std::vector<double> noise_cdf(n_tokens);
  double mass = 0.0;
  for (int i = 0; i < n_tokens; ++i) {
    mass += std::pow(static_cast<double>(ordered[i].second), 0.75);
    noise_cdf[i] = mass;
  }

  int d = config.dim;
  Rng rng(seed);
  Mat center(n_tokens, d);
  Mat context(n_tokens, d);
  double bound = 0.5 / d;
  for (double& w : center.data) w = rng.uniform(-bound, bound);
  for (double& w : context.data) w = rng.uniform(-bound, bound);

  auto sample_negative = [&](int positive) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      double u = rng.uniform() * mass;
      int idx = static_cast<int>(
          std::lower_bound(noise_cdf.begin(), noise_cdf.end(), u) -
          noise_cdf.begin());
      if (idx >= n_tokens) idx = n_tokens - 1;
      if (idx != positive) return idx;
    }
    return -1;
  };

  std::vector<double> epoch_objective;
  Vec center_grad(d);
  std::int64_t processed = 0;
  std::int64_t total_work = total_centers * config.epochs;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::int64_t n_pairs = 0;
    for (const std::vector<int>& ids : encoded) {
      int len = static_cast<int>(ids.size());
      for (int t = 0; t < len; ++t, ++processed) {
        double progress =
            static_cast<double>(processed) / static_cast<double>(total_work);
        double lr = config.learning_rate * std::max(1e-4, 1.0 - progress);
        int ctr = ids[t];
        int lo = std::max(0, t - config.window);
        int hi = std::min(len - 1, t + config.window);
        for (int s = lo; s <= hi; ++s) {
          if (s == t) continue;
          int ctx = ids[s];
          std::span<double> v_ctr = center.row(ctr);
          std::fill(center_grad.begin(), center_grad.end(), 0.0);

          std::span<double> u_ctx = context.row(ctx);
          double score = dot(u_ctx, v_ctr);
          double sig = sigmoid(score);
          double loss = -std::log(std::max(1e-12, sig));
          double g = sig - 1.0;
          for (int j = 0; j < d; ++j) {
            center_grad[j] += g * u_ctx[j];
            u_ctx[j] -= lr * g * v_ctr[j];
          }

          for (int k = 0; k < config.negatives; ++k) {
            int neg = sample_negative(ctx);
            if (neg < 0) continue;
            std::span<double> u_neg = context.row(neg);
            double nscore = dot(u_neg, v_ctr);
            double nsig = sigmoid(nscore);
            loss += -std::log(std::max(1e-12, 1.0 - nsig));
            for (int j = 0; j < d; ++j) {
              center_grad[j] += nsig * u_neg[j];
              u_neg[j] -= lr * nsig * v_ctr[j];
            }
          }

          for (int j = 0; j < d; ++j) v_ctr[j] -= lr * center_grad[j];
          loss_sum += loss;
          ++n_pairs;
        }
      }
    }
    epoch_objective.push_back(n_pairs > 0 ? loss_sum / n_pairs : 0.0);
  }

  Mat matrix(n_tokens + 2, d);
  for (int i = 0; i < n_tokens; ++i) {
    for (int j = 0; j < d; ++j) matrix.at(i + 2, j) = center.at(i, j);
  }
  set_unk_to_mean(matrix);

  SkipGramResult result;
  result.table.dim = d;
  result.table.vocabulary = std::move(vocabulary);
  result.table.matrix = std::move(matrix);
  result.epoch_objective = std::move(epoch_objective);
  return result;
}

std::vector<Vec> embed_sentence(const std::vector<std::string>& tokens,
                                const EmbeddingTable& table) {
  std::vector<Vec> out;
  if (tokens.empty()) {
    out.emplace_back(table.dim, 0.0);
    return out;
  }
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    std::span<const double> row = table.row(table.vocabulary.index_of(token));
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine requires equal dimensions");
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

}  // namespace dialogic
