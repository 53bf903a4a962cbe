// core/src/classifier.cc

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

#include "dialogic/classifier.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>

#include <json.hpp>

#include "dialogic/evaluation.h"

namespace dialogic {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

// Fixed parameter order shared by gradients, Adam moments and clipping.
std::vector<std::span<double>> param_spans(LstmParams& lstm,
                                           FeedForwardHead& head) {
  return {lstm.w_i.data, lstm.w_f.data, lstm.w_o.data, lstm.w_g.data,
          lstm.u_i.data, lstm.u_f.data, lstm.u_o.data, lstm.u_g.data,
          lstm.b_i,      lstm.b_f,      lstm.b_o,      lstm.b_g,
          head.w1.data,  head.b1,       head.w2,       std::span<double>(&head.b2, 1)};
}

void add_lstm_grads(LstmParams& into, const LstmParams& grads) {
  auto add = [](Vec& a, const Vec& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  };
  add(into.w_i.data, grads.w_i.data);
  add(into.w_f.data, grads.w_f.data);
  add(into.w_o.data, grads.w_o.data);
  add(into.w_g.data, grads.w_g.data);
  add(into.u_i.data, grads.u_i.data);
  add(into.u_f.data, grads.u_f.data);
  add(into.u_o.data, grads.u_o.data);
  add(into.u_g.data, grads.u_g.data);
  add(into.b_i, grads.b_i);
  add(into.b_f, grads.b_f);
  add(into.b_o, grads.b_o);
  add(into.b_g, grads.b_g);
}

void require_both_classes(const std::vector<LabeledSentence>& sentences,
                          const char* which) {
  bool pos = false, neg = false;
  for (const LabeledSentence& s : sentences) {
    (s.label == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) {
    throw DegenerateLabels(std::string(which) +
                           " split must contain both classes");
  }
}

nlohmann::json mat_to_json(const Mat& m) { return m.data; }

Mat mat_from_json(const nlohmann::json& j, int rows, int cols,
                  const char* name) {
  Mat m(rows, cols);
  std::vector<double> values = j.get<std::vector<double>>();
  if (values.size() != m.data.size()) {
    throw Error(std::string("model weight '") + name +
                "' has wrong element count");
  }
  m.data = std::move(values);
  return m;
}

Vec vec_from_json(const nlohmann::json& j, std::size_t n, const char* name) {
  Vec v = j.get<Vec>();
  if (v.size() != n) {
    throw Error(std::string("model weight '") + name +
                "' has wrong element count");
  }
  return v;
}

}  // namespace

FeedForwardHead FeedForwardHead::zeros(int hidden, int ff_dim) {
  FeedForwardHead head;
  head.w1 = Mat(ff_dim, hidden);
  head.b1.assign(ff_dim, 0.0);
  head.w2.assign(ff_dim, 0.0);
  head.b2 = 0.0;
  return head;
}

FeedForwardHead FeedForwardHead::init(int hidden, int ff_dim, Rng& rng) {
  if (hidden < 1 || ff_dim < 1) {
    throw std::invalid_argument("head dims must be >= 1");
  }
  FeedForwardHead head = zeros(hidden, ff_dim);
  double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& w : head.w1.data) w = rng.uniform(-bound, bound);
  for (double& w : head.b1) w = rng.uniform(-bound, bound);
  for (double& w : head.w2) w = rng.uniform(-bound, bound);
  head.b2 = rng.uniform(-bound, bound);
  return head;
}

double head_logit(const FeedForwardHead& head, const Vec& h,
                  Vec* hidden_pre) {
  if (static_cast<int>(h.size()) != head.w1.cols) {
    throw ShapeMismatch("head input dim disagrees with w1 columns");
  }
  Vec z1 = matvec(head.w1, h);
  for (std::size_t j = 0; j < z1.size(); ++j) z1[j] += head.b1[j];
  double logit = head.b2;
  for (std::size_t j = 0; j < z1.size(); ++j) {
    logit += head.w2[j] * std::max(0.0, z1[j]);
  }
  if (hidden_pre) *hidden_pre = std::move(z1);
  return logit;
}

double head_probability(const FeedForwardHead& head, const Vec& h) {
  double logit = head_logit(head, h);
  // Clamp keeps the output strictly inside (0,1) in double precision.
  return sigmoid(std::clamp(logit, -36.0, 36.0));
}

void TrainConfig::validate() const {
  if (hidden < 1 || ff_dim < 1) {
    throw std::invalid_argument("hidden and ff_dim must be >= 1");
  }
  if (learning_rate <= 0.0) {
    throw std::invalid_argument("learning rate must be > 0");
  }
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("max epochs must be >= 1");
  if (clip_norm <= 0.0) throw std::invalid_argument("clip norm must be > 0");
  if (patience < 0) throw std::invalid_argument("patience must be >= 0");
}

double predict(const std::string& text, const EmbeddingTable& table,
               const LstmClassifier& model) {
  if (table.dim != model.input_dim) {
    throw ShapeMismatch("embedding dim " + std::to_string(table.dim) +
                        " disagrees with model input dim " +
                        std::to_string(model.input_dim));
  }
  std::vector<Vec> xs = embed_sentence(tokenize(text), table);
  Vec h = lstm_forward(xs, model.lstm);
  return head_probability(model.head, h);
}

TrainResult train_classifier(const std::vector<LabeledSentence>& train,
                             const std::vector<LabeledSentence>& validation,
                             const EmbeddingTable& table,
                             const TrainConfig& config) {
  config.validate();
  if (train.empty() || validation.empty()) {
    throw DegenerateLabels("train and validation splits must be non-empty");
  }
  require_both_classes(train, "train");
  require_both_classes(validation, "validation");

  int d = table.dim;
  Rng rng(config.seed);
  LstmClassifier model;
  model.instruction = train.front().instruction;
  model.input_dim = d;
  model.hidden = config.hidden;
  model.ff_dim = config.ff_dim;
  model.lstm = LstmParams::init(d, config.hidden, rng);
  model.head = FeedForwardHead::init(config.hidden, config.ff_dim, rng);

  // Embeddings are fixed during training; cache every sequence once.
  auto embed_all = [&](const std::vector<LabeledSentence>& sentences) {
    std::vector<std::vector<Vec>> out;
    out.reserve(sentences.size());
    for (const LabeledSentence& s : sentences) {
      out.push_back(embed_sentence(tokenize(s.text), table));
    }
    return out;
  };
  std::vector<std::vector<Vec>> train_x = embed_all(train);
  std::vector<std::vector<Vec>> val_x = embed_all(validation);

  LstmParams grad_lstm = LstmParams::zeros(d, config.hidden);
  FeedForwardHead grad_head = FeedForwardHead::zeros(config.hidden,
                                                     config.ff_dim);
  LstmParams m_lstm = LstmParams::zeros(d, config.hidden);
  FeedForwardHead m_head = FeedForwardHead::zeros(config.hidden,
                                                  config.ff_dim);
  LstmParams v_lstm = LstmParams::zeros(d, config.hidden);
  FeedForwardHead v_head = FeedForwardHead::zeros(config.hidden,
                                                  config.ff_dim);

  auto params = param_spans(model.lstm, model.head);
  auto grads = param_spans(grad_lstm, grad_head);
  auto adam_m = param_spans(m_lstm, m_head);
  auto adam_v = param_spans(v_lstm, v_head);

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::int64_t adam_t = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  LstmClassifier best = model;
  double best_auc = -std::numeric_limits<double>::infinity();
  int bad_epochs = 0;
  TrainResult result;

  Vec dh(config.hidden), dz1(config.ff_dim);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      std::size_t stop = std::min(order.size(),
                                  start + static_cast<std::size_t>(
                                              config.batch_size));
      for (auto& span : grads) std::fill(span.begin(), span.end(), 0.0);

      for (std::size_t k = start; k < stop; ++k) {
        std::size_t idx = order[k];
        double y = train[idx].label;
        LstmCache cache;
        Vec h = lstm_forward(train_x[idx], model.lstm, &cache);
        Vec z1;
        double logit = head_logit(model.head, h, &z1);
        loss_sum += softplus(logit) - y * logit;
        double dlogit = sigmoid(logit) - y;

        grad_head.b2 += dlogit;
        std::fill(dh.begin(), dh.end(), 0.0);
        for (int j = 0; j < config.ff_dim; ++j) {
          double a1 = std::max(0.0, z1[j]);
          grad_head.w2[j] += dlogit * a1;
          dz1[j] = z1[j] > 0.0 ? dlogit * model.head.w2[j] : 0.0;
          grad_head.b1[j] += dz1[j];
        }
        add_outer(grad_head.w1, dz1, h);
        add_matvec_transposed(model.head.w1, dz1, dh);

        add_lstm_grads(grad_lstm, lstm_backward(model.lstm, cache, dh));
      }

      double inv_n = 1.0 / static_cast<double>(stop - start);
      double sq_norm = 0.0;
      for (auto& span : grads) {
        for (double& g : span) {
          g *= inv_n;
          sq_norm += g * g;
        }
      }
      double norm = std::sqrt(sq_norm);
      if (norm > config.clip_norm) {
        double scale = config.clip_norm / norm;
        for (auto& span : grads) {
          for (double& g : span) g *= scale;
        }
      }

      ++adam_t;
      double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam_t));
      double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam_t));
      for (std::size_t s = 0; s < params.size(); ++s) {
        auto p = params[s];
        auto g = grads[s];
        auto mm = adam_m[s];
        auto vv = adam_v[s];
        for (std::size_t j = 0; j < p.size(); ++j) {
          mm[j] = kBeta1 * mm[j] + (1.0 - kBeta1) * g[j];
          vv[j] = kBeta2 * vv[j] + (1.0 - kBeta2) * g[j] * g[j];
          double m_hat = mm[j] / bc1;
          double v_hat = vv[j] / bc2;
          p[j] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
        }
      }
    }

    std::vector<ScoredExample> val_scores;
    val_scores.reserve(validation.size());
    for (std::size_t k = 0; k < validation.size(); ++k) {
      Vec h = lstm_forward(val_x[k], model.lstm);
      val_scores.push_back(
          {head_probability(model.head, h), validation[k].label});
    }
    double val_auc = auc(val_scores);

    result.history.push_back(
        {loss_sum / static_cast<double>(train.size()), val_auc});
    model.meta.epochs_run = epoch;

    if (val_auc > best_auc) {
      best_auc = val_auc;
      best = model;
      bad_epochs = 0;
    } else {
      ++bad_epochs;
      if (bad_epochs > config.patience) break;
    }
  }

  best.meta.seed = config.seed;
  best.meta.epochs_run = model.meta.epochs_run;
  best.meta.best_val_auc = best_auc;
  result.model = std::move(best);
  return result;
}

void save_classifier(const LstmClassifier& model,
                     const std::filesystem::path& path) {
  nlohmann::json doc = {
      {"format_version", 1},
      {"instruction", to_string(model.instruction)},
      {"dims",
       {{"input_dim", model.input_dim},
        {"hidden", model.hidden},
        {"ff_dim", model.ff_dim}}},
      {"weights",
       {{"w_i", mat_to_json(model.lstm.w_i)},
        {"w_f", mat_to_json(model.lstm.w_f)},
        {"w_o", mat_to_json(model.lstm.w_o)},
        {"w_g", mat_to_json(model.lstm.w_g)},
        {"u_i", mat_to_json(model.lstm.u_i)},
        {"u_f", mat_to_json(model.lstm.u_f)},
        {"u_o", mat_to_json(model.lstm.u_o)},
        {"u_g", mat_to_json(model.lstm.u_g)},
        {"b_i", model.lstm.b_i},
        {"b_f", model.lstm.b_f},
        {"b_o", model.lstm.b_o},
        {"b_g", model.lstm.b_g},
        {"head_w1", mat_to_json(model.head.w1)},
        {"head_b1", model.head.b1},
        {"head_w2", model.head.w2},
        {"head_b2", model.head.b2}}},
      {"training",
       {{"seed", model.meta.seed},
        {"epochs_run", model.meta.epochs_run},
        {"best_val_auc", model.meta.best_val_auc}}},
  };
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open model file for writing: " + path.string());
  }
  out << doc.dump(2) << '\n';
}

LstmClassifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open model file: " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed model file " + path.string() + ": " + e.what());
  }
  if (!doc.contains("format_version") ||
      doc["format_version"].get<int>() != 1) {
    throw Error("unknown model format_version in " + path.string());
  }
  LstmClassifier model;
  try {
    model.instruction =
        instruction_from_string(doc.at("instruction").get<std::string>());
    const nlohmann::json& dims = doc.at("dims");
    model.input_dim = dims.at("input_dim").get<int>();
    model.hidden = dims.at("hidden").get<int>();
    model.ff_dim = dims.at("ff_dim").get<int>();
    if (model.input_dim < 1 || model.hidden < 1 || model.ff_dim < 1) {
      throw Error("model dims must be >= 1 in " + path.string());
    }

    const nlohmann::json& w = doc.at("weights");
    int d = model.input_dim, h = model.hidden, f = model.ff_dim;
    model.lstm = LstmParams::zeros(d, h);
    model.lstm.w_i = mat_from_json(w.at("w_i"), h, d, "w_i");
    model.lstm.w_f = mat_from_json(w.at("w_f"), h, d, "w_f");
    model.lstm.w_o = mat_from_json(w.at("w_o"), h, d, "w_o");
    model.lstm.w_g = mat_from_json(w.at("w_g"), h, d, "w_g");
    model.lstm.u_i = mat_from_json(w.at("u_i"), h, h, "u_i");
    model.lstm.u_f = mat_from_json(w.at("u_f"), h, h, "u_f");
    model.lstm.u_o = mat_from_json(w.at("u_o"), h, h, "u_o");
    model.lstm.u_g = mat_from_json(w.at("u_g"), h, h, "u_g");
    model.lstm.b_i = vec_from_json(w.at("b_i"), h, "b_i");
    model.lstm.b_f = vec_from_json(w.at("b_f"), h, "b_f");
    model.lstm.b_o = vec_from_json(w.at("b_o"), h, "b_o");
    model.lstm.b_g = vec_from_json(w.at("b_g"), h, "b_g");
    model.head = FeedForwardHead::zeros(h, f);
    model.head.w1 = mat_from_json(w.at("head_w1"), f, h, "head_w1");
    model.head.b1 = vec_from_json(w.at("head_b1"), f, "head_b1");
    model.head.w2 = vec_from_json(w.at("head_w2"), f, "head_w2");
    model.head.b2 = w.at("head_b2").get<double>();

    const nlohmann::json& meta = doc.at("training");
    model.meta.seed = meta.at("seed").get<std::uint64_t>();
    model.meta.epochs_run = meta.at("epochs_run").get<int>();
    model.meta.best_val_auc = meta.at("best_val_auc").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed model file " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error("malformed model file " + path.string() + ": " + e.what());
  }
  return model;
}

}  // namespace dialogic
