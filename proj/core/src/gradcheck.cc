// core/src/gradcheck.cc

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

#include "dialogic/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dialogic/lstm.h"
#include "dialogic/rng.h"

namespace dialogic {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Parameter block offsets inside the flat vector, in the fixed order
// w_i w_f w_o w_g u_i u_f u_o u_g b_i b_f b_o b_g head_w1 head_b1 head_w2 head_b2.
struct FlatLayout {
  int d, h, f;
  std::size_t w_block, u_block;

  explicit FlatLayout(int input_dim, int hidden, int ff_dim)
      : d(input_dim), h(hidden), f(ff_dim) {
    w_block = static_cast<std::size_t>(h) * d;
    u_block = static_cast<std::size_t>(h) * h;
  }
  std::size_t w(int gate) const { return gate * w_block; }
  std::size_t u(int gate) const { return 4 * w_block + gate * u_block; }
  std::size_t b(int gate) const {
    return 4 * w_block + 4 * u_block + static_cast<std::size_t>(gate) * h;
  }
  std::size_t head_w1() const { return b(4); }
  std::size_t head_b1() const {
    return head_w1() + static_cast<std::size_t>(f) * h;
  }
  std::size_t head_w2() const { return head_b1() + f; }
  std::size_t head_b2() const { return head_w2() + f; }
  std::size_t total() const { return head_b2() + 1; }
};

std::vector<long double> flatten(const LstmClassifier& model,
                                 const FlatLayout& layout) {
  std::vector<long double> flat;
  flat.reserve(layout.total());
  for (const Mat* m : {&model.lstm.w_i, &model.lstm.w_f, &model.lstm.w_o,
                       &model.lstm.w_g, &model.lstm.u_i, &model.lstm.u_f,
                       &model.lstm.u_o, &model.lstm.u_g}) {
    flat.insert(flat.end(), m->data.begin(), m->data.end());
  }
  for (const Vec* b : {&model.lstm.b_i, &model.lstm.b_f, &model.lstm.b_o,
                       &model.lstm.b_g}) {
    flat.insert(flat.end(), b->begin(), b->end());
  }
  flat.insert(flat.end(), model.head.w1.data.begin(),
              model.head.w1.data.end());
  flat.insert(flat.end(), model.head.b1.begin(), model.head.b1.end());
  flat.insert(flat.end(), model.head.w2.begin(), model.head.w2.end());
  flat.push_back(model.head.b2);
  return flat;
}

long double sigmoid_l(long double x) { return 1.0L / (1.0L + std::exp(-x)); }

// Independent extended-precision forward pass + BCE loss over the flat
// parameter vector. Deliberately written from the recurrence definition
// rather than calling the production code.
long double loss_from_flat(const std::vector<long double>& flat,
                           const FlatLayout& layout,
                           const std::vector<Vec>& inputs, int label) {
  int d = layout.d, h = layout.h, f = layout.f;
  std::vector<long double> h_prev(h, 0.0L), c_prev(h, 0.0L);
  std::vector<long double> gates(4);
  for (const Vec& x : inputs) {
    std::vector<long double> h_t(h), c_t(h);
    for (int j = 0; j < h; ++j) {
      for (int gate = 0; gate < 4; ++gate) {
        long double a = flat[layout.b(gate) + j];
        std::size_t w_row = layout.w(gate) + static_cast<std::size_t>(j) * d;
        for (int k = 0; k < d; ++k) a += flat[w_row + k] * x[k];
        std::size_t u_row = layout.u(gate) + static_cast<std::size_t>(j) * h;
        for (int k = 0; k < h; ++k) a += flat[u_row + k] * h_prev[k];
        gates[gate] = a;
      }
      long double i_t = sigmoid_l(gates[0]);
      long double f_t = sigmoid_l(gates[1]);
      long double o_t = sigmoid_l(gates[2]);
      long double g_t = std::tanh(gates[3]);
      c_t[j] = f_t * c_prev[j] + i_t * g_t;
      h_t[j] = o_t * std::tanh(c_t[j]);
    }
    h_prev = std::move(h_t);
    c_prev = std::move(c_t);
  }

  long double logit = flat[layout.head_b2()];
  for (int j = 0; j < f; ++j) {
    long double z = flat[layout.head_b1() + j];
    std::size_t row = layout.head_w1() + static_cast<std::size_t>(j) * h;
    for (int k = 0; k < h; ++k) z += flat[row + k] * h_prev[k];
    if (z > 0.0L) logit += flat[layout.head_w2() + j] * z;
  }
  long double y = label;
  return std::max(logit, 0.0L) + std::log1p(std::exp(-std::abs(logit))) -
         y * logit;
}

}  // namespace

double gradient_check_instance(const LstmClassifier& model,
                               const std::vector<Vec>& inputs, int label,
                               double epsilon) {
  if (epsilon <= 0.0) {
    throw std::invalid_argument("gradcheck epsilon must be > 0");
  }
  FlatLayout layout(model.input_dim, model.hidden, model.ff_dim);

  // Analytic side through the production forward/backward.
  LstmCache cache;
  Vec h = lstm_forward(inputs, model.lstm, &cache);
  Vec z1;
  double logit = head_logit(model.head, h, &z1);
  double dlogit = sigmoid(logit) - label;

  FeedForwardHead grad_head = FeedForwardHead::zeros(model.hidden,
                                                     model.ff_dim);
  Vec dh(model.hidden, 0.0), dz1(model.ff_dim, 0.0);
  grad_head.b2 = dlogit;
  for (int j = 0; j < model.ff_dim; ++j) {
    grad_head.w2[j] = dlogit * std::max(0.0, z1[j]);
    dz1[j] = z1[j] > 0.0 ? dlogit * model.head.w2[j] : 0.0;
    grad_head.b1[j] = dz1[j];
  }
  add_outer(grad_head.w1, dz1, h);
  add_matvec_transposed(model.head.w1, dz1, dh);
  LstmParams grad_lstm = lstm_backward(model.lstm, cache, dh);

  LstmClassifier grads;
  grads.input_dim = model.input_dim;
  grads.hidden = model.hidden;
  grads.ff_dim = model.ff_dim;
  grads.lstm = std::move(grad_lstm);
  grads.head = std::move(grad_head);
  std::vector<long double> analytic = flatten(grads, layout);

  // Numeric side by central differences in extended precision.
  std::vector<long double> flat = flatten(model, layout);
  long double eps = epsilon;
  double max_rel = 0.0;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    long double saved = flat[k];
    flat[k] = saved + eps;
    long double up = loss_from_flat(flat, layout, inputs, label);
    flat[k] = saved - eps;
    long double down = loss_from_flat(flat, layout, inputs, label);
    flat[k] = saved;
    long double numeric = (up - down) / (2.0L * eps);
    long double denom = std::max(
        1e-12L, std::abs(analytic[k]) + std::abs(numeric));
    double rel = static_cast<double>(std::abs(analytic[k] - numeric) / denom);
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

double gradient_check_random(int input_dim, int hidden, int ff_dim,
                             int seq_len, std::uint64_t seed,
                             double epsilon) {
  if (seq_len < 1) {
    throw std::invalid_argument("gradcheck sequence length must be >= 1");
  }
  Rng rng(seed);
  LstmClassifier model;
  model.input_dim = input_dim;
  model.hidden = hidden;
  model.ff_dim = ff_dim;
  model.lstm = LstmParams::init(input_dim, hidden, rng);
  model.head = FeedForwardHead::init(hidden, ff_dim, rng);
  std::vector<Vec> inputs(seq_len, Vec(input_dim));
  for (Vec& x : inputs) {
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
  }
  int label = static_cast<int>(rng.below(2));
  return gradient_check_instance(model, inputs, label, epsilon);
}

}  // namespace dialogic
