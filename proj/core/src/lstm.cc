// core/src/lstm.cc

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

#include "dialogic/lstm.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dialogic {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec gate_preactivation(const Mat& w, const Mat& u, const Vec& b,
                       const Vec& x, const Vec& h_prev) {
  Vec a = matvec(w, x);
  for (int j = 0; j < u.rows; ++j) a[j] += dot(u.row(j), h_prev) + b[j];
  return a;
}

}  // namespace

LstmParams LstmParams::zeros(int input_dim, int hidden) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.w_i = Mat(hidden, input_dim);
  p.w_f = Mat(hidden, input_dim);
  p.w_o = Mat(hidden, input_dim);
  p.w_g = Mat(hidden, input_dim);
  p.u_i = Mat(hidden, hidden);
  p.u_f = Mat(hidden, hidden);
  p.u_o = Mat(hidden, hidden);
  p.u_g = Mat(hidden, hidden);
  p.b_i.assign(hidden, 0.0);
  p.b_f.assign(hidden, 0.0);
  p.b_o.assign(hidden, 0.0);
  p.b_g.assign(hidden, 0.0);
  return p;
}

LstmParams LstmParams::init(int input_dim, int hidden, Rng& rng) {
  if (input_dim < 1 || hidden < 1) {
    throw std::invalid_argument("lstm dims must be >= 1");
  }
  LstmParams p = zeros(input_dim, hidden);
  double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (Mat* m : {&p.w_i, &p.w_f, &p.w_o, &p.w_g, &p.u_i, &p.u_f, &p.u_o,
                 &p.u_g}) {
    for (double& w : m->data) w = rng.uniform(-bound, bound);
  }
  for (Vec* b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) {
    for (double& w : *b) w = rng.uniform(-bound, bound);
  }
  for (double& w : p.b_f) w = 1.0;
  return p;
}

Vec lstm_forward(const std::vector<Vec>& inputs, const LstmParams& params,
                 LstmCache* cache) {
  if (inputs.empty()) {
    throw std::invalid_argument("lstm_forward requires sequence length >= 1");
  }
  for (const Vec& x : inputs) {
    if (static_cast<int>(x.size()) != params.input_dim) {
      throw ShapeMismatch("lstm input has dim " + std::to_string(x.size()) +
                          ", params expect " +
                          std::to_string(params.input_dim));
    }
  }
  int h = params.hidden;
  Vec h_prev(h, 0.0);
  Vec c_prev(h, 0.0);
  if (cache) {
    *cache = LstmCache{};
    cache->x = inputs;
  }
  for (const Vec& x : inputs) {
    Vec ai = gate_preactivation(params.w_i, params.u_i, params.b_i, x, h_prev);
    Vec af = gate_preactivation(params.w_f, params.u_f, params.b_f, x, h_prev);
    Vec ao = gate_preactivation(params.w_o, params.u_o, params.b_o, x, h_prev);
    Vec ag = gate_preactivation(params.w_g, params.u_g, params.b_g, x, h_prev);
    Vec c_t(h), h_t(h), tanh_c(h);
    for (int j = 0; j < h; ++j) {
      ai[j] = sigmoid(ai[j]);
      af[j] = sigmoid(af[j]);
      ao[j] = sigmoid(ao[j]);
      ag[j] = std::tanh(ag[j]);
      c_t[j] = af[j] * c_prev[j] + ai[j] * ag[j];
      tanh_c[j] = std::tanh(c_t[j]);
      h_t[j] = ao[j] * tanh_c[j];
    }
    if (cache) {
      cache->i.push_back(ai);
      cache->f.push_back(af);
      cache->o.push_back(ao);
      cache->g.push_back(ag);
      cache->c.push_back(c_t);
      cache->h.push_back(h_t);
      cache->tanh_c.push_back(tanh_c);
    }
    c_prev = std::move(c_t);
    h_prev = std::move(h_t);
  }
  return h_prev;
}

LstmParams lstm_backward(const LstmParams& params, const LstmCache& cache,
                         const Vec& grad_h_final) {
  int h = params.hidden;
  int steps = cache.steps();
  if (static_cast<int>(grad_h_final.size()) != h) {
    throw ShapeMismatch("grad_h_final dim disagrees with hidden size");
  }
  if (steps == 0) {
    throw std::invalid_argument("lstm_backward needs a non-empty cache");
  }
  LstmParams grads = LstmParams::zeros(params.input_dim, h);

  Vec dh = grad_h_final;
  Vec dc(h, 0.0);
  Vec da_i(h), da_f(h), da_o(h), da_g(h);
  for (int t = steps - 1; t >= 0; --t) {
    const Vec& i_t = cache.i[t];
    const Vec& f_t = cache.f[t];
    const Vec& o_t = cache.o[t];
    const Vec& g_t = cache.g[t];
    const Vec& tanh_c = cache.tanh_c[t];
    const Vec* c_prev = t > 0 ? &cache.c[t - 1] : nullptr;
    const Vec* h_prev = t > 0 ? &cache.h[t - 1] : nullptr;

    for (int j = 0; j < h; ++j) {
      dc[j] += dh[j] * o_t[j] * (1.0 - tanh_c[j] * tanh_c[j]);
      double do_ = dh[j] * tanh_c[j];
      double di = dc[j] * g_t[j];
      double df = dc[j] * (c_prev ? (*c_prev)[j] : 0.0);
      double dg = dc[j] * i_t[j];
      da_i[j] = di * i_t[j] * (1.0 - i_t[j]);
      da_f[j] = df * f_t[j] * (1.0 - f_t[j]);
      da_o[j] = do_ * o_t[j] * (1.0 - o_t[j]);
      da_g[j] = dg * (1.0 - g_t[j] * g_t[j]);
      dc[j] *= f_t[j];
    }

    add_outer(grads.w_i, da_i, cache.x[t]);
    add_outer(grads.w_f, da_f, cache.x[t]);
    add_outer(grads.w_o, da_o, cache.x[t]);
    add_outer(grads.w_g, da_g, cache.x[t]);
    for (int j = 0; j < h; ++j) {
      grads.b_i[j] += da_i[j];
      grads.b_f[j] += da_f[j];
      grads.b_o[j] += da_o[j];
      grads.b_g[j] += da_g[j];
    }
    if (h_prev) {
      add_outer(grads.u_i, da_i, *h_prev);
      add_outer(grads.u_f, da_f, *h_prev);
      add_outer(grads.u_o, da_o, *h_prev);
      add_outer(grads.u_g, da_g, *h_prev);
      std::fill(dh.begin(), dh.end(), 0.0);
      add_matvec_transposed(params.u_i, da_i, dh);
      add_matvec_transposed(params.u_f, da_f, dh);
      add_matvec_transposed(params.u_o, da_o, dh);
      add_matvec_transposed(params.u_g, da_g, dh);
    }
  }
  return grads;
}

}  // namespace dialogic
