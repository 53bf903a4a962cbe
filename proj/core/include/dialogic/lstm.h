// core/include/dialogic/lstm.h

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

#ifndef DIALOGIC_LSTM_H_
#define DIALOGIC_LSTM_H_

#include <cstdint>
#include <vector>

#include "dialogic/error.h"
#include "dialogic/matrix.h"
#include "dialogic/rng.h"

namespace dialogic {

struct ShapeMismatch : Error {
  using Error::Error;
};

/// Single-layer unidirectional LSTM cell, non-peephole:
///   i_t = sigma(W_i x_t + U_i h_{t-1} + b_i)    f_t, o_t analogous
///   g_t = tanh(W_g x_t + U_g h_{t-1} + b_g)
///   c_t = f_t * c_{t-1} + i_t * g_t
///   h_t = o_t * tanh(c_t)
/// with h_0 = c_0 = 0. Weight rows index hidden units: W_* is h x d,
/// U_* is h x h.
struct LstmParams {
  int input_dim = 0;
  int hidden = 0;
  Mat w_i, w_f, w_o, w_g;
  Mat u_i, u_f, u_o, u_g;
  Vec b_i, b_f, b_o, b_g;

  static LstmParams zeros(int input_dim, int hidden);
  /// Uniform in [-1/sqrt(h), 1/sqrt(h)], forget-gate bias 1.0 for gradient
  /// flow early in training.
  static LstmParams init(int input_dim, int hidden, Rng& rng);
};

/// Every per-step intermediate the backward pass needs.
struct LstmCache {
  std::vector<Vec> x, i, f, o, g, c, h, tanh_c;
  int steps() const { return static_cast<int>(x.size()); }
};

/// Runs the recurrence over the input sequence; returns h_T. When `cache`
/// is non-null it is filled for a subsequent lstm_backward call.
/// Throws ShapeMismatch when an input vector disagrees with input_dim.
Vec lstm_forward(const std::vector<Vec>& inputs, const LstmParams& params,
                 LstmCache* cache = nullptr);

/// Exact backpropagation through time. `grad_h_final` is dL/dh_T; the
/// returned struct holds dL/d(parameter) in the LstmParams layout.
LstmParams lstm_backward(const LstmParams& params, const LstmCache& cache,
                         const Vec& grad_h_final);

}  // namespace dialogic

#endif  // DIALOGIC_LSTM_H_
