// core/include/dialogic/gradcheck.h

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

#ifndef DIALOGIC_GRADCHECK_H_
#define DIALOGIC_GRADCHECK_H_

#include <cstdint>
#include <vector>

#include "dialogic/classifier.h"
#include "dialogic/matrix.h"

namespace dialogic {

/// Central-difference check of the analytic BPTT gradients on the binary
/// cross-entropy loss of one example. The numeric side re-implements the
/// whole forward pass in extended precision, independent of the production
/// code, and perturbs every scalar parameter by +/- epsilon. Returns
/// max over parameters of |analytic - numeric| / max(1e-12, |analytic| + |numeric|).
double gradient_check_instance(const LstmClassifier& model,
                               const std::vector<Vec>& inputs, int label,
                               double epsilon = 1e-5);

/// Builds a random model (dims as given) and a random input sequence from
/// the seed, then runs gradient_check_instance on it.
double gradient_check_random(int input_dim, int hidden, int ff_dim,
                             int seq_len, std::uint64_t seed,
                             double epsilon = 1e-5);

}  // namespace dialogic

#endif  // DIALOGIC_GRADCHECK_H_
