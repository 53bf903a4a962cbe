// core/include/dialogic/error.h

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

#ifndef DIALOGIC_ERROR_H_
#define DIALOGIC_ERROR_H_

#include <stdexcept>
#include <string>

namespace dialogic {

/// Base class for every error the toolkit raises on bad input or bad state.
/// Callers that only care about "this toolkit failed" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A labeled set holds only one class where both are required (training,
/// ROC/AUC). Shared by the model and evaluation modules.
struct DegenerateLabels : Error {
  using Error::Error;
};

}  // namespace dialogic

#endif  // DIALOGIC_ERROR_H_
