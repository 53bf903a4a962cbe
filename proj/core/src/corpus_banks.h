// core/src/corpus_banks.h

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

#ifndef DIALOGIC_CORPUS_BANKS_H_
#define DIALOGIC_CORPUS_BANKS_H_

#include <map>
#include <string>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/rng.h"

namespace dialogic {
namespace internal {

/// Phrase bank for one instruction type. Templates may contain {slot}
/// placeholders resolved against `slots` first, then the shared slot table.
/// Text is lowercase without sentence punctuation, matching ASR output.
struct PhraseBank {
  std::vector<std::string> templates;
  std::map<std::string, std::vector<std::string>> slots;
  /// Marker words; every expansion of `templates` contains at least one.
  std::vector<std::string> lemmas;
  /// Negative templates that reorder an instruction template into a
  /// non-directive reading (echo question, permission statement) with the
  /// exact same token multiset, so only word order carries the label.
  std::vector<std::string> twins;
  /// Non-instructional classroom talk reusing this bank's marker words.
  std::vector<std::string> confusers;
  /// Negative sampling mix: twins / own confusers / generic talk /
  /// other-type positives. Sums to 1.
  double p_twin = 0.0;
  double p_confuser = 0.25;
  double p_generic = 0.25;
};

const PhraseBank& bank_for(InstructionType type);
const std::vector<std::string>& generic_distractors();
const std::map<std::string, std::vector<std::string>>& shared_slots();

/// Expands one uniformly chosen template of the bank.
std::string sample_phrase(const PhraseBank& bank, Rng& rng);

/// Expands one uniformly chosen twin template. Requires a non-empty twin set.
std::string sample_twin(const PhraseBank& bank, Rng& rng);

}  // namespace internal
}  // namespace dialogic

#endif  // DIALOGIC_CORPUS_BANKS_H_
