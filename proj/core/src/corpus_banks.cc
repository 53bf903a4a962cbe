// core/src/corpus_banks.cc

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

#include "corpus_banks.h"

#include <cctype>
#include <stdexcept>

namespace dialogic {
namespace internal {

namespace {

// Slot fills available to every bank. Empty strings are legal fills; the
// renderer cleans up the spacing they leave behind.
const std::map<std::string, std::vector<std::string>>& SharedSlots() {
  static const std::map<std::string, std::vector<std::string>> kShared = {
      {"polite", {"", "please ", "now ", "okay "}},
      {"this_that", {"this", "that"}},
  };
  return kShared;
}

// Greetings are nearly fixed phrases: a small bank with little slot
// variation, mirroring how session openers sound in practice.
const PhraseBank& GreetingBank() {
  static const PhraseBank kBank = {
      {
          "how are you doing",
          "can you hear me",
          "can you hear me clearly",
          "hello can you see my screen",
          "{greet} how are you",
          "good {daypart}",
          "good {daypart} are you ready for class",
          "is your {device} working",
          "welcome back to class",
          "hi there nice to see you again",
      },
      {
          {"greet", {"hello", "hi", "hey"}},
          {"daypart", {"morning", "afternoon", "evening"}},
          {"device", {"microphone", "camera", "headset"}},
      },
      {"hello", "hi", "hey", "morning", "afternoon", "evening", "hear", "see",
       "doing", "welcome", "microphone", "camera", "headset", "good"},
      {},
      {},
      0.0,
      0.0,
      0.5,
  };
  return kBank;
}

const PhraseBank& GuidanceBank() {
  static const PhraseBank kBank = {
      {
          "do you know the reason",
          "let's see how we can get there",
          "why do you think that {g_verb}",
          "what do you think {g_future}",
          "{polite}look at this {g_obj} and tell me what you notice",
          "how would you solve this {g_problem}",
          "take a guess what could it be",
          "can you figure out what comes next",
          "think about it for a moment",
          "what does this {g_obj} mean",
          "do you have any idea why",
          "suppose we change this number what happens",
      },
      {
          {"g_verb", {"happens", "works", "changes"}},
          {"g_future",
           {"happens next", "the answer is", "we should do first"}},
          {"g_obj", {"picture", "graph", "sentence", "equation", "map"}},
          {"g_problem", {"problem", "question", "puzzle"}},
      },
      {"think", "reason", "why", "how", "solve", "notice", "idea", "guess",
       "figure", "suppose", "happens", "mean"},
      {},
      {
          "the reason we start early is the short schedule today",
          "i think we are out of time for this part",
          "it happens to everyone just check your spelling",
          "how about we take the quiz on thursday instead",
          "no idea is a bad idea but we must move on now",
      },
      0.0,
      0.15,
      0.35,
  };
  return kBank;
}

// The three high-variation banks pair every aux-fronted request with a twin
// negative carrying the identical token multiset, so bag-of-words features
// cannot fully separate the classes while word order still can.
const PhraseBank& NoteTakingBank() {
  static const PhraseBank kBank = {
      {
          "highlight this paragraph",
          "{polite}copy this part",
          "{polite}write {this_that} {n_obj} down in your {n_place}",
          "take notes on this {n_topic}",
          "{polite}underline the {n_obj} in your {n_place}",
          "jot {this_that} down before we continue",
          "make a note of this {n_obj}",
          "add this {n_obj} to your notes",
          "don't forget to write the {n_obj} down",
          "can you write {this_that} {n_obj} down",
          "could you copy the {n_obj} into your {n_place}",
          "can you take notes on this {n_topic}",
          "could you jot the {n_obj} down",
          "can you mark the {n_obj} in your {n_place}",
          "could you highlight the {n_obj}",
          "can you add the {n_obj} to your notes",
      },
      {
          {"n_obj",
           {"definition", "formula", "rule", "example", "sentence", "word",
            "date", "step"}},
          {"n_place", {"notebook", "notes", "workbook"}},
          {"n_topic", {"section", "chapter", "example", "part"}},
      },
      {"highlight", "copy", "write", "jot", "underline", "mark", "note",
       "notes", "notebook", "workbook", "down"},
      {
          "you can write {this_that} {n_obj} down",
          "you could copy the {n_obj} into your {n_place}",
          "you can take notes on this {n_topic}",
          "you could jot the {n_obj} down",
          "you can mark the {n_obj} in your {n_place}",
          "you could highlight the {n_obj}",
          "you can add the {n_obj} to your notes",
      },
      {
          "i left my notes in the office give me a second",
          "the notes from last class were quite long",
          "the copy machine in the office is broken again",
          "i will mark your homework tonight",
          "put your notebook away we are done for today",
          "i wrote a note to your parents yesterday",
      },
      0.45,
      0.08,
      0.12,
  };
  return kBank;
}

const PhraseBank& CommendingBank() {
  static const PhraseBank kBank = {
      {
          "good job",
          "well done",
          "{praise_adj} work",
          "you did a {praise_adj} job{c_scope}",
          "i'm really proud of you",
          "{praise_excl} you got it right",
          "keep up the {praise_adj} work",
          "that's exactly right well done",
          "what a {praise_adj} effort",
          "that was {praise_adj} work",
          "your answer was {praise_adj}",
          "that answer was exactly right",
          "your reading was {praise_adj} today",
          "that was a {praise_adj} answer",
          "your work on the {c_task} was {praise_adj}",
      },
      {
          {"praise_adj",
           {"good", "great", "excellent", "wonderful", "fantastic", "amazing",
            "brilliant", "nice", "superb"}},
          {"praise_excl",
           {"awesome", "excellent", "brilliant", "perfect", "wonderful"}},
          {"c_scope",
           {"", " on this exercise", " with that problem", " today"}},
          {"c_task", {"exercise", "question", "reading", "problem"}},
      },
      {"good", "great", "well", "excellent", "wonderful", "fantastic",
       "amazing", "brilliant", "nice", "superb", "awesome", "perfect", "proud",
       "job", "done", "work", "right"},
      {
          "was that {praise_adj} work",
          "was your answer {praise_adj}",
          "was that answer exactly right",
          "was your reading {praise_adj} today",
          "was that a {praise_adj} answer",
          "was your work on the {c_task} {praise_adj}",
      },
      {
          "your job is to finish these five questions",
          "the job of the heart is to pump blood",
          "a good way to start is to read the question twice",
          "perfect squares are numbers like nine and sixteen",
          "are you feeling well enough to continue",
          "it took a great deal of time to grade these tests",
      },
      0.45,
      0.08,
      0.12,
  };
  return kBank;
}

const PhraseBank& RepeatingBank() {
  static const PhraseBank kBank = {
      {
          "could you please explain that to me",
          "{polite}say {this_that} again",
          "{polite}repeat after me",
          "repeat the last {r_item} for me",
          "tell me in your own words what {r_topic} means",
          "walk me through your answer again",
          "let's hear that explanation one more time",
          "can you rephrase {this_that}",
          "can you say {this_that} again",
          "could you repeat the last {r_item}",
          "can you explain it back to me",
          "could you go over {this_that} again",
          "can you explain {this_that} one more time",
          "could you read the {r_item} once more",
      },
      {
          {"r_item", {"word", "sentence", "question", "rule", "step"}},
          {"r_topic",
           {"this rule", "this word", "the story", "this sentence"}},
      },
      {"repeat", "rephrase", "explain", "again", "say", "tell", "words",
       "back", "more", "hear"},
      {
          "you can rephrase {this_that}",
          "you can say {this_that} again",
          "you could repeat the last {r_item}",
          "you can explain it back to me",
          "you could go over {this_that} again",
          "you can explain {this_that} one more time",
          "you could read the {r_item} once more",
      },
      {
          "i will explain the homework at the end",
          "let me say that again more slowly",
          "we will repeat this exercise tomorrow",
          "history repeats itself in interesting ways",
          "in other words the answer is four",
          "back in chapter three we saw a similar case",
      },
      0.45,
      0.08,
      0.12,
  };
  return kBank;
}

const PhraseBank& SummarizationBank() {
  static const PhraseBank kBank = {
      {
          "let's review the key points",
          "let's wrap up",
          "let's wrap up for today",
          "to sum up we {s_verb} {s_obj} today",
          "let's recap the main ideas",
          "let's review what we learned today",
          "so to summarize remember these {s_count} points",
          "that's all for today let's review quickly",
          "here are the main takeaways from this lesson",
          "before we finish a quick summary",
      },
      {
          {"s_verb", {"covered", "learned", "practiced"}},
          {"s_obj",
           {"three new words", "two grammar rules", "the first chapter",
            "a lot"}},
          {"s_count", {"two", "three", "key"}},
      },
      {"review", "recap", "summarize", "sum", "wrap", "covered", "learned",
       "takeaways", "summary", "main", "key"},
      {},
      {},
      0.0,
      0.0,
      0.5,
  };
  return kBank;
}

// Neutral teacher talk. A few entries deliberately reuse words from some
// bank's lemma list inside unrelated frames.
const std::vector<std::string>& GenericDistractors() {
  static const std::vector<std::string> kGeneric = {
      "open your book to page twelve",
      "let's move on to the next question",
      "the homework is due on friday",
      "we have ten minutes left in class",
      "the bell will ring in five minutes",
      "today we will study the water cycle",
      "the answer to question three is on the next page",
      "please mute yourself while i read the passage",
      "read the passage quietly to yourself",
      "this equation has two unknowns",
      "the exam will cover chapters one through four",
      "turn to the glossary at the end of the book",
      "i will share my screen now",
      "the second paragraph talks about volcanoes",
      "remember to bring your calculator next time",
      "the quiz results will be ready by monday",
      "let's take a five minute break now",
      "the deadline for the project is next week",
      "this word comes from latin",
      "the diagram shows the parts of a plant",
      "scroll to the top of the document",
      "i will send the slides after class",
      "the test has twenty questions in total",
      "speak up a little the volume is low",
      "the next lesson starts at four o'clock",
      "use a pencil for the first draft",
      "the chapter about fractions starts on page forty",
      "our classroom got new chairs over the weekend",
      "the echo in the room makes it hard to hear you",
      "raise your hand if you can't see the slides",
      "the book review is due next month",
  };
  return kGeneric;
}

const std::vector<std::string>& FillsFor(const PhraseBank& bank,
                                         const std::string& slot) {
  if (auto it = bank.slots.find(slot); it != bank.slots.end()) {
    return it->second;
  }
  if (auto it = SharedSlots().find(slot); it != SharedSlots().end()) {
    return it->second;
  }
  throw std::logic_error("unknown slot: " + slot);
}

std::string CleanupSpacing(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out.push_back(c);
  }
  while (!out.empty() && out.front() == ' ') out.erase(out.begin());
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

// Expands a template left to right. `pick` chooses a fill index given the
// fill count, so one routine serves both sampling and enumeration.
template <typename PickFn>
std::string Render(const PhraseBank& bank, const std::string& tmpl,
                   PickFn&& pick) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i++]);
      continue;
    }
    std::size_t close = tmpl.find('}', i);
    if (close == std::string::npos) {
      throw std::logic_error("unterminated slot in template: " + tmpl);
    }
    std::string slot = tmpl.substr(i + 1, close - i - 1);
    const std::vector<std::string>& fills = FillsFor(bank, slot);
    out += fills[pick(fills.size())];
    i = close + 1;
  }
  return CleanupSpacing(out);
}

void EnumerateTemplate(const PhraseBank& bank, const std::string& tmpl,
                       std::vector<std::size_t>& choice, std::size_t depth,
                       std::vector<std::string>& out) {
  // Counts the slots once, then walks the full cartesian product of fills.
  std::size_t slots = 0;
  for (std::size_t i = 0; (i = tmpl.find('{', i)) != std::string::npos; ++i) {
    ++slots;
  }
  if (depth == 0) choice.assign(slots, 0);
  if (depth == slots) {
    std::size_t next = 0;
    out.push_back(Render(bank, tmpl, [&](std::size_t) {
      return choice[next++];
    }));
    return;
  }
  std::size_t pos = 0;
  for (std::size_t k = 0; k <= depth; ++k) {
    pos = tmpl.find('{', pos) + 1;
  }
  std::size_t close = tmpl.find('}', pos);
  std::string slot = tmpl.substr(pos, close - pos);
  std::size_t n = FillsFor(bank, slot).size();
  for (std::size_t v = 0; v < n; ++v) {
    choice[depth] = v;
    EnumerateTemplate(bank, tmpl, choice, depth + 1, out);
  }
}

}  // namespace

const PhraseBank& bank_for(InstructionType type) {
  switch (type) {
    case InstructionType::kGreeting:
      return GreetingBank();
    case InstructionType::kGuidance:
      return GuidanceBank();
    case InstructionType::kNoteTaking:
      return NoteTakingBank();
    case InstructionType::kCommending:
      return CommendingBank();
    case InstructionType::kRepeating:
      return RepeatingBank();
    case InstructionType::kSummarization:
      return SummarizationBank();
  }
  throw std::logic_error("unknown instruction type");
}

const std::vector<std::string>& generic_distractors() {
  return GenericDistractors();
}

const std::map<std::string, std::vector<std::string>>& shared_slots() {
  return SharedSlots();
}

std::string sample_phrase(const PhraseBank& bank, Rng& rng) {
  const std::string& tmpl = bank.templates[rng.below(bank.templates.size())];
  return Render(bank, tmpl,
                [&](std::size_t n) { return rng.below(n); });
}

std::string sample_twin(const PhraseBank& bank, Rng& rng) {
  if (bank.twins.empty()) {
    throw std::logic_error("bank has no twin templates");
  }
  const std::string& tmpl = bank.twins[rng.below(bank.twins.size())];
  return Render(bank, tmpl,
                [&](std::size_t n) { return rng.below(n); });
}

}  // namespace internal

const std::vector<std::string>& instruction_lemmas(InstructionType type) {
  return internal::bank_for(type).lemmas;
}

std::vector<std::string> enumerate_instruction_phrases(InstructionType type) {
  const internal::PhraseBank& bank = internal::bank_for(type);
  std::vector<std::string> out;
  std::vector<std::size_t> choice;
  for (const std::string& tmpl : bank.templates) {
    internal::EnumerateTemplate(bank, tmpl, choice, 0, out);
  }
  return out;
}

}  // namespace dialogic
