// tests/test_evaluation.cc

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

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "dialogic/evaluation.h"
#include "dialogic/rng.h"
#include "test_helpers.h"

using dialogic::InstructionType;
using dialogic::LabeledSentence;
using dialogic::RocCurve;
using dialogic::ScoredExample;
using namespace dialogic_tests;

namespace {

std::vector<ScoredExample> pinned_examples() {
  return {{0.9, 1}, {0.8, 0}, {0.7, 1}, {0.3, 0}};
}

// Random example set over a coarse score grid so ties are frequent; the
// first two entries guarantee both classes are present.
std::vector<ScoredExample> random_examples(dialogic::Rng& rng) {
  std::vector<ScoredExample> out = {{0.5, 1}, {0.5, 0}};
  int n = 2 + static_cast<int>(rng.below(60));
  for (int i = 0; i < n; ++i) {
    double score = static_cast<double>(rng.below(8)) / 8.0;
    out.push_back({score, static_cast<int>(rng.below(2))});
  }
  return out;
}

// Extracts the k-th polyline's points="..." payload from an SVG body.
std::string polyline_points(const std::string& svg, int k) {
  std::size_t at = 0;
  for (int i = 0; i <= k; ++i) {
    at = svg.find("<polyline", at);
    REQUIRE(at != std::string::npos);
    ++at;
  }
  std::size_t open = svg.find("points=\"", at);
  REQUIRE(open != std::string::npos);
  open += 8;
  std::size_t close = svg.find('"', open);
  return svg.substr(open, close - open);
}

std::vector<std::pair<double, double>> parse_points(const std::string& body) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(body);
  std::string pair;
  while (in >> pair) {
    std::size_t comma = pair.find(',');
    REQUIRE(comma != std::string::npos);
    out.emplace_back(std::strtod(pair.substr(0, comma).c_str(), nullptr),
                     std::strtod(pair.substr(comma + 1).c_str(), nullptr));
  }
  return out;
}

}  // namespace

TEST_CASE("roc curve of the pinned example walks the known staircase") {
  RocCurve curve = dialogic::roc_curve(pinned_examples());

  std::vector<std::pair<double, double>> expected = {
      {0.0, 0.0}, {0.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 1.0}};
  CHECK(curve.points == expected);
  CHECK(curve.thresholds == std::vector<double>{0.9, 0.8, 0.7, 0.3});
  CHECK(dialogic::auc(pinned_examples()) == doctest::Approx(0.75));
  CHECK(dialogic::auc_pairwise(pinned_examples()) == doctest::Approx(0.75));
}

TEST_CASE("perfect, inverted and uninformative scores pin the AUC scale") {
  std::vector<ScoredExample> perfect = {{0.9, 1}, {0.8, 1}, {0.2, 0}, {0.1, 0}};
  CHECK(dialogic::auc(perfect) == 1.0);

  std::vector<ScoredExample> inverted = {{0.9, 0}, {0.8, 0}, {0.2, 1}, {0.1, 1}};
  CHECK(dialogic::auc(inverted) == 0.0);

  std::vector<ScoredExample> tied = {{0.4, 1}, {0.4, 0}, {0.4, 1}, {0.4, 0}};
  RocCurve flat = dialogic::roc_curve(tied);
  CHECK(flat.points ==
        std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 1.0}});
  CHECK(dialogic::auc(tied) == doctest::Approx(0.5));

  std::vector<ScoredExample> half_tied = {{0.9, 1}, {0.5, 1}, {0.5, 0}};
  CHECK(dialogic::auc(half_tied) == doctest::Approx(0.75));
  CHECK(dialogic::auc_pairwise(half_tied) == doctest::Approx(0.75));
}

TEST_CASE("trapezoid and pairwise AUC agree on random tied sets") {
  dialogic::Rng rng(31);
  for (int round = 0; round < 40; ++round) {
    std::vector<ScoredExample> examples = random_examples(rng);
    CHECK(dialogic::auc(examples) ==
          doctest::Approx(dialogic::auc_pairwise(examples)).epsilon(1e-12));
  }
}

TEST_CASE("AUC is invariant under strictly increasing score transforms") {
  dialogic::Rng rng(32);
  for (int round = 0; round < 20; ++round) {
    std::vector<ScoredExample> examples = random_examples(rng);
    double base = dialogic::auc(examples);

    auto transformed = examples;
    for (ScoredExample& e : transformed) e.score = 2.0 * e.score + 1.0;
    CHECK(dialogic::auc(transformed) == base);

    transformed = examples;
    for (ScoredExample& e : transformed) e.score = std::exp(e.score);
    CHECK(dialogic::auc(transformed) == base);
  }
}

TEST_CASE("roc points are a monotone staircase from (0,0) to (1,1)") {
  dialogic::Rng rng(33);
  for (int round = 0; round < 25; ++round) {
    RocCurve curve = dialogic::roc_curve(random_examples(rng));
    REQUIRE(curve.points.size() >= 2);
    CHECK(curve.points.front() == std::make_pair(0.0, 0.0));
    CHECK(curve.points.back() == std::make_pair(1.0, 1.0));
    CHECK(curve.points.size() == curve.thresholds.size() + 1);
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
      CHECK(curve.points[k].first >= curve.points[k - 1].first);
      CHECK(curve.points[k].second >= curve.points[k - 1].second);
    }
    for (std::size_t k = 1; k < curve.thresholds.size(); ++k) {
      CHECK(curve.thresholds[k] < curve.thresholds[k - 1]);
    }
  }
}

TEST_CASE("degenerate or malformed inputs are rejected") {
  CHECK_THROWS_AS(dialogic::roc_curve({}), dialogic::DegenerateLabels);
  CHECK_THROWS_AS(dialogic::roc_curve({{0.5, 1}, {0.3, 1}}),
                  dialogic::DegenerateLabels);
  CHECK_THROWS_AS(dialogic::auc({{0.5, 0}, {0.3, 0}}),
                  dialogic::DegenerateLabels);
  CHECK_THROWS_AS(dialogic::auc_pairwise({{0.5, 1}}),
                  dialogic::DegenerateLabels);

  double nan = std::numeric_limits<double>::quiet_NaN();
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(dialogic::auc({{nan, 1}, {0.3, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(dialogic::auc({{inf, 1}, {0.3, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(dialogic::auc({{0.5, 2}, {0.3, 0}}), std::invalid_argument);
}

TEST_CASE("evaluate_models emits canonical (instruction, model) order") {
  std::vector<LabeledSentence> greet = {
      {"hello there", 1, InstructionType::kGreeting},
      {"open your book", 0, InstructionType::kGreeting},
      {"hi class", 1, InstructionType::kGreeting},
      {"sit down please", 0, InstructionType::kGreeting}};
  std::vector<LabeledSentence> guide = {
      {"what do you think", 1, InstructionType::kGuidance},
      {"the bell rang", 0, InstructionType::kGuidance}};

  std::map<std::string, dialogic::Scorer> models = {
      {"oracle", [](const LabeledSentence& s) {
         return s.label == 1 ? 1.0 : 0.0;
       }},
      {"length", [](const LabeledSentence& s) {
         return static_cast<double>(s.text.size());
       }}};
  std::map<InstructionType, std::vector<LabeledSentence>> sets = {
      {InstructionType::kGreeting, greet},
      {InstructionType::kGuidance, guide}};

  dialogic::EvalReport report = dialogic::evaluate_models(models, sets);
  REQUIRE(report.entries.size() == 4);
  CHECK(report.entries[0].instruction == InstructionType::kGreeting);
  CHECK(report.entries[0].model == "length");
  CHECK(report.entries[1].instruction == InstructionType::kGreeting);
  CHECK(report.entries[1].model == "oracle");
  CHECK(report.entries[2].instruction == InstructionType::kGuidance);
  CHECK(report.entries[3].instruction == InstructionType::kGuidance);

  CHECK(report.entries[1].auc.value == 1.0);
  CHECK(report.entries[1].auc.n_pos == 2);
  CHECK(report.entries[1].auc.n_neg == 2);
  CHECK(report.entries[3].auc.value == 1.0);  // longer text is the positive
  CHECK(report.entries[3].model == "oracle");
}

TEST_CASE("render_report writes the CSV schema and parseable SVG curves") {
  std::vector<LabeledSentence> greet = {
      {"hello there", 1, InstructionType::kGreeting},
      {"open your book", 0, InstructionType::kGreeting},
      {"good morning", 1, InstructionType::kGreeting},
      {"turn the page", 0, InstructionType::kGreeting}};
  std::map<std::string, dialogic::Scorer> models = {
      {"oracle", [](const LabeledSentence& s) {
         return s.label == 1 ? 1.0 : 0.0;
       }},
      {"chance", [](const LabeledSentence&) { return 0.5; }}};
  std::map<InstructionType, std::vector<LabeledSentence>> sets = {
      {InstructionType::kGreeting, greet}};
  dialogic::EvalReport report = dialogic::evaluate_models(models, sets);

  TempDir dir;
  dialogic::render_report(report, dir / "reports");

  std::string csv = read_text(dir / "reports" / "auc_report.csv");
  CHECK(csv.rfind("instruction,model,auc,n_pos,n_neg\n", 0) == 0);
  CHECK(csv.find("greeting,chance,0.5,2,2\n") != std::string::npos);
  CHECK(csv.find("greeting,oracle,1,2,2\n") != std::string::npos);

  std::string svg = read_text(dir / "reports" / "roc_greeting.svg");
  CHECK(svg.find("<svg xmlns=") != std::string::npos);
  CHECK(svg.find(">FPR<") != std::string::npos);
  CHECK(svg.find(">TPR<") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);  // chance diagonal
  CHECK(svg.find("chance (AUC=0.500)") != std::string::npos);
  CHECK(svg.find("oracle (AUC=1.000)") != std::string::npos);

  // The first polyline is entries[0] ("chance"); mapping the curve through
  // svg_point must reproduce the emitted coordinates.
  for (int k = 0; k < 2; ++k) {
    auto parsed = parse_points(polyline_points(svg, k));
    const RocCurve& curve = report.entries[k].curve;
    REQUIRE(parsed.size() == curve.points.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      auto [px, py] = dialogic::svg_point(curve.points[i].first,
                                          curve.points[i].second);
      CHECK(parsed[i].first == doctest::Approx(px).epsilon(1e-9));
      CHECK(parsed[i].second == doctest::Approx(py).epsilon(1e-9));
    }
  }
}

TEST_CASE("svg_point maps the unit square onto the plot rectangle") {
  auto [ox, oy] = dialogic::svg_point(0.0, 0.0);
  auto [cx, cy] = dialogic::svg_point(1.0, 1.0);
  CHECK(ox < cx);   // FPR grows rightward
  CHECK(oy > cy);   // TPR grows upward on a y-down canvas
  auto [mx, my] = dialogic::svg_point(0.5, 0.5);
  CHECK(mx == doctest::Approx(0.5 * (ox + cx)));
  CHECK(my == doctest::Approx(0.5 * (oy + cy)));
}
