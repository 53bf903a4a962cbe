// tests/test_baselines.cc

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
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "dialogic/baselines.h"
#include "dialogic/evaluation.h"
#include "test_helpers.h"

using dialogic::BaselineSet;
using dialogic::GbdtConfig;
using dialogic::GbdtModel;
using dialogic::LinearModel;
using dialogic::Mat;
using dialogic::ScoredExample;
using dialogic::Vec;
using namespace dialogic_tests;

namespace {

Mat mat_from(const std::vector<Vec>& rows) {
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return m;
}

// Two point masses on the first axis; trivially separable.
void one_dim_task(Mat& features, std::vector<int>& labels) {
  std::vector<Vec> rows;
  for (int i = 0; i < 6; ++i) {
    rows.push_back({1.0 + 0.1 * i});
    labels.push_back(1);
    rows.push_back({-1.0 - 0.1 * i});
    labels.push_back(0);
  }
  features = mat_from(rows);
}

// Balanced XOR: every linear scorer has AUC exactly 0.5 on it because each
// sign choice for (w1, w2) wins exactly half of the positive/negative pairs.
void balanced_xor(Mat& features, std::vector<int>& labels) {
  std::vector<Vec> rows;
  for (int i = 0; i < 5; ++i) {
    rows.push_back({0.0, 0.0});
    labels.push_back(0);
    rows.push_back({1.0, 1.0});
    labels.push_back(0);
    rows.push_back({1.0, 0.0});
    labels.push_back(1);
    rows.push_back({0.0, 1.0});
    labels.push_back(1);
  }
  features = mat_from(rows);
}

// Slightly imbalanced XOR so greedy gain has a symmetry-breaking first
// split; a depth-2 tree then fits the parity exactly.
void imbalanced_xor(Mat& features, std::vector<int>& labels) {
  std::vector<Vec> rows;
  auto rep = [&](double a, double b, int label, int times) {
    for (int i = 0; i < times; ++i) {
      rows.push_back({a, b});
      labels.push_back(label);
    }
  };
  rep(0.0, 0.0, 0, 6);
  rep(1.0, 1.0, 0, 5);
  rep(1.0, 0.0, 1, 5);
  rep(0.0, 1.0, 1, 4);
  features = mat_from(rows);
}

template <typename Score>
double auc_of(const Mat& features, const std::vector<int>& labels,
              Score score) {
  std::vector<ScoredExample> scored;
  for (int i = 0; i < features.rows; ++i) {
    scored.push_back({score(features.row(i)), labels[i]});
  }
  return dialogic::auc(scored);
}

}  // namespace

TEST_CASE("featurize_mean averages rows and handles OOV and empty text") {
  TempDir dir;
  write_text(dir / "emb.txt", "2 2\nhello 1 0\nthe 0 1\n");
  dialogic::EmbeddingTable table = dialogic::load_embeddings(dir / "emb.txt");

  Vec mixed = dialogic::featurize_mean("hello the", table);
  CHECK(mixed[0] == doctest::Approx(0.5));
  CHECK(mixed[1] == doctest::Approx(0.5));

  Vec oov = dialogic::featurize_mean("zzz", table);  // UNK = mean row
  CHECK(oov[0] == doctest::Approx(0.5));
  CHECK(oov[1] == doctest::Approx(0.5));

  Vec empty = dialogic::featurize_mean("", table);  // single PAD vector
  CHECK(empty == Vec{0.0, 0.0});

  Vec punct = dialogic::featurize_mean("hello, hello!", table);
  CHECK(punct[0] == doctest::Approx(0.75));  // two hello rows + two UNK rows
}

TEST_CASE("linear model score is an affine map with a shape check") {
  LinearModel model;
  model.weights = {2.0, -1.0};
  model.bias = 0.5;
  CHECK(model.score(Vec{1.0, 3.0}) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(model.score(Vec{1.0}), std::invalid_argument);
}

TEST_CASE("logistic regression fits a separable one-dimensional task") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  LinearModel model = dialogic::train_logreg(features, labels, 0.0, 500, 0.5, 1);
  CHECK(model.weights[0] > 1.0);
  CHECK(dialogic::logreg_probability(model, Vec{1.0}) > 0.9);
  CHECK(dialogic::logreg_probability(model, Vec{-1.0}) < 0.1);
  CHECK(auc_of(features, labels,
               [&](auto x) { return model.score(x); }) == 1.0);
}

TEST_CASE("l2 pulls logreg weights toward zero") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  LinearModel loose = dialogic::train_logreg(features, labels, 0.0, 300, 0.5, 1);
  LinearModel tight = dialogic::train_logreg(features, labels, 1.0, 300, 0.5, 1);
  CHECK(std::abs(tight.weights[0]) < std::abs(loose.weights[0]));
}

TEST_CASE("linear svm fits the separable task with a positive margin") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  LinearModel model =
      dialogic::train_linear_svm(features, labels, 10.0, 200, 0.1, 1);
  CHECK(model.score(Vec{1.0}) > 0.0);
  CHECK(model.score(Vec{-1.0}) < 0.0);
  CHECK(auc_of(features, labels,
               [&](auto x) { return model.score(x); }) == 1.0);
}

TEST_CASE("svm with zero hinge weight decays to the regularizer optimum") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  LinearModel start = dialogic::train_linear_svm(features, labels, 0.0, 1,
                                                 1e-12, 3);
  LinearModel end = dialogic::train_linear_svm(features, labels, 0.0, 60, 0.3,
                                               3);
  CHECK(std::abs(end.weights[0]) < 0.1 * std::abs(start.weights[0]));
}

TEST_CASE("linear models cannot rank balanced XOR above chance") {
  Mat features;
  std::vector<int> labels;
  balanced_xor(features, labels);

  LinearModel logreg =
      dialogic::train_logreg(features, labels, 0.0, 200, 0.5, 2);
  LinearModel svm =
      dialogic::train_linear_svm(features, labels, 5.0, 200, 0.1, 2);

  CHECK(auc_of(features, labels, [&](auto x) { return logreg.score(x); }) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(auc_of(features, labels, [&](auto x) { return svm.score(x); }) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("depth-two boosting separates XOR where linear models cannot") {
  Mat features;
  std::vector<int> labels;
  imbalanced_xor(features, labels);

  LinearModel logreg =
      dialogic::train_logreg(features, labels, 0.0, 300, 0.5, 2);
  CHECK(auc_of(features, labels,
               [&](auto x) { return logreg.score(x); }) < 0.6);

  GbdtConfig config;
  config.n_trees = 20;
  config.max_depth = 2;
  config.shrinkage = 0.3;
  GbdtModel gbdt = dialogic::train_gbdt(features, labels, config, 0);
  CHECK(auc_of(features, labels, [&](auto x) { return gbdt.score(x); }) ==
        1.0);
}

TEST_CASE("a single stump picks the midpoint split with Newton leaves") {
  std::vector<Vec> rows;
  std::vector<int> labels;
  for (int x = 0; x < 10; ++x) {
    rows.push_back({static_cast<double>(x)});
    labels.push_back(x >= 5 ? 1 : 0);
  }
  Mat features = mat_from(rows);

  GbdtConfig config;
  config.n_trees = 1;
  config.max_depth = 1;
  config.shrinkage = 0.1;
  GbdtModel model = dialogic::train_gbdt(features, labels, config, 0);

  REQUIRE(model.trees.size() == 1);
  const std::vector<dialogic::TreeNode>& tree = model.trees[0];
  REQUIRE(tree[0].feature == 0);
  CHECK(tree[0].threshold == 4.5);
  // Residuals are +-0.5, hessians 0.25: leaf value sum_r/sum_h = +-2.
  CHECK(tree[tree[0].left].value == doctest::Approx(-2.0));
  CHECK(tree[tree[0].right].value == doctest::Approx(2.0));
  CHECK(model.score(Vec{2.0}) == doctest::Approx(-0.2));
  CHECK(model.score(Vec{7.0}) == doctest::Approx(0.2));
}

TEST_CASE("split gain ties keep the lowest feature index") {
  // Identical columns: both features give the same gain everywhere.
  std::vector<Vec> rows;
  std::vector<int> labels;
  for (int i = 0; i < 5; ++i) {
    rows.push_back({0.0, 0.0});
    labels.push_back(0);
    rows.push_back({1.0, 1.0});
    labels.push_back(1);
  }
  GbdtConfig config;
  config.n_trees = 1;
  config.max_depth = 1;
  GbdtModel model = dialogic::train_gbdt(mat_from(rows), labels, config, 0);
  CHECK(model.trees[0][0].feature == 0);
  CHECK(model.trees[0][0].threshold == 0.5);
}

TEST_CASE("training loss is non-increasing in the number of trees") {
  Mat features;
  std::vector<int> labels;
  imbalanced_xor(features, labels);

  GbdtConfig config;
  config.n_trees = 30;
  config.max_depth = 2;
  GbdtModel model = dialogic::train_gbdt(features, labels, config, 0);

  double previous = gbdt_train_loss(model, features, labels, 0);
  CHECK(previous == doctest::Approx(std::log(2.0)));  // f = 0 everywhere
  for (int k = 1; k <= 30; ++k) {
    double loss = gbdt_train_loss(model, features, labels, k);
    CHECK(loss <= previous + 1e-9);
    previous = loss;
  }
  CHECK(gbdt_train_loss(model, features, labels, 30) <
        gbdt_train_loss(model, features, labels, 1));
}

TEST_CASE("an empty ensemble scores zero") {
  GbdtModel model;
  CHECK(model.score(Vec{1.0, 2.0}) == 0.0);
}

TEST_CASE("trainers are deterministic; gbdt ignores its seed entirely") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  LinearModel a = dialogic::train_logreg(features, labels, 0.1, 50, 0.1, 5);
  LinearModel b = dialogic::train_logreg(features, labels, 0.1, 50, 0.1, 5);
  LinearModel c = dialogic::train_logreg(features, labels, 0.1, 50, 0.1, 6);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
  CHECK(a.weights != c.weights);

  GbdtConfig config;
  config.n_trees = 5;
  config.max_depth = 2;
  GbdtModel g1 = dialogic::train_gbdt(features, labels, config, 1);
  GbdtModel g2 = dialogic::train_gbdt(features, labels, config, 999);
  REQUIRE(g1.trees.size() == g2.trees.size());
  for (std::size_t t = 0; t < g1.trees.size(); ++t) {
    REQUIRE(g1.trees[t].size() == g2.trees[t].size());
    for (std::size_t n = 0; n < g1.trees[t].size(); ++n) {
      CHECK(g1.trees[t][n].feature == g2.trees[t][n].feature);
      CHECK(g1.trees[t][n].threshold == g2.trees[t][n].threshold);
      CHECK(g1.trees[t][n].value == g2.trees[t][n].value);
    }
  }
}

TEST_CASE("trainers reject degenerate and malformed inputs") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  std::vector<int> all_ones(labels.size(), 1);
  std::vector<int> bad_values = labels;
  bad_values[0] = 2;
  std::vector<int> short_labels(labels.begin(), labels.end() - 1);
  GbdtConfig config;

  CHECK_THROWS_AS(dialogic::train_logreg(features, all_ones, 0, 10, 0.1, 1),
                  dialogic::DegenerateLabels);
  CHECK_THROWS_AS(dialogic::train_linear_svm(features, all_ones, 1, 10, 0.1, 1),
                  dialogic::DegenerateLabels);
  CHECK_THROWS_AS(dialogic::train_gbdt(features, all_ones, config, 1),
                  dialogic::DegenerateLabels);

  CHECK_THROWS_AS(dialogic::train_logreg(features, bad_values, 0, 10, 0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::train_logreg(features, short_labels, 0, 10, 0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::train_logreg(Mat(), labels, 0, 10, 0.1, 1),
                  std::invalid_argument);

  CHECK_THROWS_AS(dialogic::train_logreg(features, labels, -1, 10, 0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::train_logreg(features, labels, 0, 0, 0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::train_logreg(features, labels, 0, 10, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::train_linear_svm(features, labels, -1, 10, 0.1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dialogic::train_linear_svm(features, labels, 1, 0, 0.1, 1),
                  std::invalid_argument);

  GbdtConfig bad = config;
  bad.n_trees = 0;
  CHECK_THROWS_AS(dialogic::train_gbdt(features, labels, bad, 1),
                  std::invalid_argument);
  bad = config;
  bad.max_depth = 0;
  CHECK_THROWS_AS(dialogic::train_gbdt(features, labels, bad, 1),
                  std::invalid_argument);
  bad = config;
  bad.shrinkage = 0.0;
  CHECK_THROWS_AS(dialogic::train_gbdt(features, labels, bad, 1),
                  std::invalid_argument);
}

TEST_CASE("baseline sets round-trip through their JSON file") {
  Mat features;
  std::vector<int> labels;
  one_dim_task(features, labels);

  BaselineSet set;
  set.logreg = dialogic::train_logreg(features, labels, 0.1, 30, 0.1, 1);
  set.svm = dialogic::train_linear_svm(features, labels, 5.0, 30, 0.1, 2);
  GbdtConfig config;
  config.n_trees = 4;
  config.max_depth = 2;
  set.gbdt = dialogic::train_gbdt(features, labels, config, 0);

  TempDir dir;
  const auto path = dir / "baselines.json";
  dialogic::save_baselines(set, path);
  BaselineSet loaded = dialogic::load_baselines(path);

  CHECK(loaded.logreg.weights == set.logreg.weights);
  CHECK(loaded.logreg.bias == set.logreg.bias);
  CHECK(loaded.svm.weights == set.svm.weights);
  CHECK(loaded.svm.bias == set.svm.bias);
  CHECK(loaded.gbdt.shrinkage == set.gbdt.shrinkage);
  REQUIRE(loaded.gbdt.trees.size() == set.gbdt.trees.size());
  Vec probe = {0.37};
  CHECK(loaded.gbdt.score(probe) == set.gbdt.score(probe));
  CHECK(loaded.logreg.score(probe) == set.logreg.score(probe));

  dialogic::save_baselines(loaded, dir / "again.json");
  CHECK(read_text(path) == read_text(dir / "again.json"));
}

TEST_CASE("baseline loader rejects foreign documents") {
  TempDir dir;
  CHECK_THROWS_AS(dialogic::load_baselines(dir / "none.json"), dialogic::Error);

  write_text(dir / "trash.json", "]");
  CHECK_THROWS_AS(dialogic::load_baselines(dir / "trash.json"),
                  dialogic::Error);

  write_text(dir / "v9.json", R"({"format_version": 9})");
  CHECK_THROWS_AS(dialogic::load_baselines(dir / "v9.json"), dialogic::Error);

  write_text(dir / "kind.json", R"({
    "format_version": 1,
    "logreg": {"kind": "svm", "weights": [1.0], "bias": 0.0},
    "svm": {"kind": "svm", "weights": [1.0], "bias": 0.0},
    "gbdt": {"kind": "gbdt", "shrinkage": 0.1, "trees": []}
  })");
  CHECK_THROWS_AS(dialogic::load_baselines(dir / "kind.json"), dialogic::Error);

  write_text(dir / "missing.json", R"({
    "format_version": 1,
    "logreg": {"kind": "logreg", "weights": [1.0], "bias": 0.0},
    "svm": {"kind": "svm", "weights": [1.0], "bias": 0.0}
  })");
  CHECK_THROWS_AS(dialogic::load_baselines(dir / "missing.json"),
                  dialogic::Error);
}
