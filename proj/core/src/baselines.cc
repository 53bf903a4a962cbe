// core/src/baselines.cc

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

#include "dialogic/baselines.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dialogic/error.h"
#include "dialogic/rng.h"

namespace dialogic {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_training_inputs(const Mat& features, const std::vector<int>& labels) {
  if (features.rows < 1 || features.cols < 1) {
    throw std::invalid_argument("feature matrix must be non-empty");
  }
  if (static_cast<std::size_t>(features.rows) != labels.size()) {
    throw std::invalid_argument("feature row count disagrees with labels");
  }
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    (y == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) {
    throw DegenerateLabels("training labels must contain both classes");
  }
}

LinearModel init_linear(int dim, std::uint64_t seed) {
  Rng rng(seed);
  LinearModel model;
  model.weights.resize(dim);
  for (double& w : model.weights) w = rng.uniform(-0.01, 0.01);
  model.bias = rng.uniform(-0.01, 0.01);
  return model;
}

// Grows tree nodes in `nodes`, returns the new node's index. Residuals are
// y - p; leaves take the Newton step sum(r) / sum(p(1-p)).
int build_tree_node(const Mat& features, const std::vector<double>& residual,
                    const std::vector<double>& hessian,
                    std::vector<int>& indices, int depth, int max_depth,
                    std::vector<TreeNode>& nodes) {
  double sum_r = 0.0, sum_h = 0.0;
  for (int idx : indices) {
    sum_r += residual[idx];
    sum_h += hessian[idx];
  }
  auto make_leaf = [&]() {
    TreeNode leaf;
    leaf.value = sum_r / std::max(sum_h, 1e-12);
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size()) - 1;
  };
  if (depth >= max_depth || indices.size() < 2) return make_leaf();

  double n_total = static_cast<double>(indices.size());
  double parent_gain = sum_r * sum_r / n_total;
  double best_gain = parent_gain;
  int best_feature = -1;
  double best_threshold = 0.0;

  std::vector<std::pair<double, int>> column(indices.size());
  for (int feature = 0; feature < features.cols; ++feature) {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      column[k] = {features.at(indices[k], feature), indices[k]};
    }
    std::sort(column.begin(), column.end());
    double left_r = 0.0;
    double left_n = 0.0;
    for (std::size_t k = 0; k + 1 < column.size(); ++k) {
      left_r += residual[column[k].second];
      left_n += 1.0;
      if (column[k].first == column[k + 1].first) continue;
      double threshold = 0.5 * (column[k].first + column[k + 1].first);
      double right_r = sum_r - left_r;
      double right_n = n_total - left_n;
      double gain = left_r * left_r / left_n + right_r * right_r / right_n;
      // Strict improvement, so ties keep the lowest feature and threshold.
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best_feature = feature;
        best_threshold = threshold;
      }
    }
  }
  if (best_feature < 0) return make_leaf();

  std::vector<int> left_idx, right_idx;
  for (int idx : indices) {
    (features.at(idx, best_feature) <= best_threshold ? left_idx : right_idx)
        .push_back(idx);
  }
  int node_index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  nodes[node_index].feature = best_feature;
  nodes[node_index].threshold = best_threshold;
  int left = build_tree_node(features, residual, hessian, left_idx, depth + 1,
                             max_depth, nodes);
  int right = build_tree_node(features, residual, hessian, right_idx,
                              depth + 1, max_depth, nodes);
  nodes[node_index].left = left;
  nodes[node_index].right = right;
  return node_index;
}

double tree_output(const std::vector<TreeNode>& nodes,
                   std::span<const double> x) {
  int at = 0;
  while (nodes[at].feature >= 0) {
    at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left
                                                     : nodes[at].right;
  }
  return nodes[at].value;
}

nlohmann::json linear_to_json(const LinearModel& m, const char* kind) {
  return {{"kind", kind}, {"weights", m.weights}, {"bias", m.bias}};
}

LinearModel linear_from_json(const nlohmann::json& j, const char* kind) {
  if (j.at("kind").get<std::string>() != kind) {
    throw Error(std::string("baseline entry is not of kind ") + kind);
  }
  LinearModel m;
  m.weights = j.at("weights").get<Vec>();
  m.bias = j.at("bias").get<double>();
  return m;
}

}  // namespace

Vec featurize_mean(const std::string& text, const EmbeddingTable& table) {
  std::vector<Vec> rows = embed_sentence(tokenize(text), table);
  Vec mean(table.dim, 0.0);
  for (const Vec& row : rows) {
    for (int j = 0; j < table.dim; ++j) mean[j] += row[j];
  }
  for (double& v : mean) v /= static_cast<double>(rows.size());
  return mean;
}

double LinearModel::score(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw std::invalid_argument("feature dim disagrees with linear model");
  }
  return dot(weights, x) + bias;
}

LinearModel train_logreg(const Mat& features, const std::vector<int>& labels,
                         double l2, int epochs, double learning_rate,
                         std::uint64_t seed) {
  check_training_inputs(features, labels);
  if (epochs < 1 || learning_rate <= 0.0 || l2 < 0.0) {
    throw std::invalid_argument("bad logreg hyperparameters");
  }
  LinearModel model = init_linear(features.cols, seed);
  double inv_n = 1.0 / static_cast<double>(features.rows);
  Vec grad_w(features.cols);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0.0;
    for (int i = 0; i < features.rows; ++i) {
      double err = sigmoid(model.score(features.row(i))) - labels[i];
      axpy(err * inv_n, features.row(i), grad_w);
      grad_b += err * inv_n;
    }
    for (int j = 0; j < features.cols; ++j) {
      model.weights[j] -=
          learning_rate * (grad_w[j] + l2 * model.weights[j]);
    }
    model.bias -= learning_rate * grad_b;
  }
  return model;
}

double logreg_probability(const LinearModel& model,
                          std::span<const double> x) {
  return sigmoid(std::clamp(model.score(x), -36.0, 36.0));
}

LinearModel train_linear_svm(const Mat& features,
                             const std::vector<int>& labels, double c,
                             int epochs, double learning_rate,
                             std::uint64_t seed) {
  check_training_inputs(features, labels);
  if (epochs < 1 || learning_rate <= 0.0 || c < 0.0) {
    throw std::invalid_argument("bad svm hyperparameters");
  }
  LinearModel model = init_linear(features.cols, seed);
  double inv_n = 1.0 / static_cast<double>(features.rows);
  Vec grad_w(features.cols);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    double step = learning_rate *
                  std::max(0.01, 1.0 - static_cast<double>(epoch) /
                                           static_cast<double>(epochs));
    // Subgradient of 0.5*||w||^2 + c * mean hinge.
    for (int j = 0; j < features.cols; ++j) grad_w[j] = model.weights[j];
    double grad_b = 0.0;
    for (int i = 0; i < features.rows; ++i) {
      double y = labels[i] == 1 ? 1.0 : -1.0;
      if (y * model.score(features.row(i)) < 1.0) {
        axpy(-c * y * inv_n, features.row(i), grad_w);
        grad_b -= c * y * inv_n;
      }
    }
    for (int j = 0; j < features.cols; ++j) {
      model.weights[j] -= step * grad_w[j];
    }
    model.bias -= step * grad_b;
  }
  return model;
}

double GbdtModel::score(std::span<const double> x) const {
  double f = 0.0;
  for (const std::vector<TreeNode>& tree : trees) {
    f += shrinkage * tree_output(tree, x);
  }
  return f;
}

GbdtModel train_gbdt(const Mat& features, const std::vector<int>& labels,
                     const GbdtConfig& config, std::uint64_t /*seed*/) {
  check_training_inputs(features, labels);
  if (config.n_trees < 1 || config.max_depth < 1 ||
      config.shrinkage <= 0.0) {
    throw std::invalid_argument("bad gbdt hyperparameters");
  }
  GbdtModel model;
  model.shrinkage = config.shrinkage;

  std::vector<double> f(features.rows, 0.0);
  std::vector<double> residual(features.rows), hessian(features.rows);
  std::vector<int> all_indices(features.rows);
  for (int i = 0; i < features.rows; ++i) all_indices[i] = i;

  for (int t = 0; t < config.n_trees; ++t) {
    for (int i = 0; i < features.rows; ++i) {
      double p = sigmoid(f[i]);
      residual[i] = labels[i] - p;
      hessian[i] = p * (1.0 - p);
    }
    std::vector<TreeNode> nodes;
    std::vector<int> indices = all_indices;
    build_tree_node(features, residual, hessian, indices, 0, config.max_depth,
                    nodes);
    for (int i = 0; i < features.rows; ++i) {
      f[i] += config.shrinkage * tree_output(nodes, features.row(i));
    }
    model.trees.push_back(std::move(nodes));
  }
  return model;
}

double gbdt_train_loss(const GbdtModel& model, const Mat& features,
                       const std::vector<int>& labels, int n_trees) {
  n_trees = std::min(n_trees, static_cast<int>(model.trees.size()));
  double loss = 0.0;
  for (int i = 0; i < features.rows; ++i) {
    double f = 0.0;
    for (int t = 0; t < n_trees; ++t) {
      f += model.shrinkage * tree_output(model.trees[t], features.row(i));
    }
    double z = labels[i] == 1 ? f : -f;
    loss += std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
  }
  return loss / static_cast<double>(features.rows);
}

void save_baselines(const BaselineSet& set,
                    const std::filesystem::path& path) {
  nlohmann::json trees = nlohmann::json::array();
  for (const std::vector<TreeNode>& tree : set.gbdt.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"value", n.value},
                       {"left", n.left},
                       {"right", n.right}});
    }
    trees.push_back(std::move(nodes));
  }
  nlohmann::json doc = {
      {"format_version", 1},
      {"logreg", linear_to_json(set.logreg, "logreg")},
      {"svm", linear_to_json(set.svm, "svm")},
      {"gbdt",
       {{"kind", "gbdt"}, {"shrinkage", set.gbdt.shrinkage},
        {"trees", std::move(trees)}}},
  };
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open baselines file for writing: " + path.string());
  }
  out << doc.dump(2) << '\n';
}

BaselineSet load_baselines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open baselines file: " + path.string());
  }
  BaselineSet set;
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.contains("format_version") ||
        doc["format_version"].get<int>() != 1) {
      throw Error("unknown baselines format_version in " + path.string());
    }
    set.logreg = linear_from_json(doc.at("logreg"), "logreg");
    set.svm = linear_from_json(doc.at("svm"), "svm");
    const nlohmann::json& g = doc.at("gbdt");
    if (g.at("kind").get<std::string>() != "gbdt") {
      throw Error("baseline entry is not of kind gbdt");
    }
    set.gbdt.shrinkage = g.at("shrinkage").get<double>();
    for (const nlohmann::json& tree : g.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const nlohmann::json& n : tree) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.value = n.at("value").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        nodes.push_back(node);
      }
      set.gbdt.trees.push_back(std::move(nodes));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed baselines file " + path.string() + ": " + e.what());
  }
  return set;
}

}  // namespace dialogic
