#include "sdf/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "tree_grower.hpp"

namespace sdf {

ClassIndex majority_class(std::span<const std::uint64_t> counts) {
  const auto it = std::max_element(counts.begin(), counts.end());
  return static_cast<ClassIndex>(it - counts.begin());
}

DecisionTree::DecisionTree(ClassIndex n_classes, std::size_t n_features, SplitCriteria criteria,
                           std::uint64_t seed)
    : n_classes_(n_classes), n_features_(n_features), criteria_(criteria), seed_(seed) {}

DecisionTree DecisionTree::fit(const Dataset& data, const SplitCriteria& criteria,
                               std::uint64_t seed) {
  std::vector<std::size_t> all(data.n_samples());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return fit(data, all, criteria, seed);
}

DecisionTree DecisionTree::fit(const Dataset& data, std::span<const std::size_t> indices,
                               const SplitCriteria& criteria, std::uint64_t seed) {
  Rng rng(seed);
  return TreeGrower::fit(data, indices, data.n_classes(), criteria, seed, rng);
}

DecisionTree DecisionTree::from_parts(std::vector<Node> nodes,
                                      std::vector<std::uint64_t> class_counts,
                                      ClassIndex n_classes, std::size_t n_features,
                                      SplitCriteria criteria, std::uint64_t seed) {
  if (n_classes < 2 || n_features < 1) {
    throw std::invalid_argument("DecisionTree: invalid class or feature count");
  }
  if (nodes.empty()) {
    throw std::invalid_argument("DecisionTree: a tree needs at least a root");
  }
  if (class_counts.size() != nodes.size() * static_cast<std::size_t>(n_classes)) {
    throw std::invalid_argument("DecisionTree: class count array has the wrong size");
  }
  criteria.validate();
  const auto size = static_cast<NodeId>(nodes.size());
  std::vector<int> parents(nodes.size(), 0);
  for (NodeId id = 0; id < size; ++id) {
    const Node& n = nodes[static_cast<std::size_t>(id)];
    if (n.is_leaf()) {
      if (n.left != kNoNode || n.right != kNoNode) {
        throw std::invalid_argument("DecisionTree: leaf " + std::to_string(id) + " has children");
      }
      continue;
    }
    if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= n_features) {
      throw std::invalid_argument("DecisionTree: node " + std::to_string(id) +
                                  " splits on an unknown feature");
    }
    for (const NodeId child : {n.left, n.right}) {
      if (child <= id || child >= size) {
        throw std::invalid_argument("DecisionTree: node " + std::to_string(id) +
                                    " has an invalid child reference");
      }
      ++parents[static_cast<std::size_t>(child)];
    }
  }
  for (std::size_t id = 1; id < parents.size(); ++id) {
    if (parents[id] != 1) {
      throw std::invalid_argument("DecisionTree: node " + std::to_string(id) +
                                  " is not reachable exactly once");
    }
  }
  DecisionTree tree(n_classes, n_features, criteria, seed);
  tree.nodes_ = std::move(nodes);
  tree.counts_ = std::move(class_counts);
  return tree;
}

NodeId DecisionTree::add_node(std::uint32_t depth) {
  const auto id = static_cast<NodeId>(nodes_.size());
  Node node;
  node.depth = depth;
  nodes_.push_back(node);
  counts_.resize(counts_.size() + static_cast<std::size_t>(n_classes_), 0);
  return id;
}

void DecisionTree::check_input(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument("DecisionTree: input has " + std::to_string(x.size()) +
                                " features, expected " + std::to_string(n_features_));
  }
}

NodeId DecisionTree::apply(std::span<const double> x) const {
  check_input(x);
  NodeId id = 0;
  while (true) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return id;
    id = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
}

ClassIndex DecisionTree::predict(std::span<const double> x) const {
  return majority_class(class_counts(apply(x)));
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::depth() const {
  std::uint32_t d = 0;
  for (const Node& n : nodes_) d = std::max(d, n.depth);
  return d;
}

DecisionTree TreeGrower::fit(const Dataset& data, std::span<const std::size_t> indices,
                             ClassIndex n_classes, const SplitCriteria& criteria,
                             std::uint64_t seed, Rng& rng) {
  if (indices.empty()) {
    throw std::invalid_argument("fit: empty training set");
  }
  criteria.validate();
  criteria.max_features.resolve(data.n_features());
  for (const std::size_t i : indices) {
    if (i >= data.n_samples()) {
      throw std::out_of_range("fit: sample index out of range");
    }
    if (data.label(i) >= n_classes) {
      throw std::invalid_argument("fit: label " + std::to_string(data.label(i)) +
                                  " is not below the declared class count " +
                                  std::to_string(n_classes));
    }
  }
  DecisionTree tree(n_classes, data.n_features(), criteria, seed);
  const NodeId root = tree.add_node(0);
  auto counts = tree.mutable_counts(root);
  for (const std::size_t i : indices) ++counts[static_cast<std::size_t>(data.label(i))];
  TreeGrower grower(tree, data, rng);
  grower.grow(root, std::vector<std::size_t>(indices.begin(), indices.end()));
  return tree;
}

void TreeGrower::grow(NodeId leaf, std::vector<std::size_t> indices) {
  const SplitCriteria& criteria = tree_.criteria_;
  const std::size_t p = data_.n_features();
  const std::size_t m = criteria.max_features.resolve(p);
  const auto k = static_cast<std::size_t>(tree_.n_classes_);
  std::vector<std::size_t> all_features(p);
  for (std::size_t f = 0; f < p; ++f) all_features[f] = f;
  std::vector<std::uint64_t> local(k);

  stack_.clear();
  stack_.emplace_back(leaf, std::move(indices));
  while (!stack_.empty()) {
    auto [id, samples] = std::move(stack_.back());
    stack_.pop_back();

    const std::uint32_t depth = tree_.nodes_[static_cast<std::size_t>(id)].depth;
    if (samples.size() < criteria.min_samples_split) continue;
    if (criteria.max_depth && depth >= *criteria.max_depth) continue;

    std::fill(local.begin(), local.end(), 0);
    for (const std::size_t i : samples) ++local[static_cast<std::size_t>(data_.label(i))];
    if (std::count_if(local.begin(), local.end(), [](auto c) { return c > 0; }) < 2) continue;

    const auto candidates = m == p ? all_features : sample_without_replacement(p, m, rng_);
    const auto split = searcher_.find(data_, samples, candidates);
    if (!split || split->impurity_decrease < criteria.min_impurity_decrease) continue;

    const NodeId left = tree_.add_node(depth + 1);
    const NodeId right = tree_.add_node(depth + 1);
    Node& node = tree_.nodes_[static_cast<std::size_t>(id)];
    node.feature = static_cast<std::int32_t>(split->feature);
    node.threshold = split->threshold;
    node.left = left;
    node.right = right;

    std::vector<std::size_t> left_samples;
    std::vector<std::size_t> right_samples;
    left_samples.reserve(samples.size());
    right_samples.reserve(samples.size());
    auto left_counts = tree_.mutable_counts(left);
    auto right_counts = tree_.mutable_counts(right);
    for (const std::size_t i : samples) {
      const auto c = static_cast<std::size_t>(data_.label(i));
      if (data_.value(i, split->feature) <= split->threshold) {
        left_samples.push_back(i);
        ++left_counts[c];
      } else {
        right_samples.push_back(i);
        ++right_counts[c];
      }
    }
    stack_.emplace_back(right, std::move(right_samples));
    stack_.emplace_back(left, std::move(left_samples));
  }
}

}  // namespace sdf
