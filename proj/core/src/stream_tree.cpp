#include "sdf/stream_tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tree_grower.hpp"

namespace sdf {

namespace {

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.n_samples());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void check_labels(const Dataset& data, std::span<const std::size_t> indices,
                  ClassIndex n_classes) {
  for (const std::size_t i : indices) {
    if (i >= data.n_samples()) {
      throw std::out_of_range("StreamTree: sample index out of range");
    }
    if (data.label(i) >= n_classes) {
      throw std::invalid_argument("StreamTree: label " + std::to_string(data.label(i)) +
                                  " is not below the declared class count " +
                                  std::to_string(n_classes));
    }
  }
}

}  // namespace

StreamTree StreamTree::init(const Dataset& first_batch, ClassIndex n_classes,
                            const SplitCriteria& criteria, std::uint64_t seed) {
  return init(first_batch, all_rows(first_batch), n_classes, criteria, seed);
}

StreamTree StreamTree::init(const Dataset& data, std::span<const std::size_t> indices,
                            ClassIndex n_classes, const SplitCriteria& criteria,
                            std::uint64_t seed) {
  if (indices.empty()) {
    throw std::invalid_argument("StreamTree::init: empty first batch");
  }
  if (n_classes < 2) {
    throw std::invalid_argument("StreamTree::init: n_classes must be at least 2");
  }
  check_labels(data, indices, n_classes);
  Rng rng(seed);
  DecisionTree tree = TreeGrower::fit(data, indices, n_classes, criteria, seed, rng);
  return StreamTree(std::move(tree), std::move(rng), 1);
}

StreamTree StreamTree::from_parts(DecisionTree tree, Rng rng, std::size_t batches_seen) {
  return StreamTree(std::move(tree), std::move(rng), batches_seen);
}

void StreamTree::update(const Dataset& batch) { update(batch, all_rows(batch)); }

void StreamTree::update(const Dataset& data, std::span<const std::size_t> indices) {
  if (indices.empty()) {
    throw std::invalid_argument("StreamTree::update: empty batch");
  }
  if (data.n_features() != tree_.n_features()) {
    throw std::invalid_argument("StreamTree::update: batch has " +
                                std::to_string(data.n_features()) + " features, tree expects " +
                                std::to_string(tree_.n_features()));
  }
  check_labels(data, indices, tree_.n_classes());

  // Route every sample, counting it on each node it passes through, and
  // remember the leaf ("false root") it landed in.
  std::vector<std::pair<NodeId, std::size_t>> routed;
  routed.reserve(indices.size());
  for (const std::size_t i : indices) {
    const auto label = static_cast<std::size_t>(data.label(i));
    const auto x = data.row(i);
    NodeId id = 0;
    while (true) {
      ++tree_.mutable_counts(id)[label];
      const Node& n = tree_.node(id);
      if (n.is_leaf()) break;
      id = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    routed.emplace_back(id, i);
  }

  // False roots are grown in ascending node id order, each with its samples
  // in batch order, so the RNG stream is consumed deterministically.
  std::stable_sort(routed.begin(), routed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  TreeGrower grower(tree_, data, rng_);
  for (std::size_t begin = 0; begin < routed.size();) {
    const NodeId leaf = routed[begin].first;
    std::vector<std::size_t> samples;
    std::size_t end = begin;
    for (; end < routed.size() && routed[end].first == leaf; ++end) {
      samples.push_back(routed[end].second);
    }
    grower.grow(leaf, std::move(samples));
    begin = end;
  }
  ++batches_seen_;
}

}  // namespace sdf
