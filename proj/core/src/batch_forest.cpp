#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "sdf/forest.hpp"

namespace sdf {

BatchForest BatchForest::fit(const Dataset& data, const ForestOptions& options,
                             std::uint64_t seed, std::size_t threads) {
  std::vector<std::size_t> all(data.n_samples());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return fit(data, all, options, seed, threads);
}

BatchForest BatchForest::fit(const Dataset& data, std::span<const std::size_t> indices,
                             const ForestOptions& options, std::uint64_t seed,
                             std::size_t threads) {
  options.validate();
  if (indices.empty()) {
    throw std::invalid_argument("BatchForest: empty training set");
  }
  std::vector<std::optional<DecisionTree>> built(options.n_trees);
  detail::parallel_for(options.n_trees, threads, [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(seed, 2 * t);
    if (!options.bootstrap) {
      built[t] = DecisionTree::fit(data, indices, options.criteria, tree_seed);
      return;
    }
    Rng rng(derive_seed(seed, 2 * t + 1));
    std::vector<std::size_t> rows(indices.size());
    for (auto& r : rows) r = indices[rng.uniform_index(indices.size())];
    built[t] = DecisionTree::fit(data, rows, options.criteria, tree_seed);
  });
  BatchForest forest;
  forest.n_classes_ = data.n_classes();
  forest.trees_.reserve(built.size());
  for (auto& t : built) forest.trees_.push_back(std::move(*t));
  return forest;
}

std::vector<std::size_t> BatchForest::votes(std::span<const double> x) const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes_), 0);
  for (const DecisionTree& t : trees_) ++counts[static_cast<std::size_t>(t.predict(x))];
  return counts;
}

ClassIndex BatchForest::predict(std::span<const double> x) const { return plurality(votes(x)); }

std::vector<ClassIndex> BatchForest::predict_batch(MatrixView rows, std::size_t threads) const {
  std::vector<ClassIndex> out(rows.rows());
  detail::parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = predict(rows.row(i)); });
  return out;
}

ModelSize model_size(const BatchForest& forest) {
  ModelSize size;
  size.bytes_per_node = bytes_per_node(forest.n_classes());
  for (std::size_t i = 0; i < forest.n_trees(); ++i) size.node_count += forest.tree(i).node_count();
  size.estimated_bytes = size.node_count * size.bytes_per_node;
  return size;
}

}  // namespace sdf
