#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "sdf/criteria.hpp"
#include "sdf/dataset.hpp"
#include "sdf/rng.hpp"
#include "sdf/tree.hpp"

namespace sdf {

/// A decision tree that keeps growing as batches arrive.
///
/// The first batch is fit exactly like DecisionTree::fit. Each later batch is
/// routed to the existing leaves; every leaf that receives samples becomes a
/// "false root" and is grown by the usual CART recursion using only the
/// samples of this batch that landed there. Existing splits are never moved
/// or removed, so every update refines the previous partition of feature
/// space. Class counts are accumulated along the full routing path, so
/// predictions reflect every batch seen while split search only sees the
/// current one.
///
/// The class count is fixed at construction; a later batch with an unseen
/// class index outside [0, n_classes) is rejected.
class StreamTree {
 public:
  /// Throws std::invalid_argument for an empty batch or a label >= n_classes.
  static StreamTree init(const Dataset& first_batch, ClassIndex n_classes,
                         const SplitCriteria& criteria, std::uint64_t seed);
  static StreamTree init(const Dataset& data, std::span<const std::size_t> indices,
                         ClassIndex n_classes, const SplitCriteria& criteria, std::uint64_t seed);

  /// Extends the tree with `batch`. On error (empty batch, feature count
  /// mismatch, label >= n_classes) throws std::invalid_argument and leaves the
  /// tree untouched.
  void update(const Dataset& batch);
  void update(const Dataset& data, std::span<const std::size_t> indices);

  ClassIndex predict(std::span<const double> x) const { return tree_.predict(x); }
  NodeId apply(std::span<const double> x) const { return tree_.apply(x); }

  const DecisionTree& tree() const { return tree_; }
  ClassIndex n_classes() const { return tree_.n_classes(); }
  std::size_t n_features() const { return tree_.n_features(); }
  std::size_t batches_seen() const { return batches_seen_; }
  const Rng& rng() const { return rng_; }

  /// Reassembles a tree mid-stream (snapshot loading).
  static StreamTree from_parts(DecisionTree tree, Rng rng, std::size_t batches_seen);

  friend bool operator==(const StreamTree&, const StreamTree&) = default;

 private:
  StreamTree(DecisionTree tree, Rng rng, std::size_t batches_seen)
      : tree_(std::move(tree)), rng_(std::move(rng)), batches_seen_(batches_seen) {}

  DecisionTree tree_;
  Rng rng_;
  std::size_t batches_seen_ = 0;
};

}  // namespace sdf
