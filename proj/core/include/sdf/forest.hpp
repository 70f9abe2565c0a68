#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdf/criteria.hpp"
#include "sdf/dataset.hpp"
#include "sdf/rng.hpp"
#include "sdf/stream_tree.hpp"
#include "sdf/tree.hpp"

namespace sdf {

/// Default forest criteria: floor(sqrt(p)) candidate features per split.
inline SplitCriteria sqrt_feature_criteria() {
  SplitCriteria criteria;
  criteria.max_features = MaxFeatures::sqrt();
  return criteria;
}

struct ForestOptions {
  std::size_t n_trees = 100;
  /// Trees swapped out per replacement event (stream forests only).
  std::size_t replace_count = 1;
  SplitCriteria criteria = sqrt_feature_criteria();
  /// Resample each tree's training rows with replacement. Disabling it is
  /// mostly useful for tests that compare a one-tree forest to a plain tree.
  bool bootstrap = true;

  /// Throws std::invalid_argument for n_trees == 0, replace_count > n_trees or
  /// invalid criteria.
  void validate() const;

  friend bool operator==(const ForestOptions&, const ForestOptions&) = default;
};

/// Deterministic model-size metric used in place of process memory sampling.
struct ModelSize {
  std::size_t node_count = 0;
  std::size_t bytes_per_node = 0;
  std::size_t estimated_bytes = 0;
};

/// Fixed per-node storage cost: one Node plus one count per class.
std::size_t bytes_per_node(ClassIndex n_classes);

ModelSize model_size(const DecisionTree& tree);

/// Plurality over per-class vote counts; ties go to the lowest class index.
ClassIndex plurality(std::span<const std::size_t> votes);

/// What happened in the replacement phase of the most recent update.
struct ReplacementEvent {
  std::size_t batch = 0;  // b after the update
  double draw = 0.0;      // u, compared against 1 / b
  bool fired = false;
  std::vector<double> tree_accuracy;  // per tree, on the raw batch; empty unless fired
  std::vector<std::size_t> replaced;  // tree positions, worst first
};

/// Ensemble of StreamTrees updated batch by batch.
///
/// Every update bootstraps the batch independently for each tree and extends
/// it. After the update, with probability 1/b (b = batches seen, counting the
/// first), the `replace_count` trees with the lowest accuracy on the raw
/// batch are replaced by fresh trees grown on a bootstrap of that batch only.
/// Lower tree positions are replaced first on accuracy ties.
///
/// Each tree owns its RNGs, so per-tree work can run on several threads and
/// still give results identical to a serial run.
class StreamForest {
 public:
  static StreamForest init(const Dataset& first_batch, ClassIndex n_classes,
                           const ForestOptions& options, std::uint64_t seed,
                           std::size_t threads = 1);

  /// Throws std::invalid_argument on an empty batch, a feature count mismatch
  /// or a label >= n_classes; the forest is unchanged in that case.
  void update(const Dataset& batch);

  ClassIndex predict(std::span<const double> x) const;
  std::vector<std::size_t> votes(std::span<const double> x) const;
  std::vector<ClassIndex> predict_batch(MatrixView rows) const;

  std::size_t n_trees() const { return members_.size(); }
  const StreamTree& tree(std::size_t i) const { return members_.at(i).tree; }
  /// Creation serial of the tree at position i; replacements get new ids.
  std::uint64_t tree_id(std::size_t i) const { return members_.at(i).id; }
  const Rng& bootstrap_rng(std::size_t i) const { return members_.at(i).bootstrap_rng; }
  std::size_t batches_seen() const { return batches_seen_; }
  std::size_t replacements() const { return replacements_; }
  const ForestOptions& options() const { return options_; }
  std::uint64_t master_seed() const { return master_seed_; }
  ClassIndex n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }
  const Rng& replacement_rng() const { return replacement_rng_; }
  std::uint64_t next_tree_id() const { return next_tree_id_; }
  const std::optional<ReplacementEvent>& last_replacement() const { return last_replacement_; }

  void set_threads(std::size_t threads) { threads_ = threads == 0 ? 1 : threads; }
  std::size_t threads() const { return threads_; }

  /// Test hook: use `u` instead of drawing from the replacement RNG.
  void force_replacement_draw(std::optional<double> u) { forced_draw_ = u; }
  /// Test hook: swap in an arbitrary tree at position i (same K and p).
  void set_tree(std::size_t i, StreamTree tree);

  friend bool operator==(const StreamForest& a, const StreamForest& b);

 private:
  friend struct SnapshotAccess;

  struct Member {
    StreamTree tree;
    Rng bootstrap_rng;
    std::uint64_t id = 0;

    friend bool operator==(const Member&, const Member&) = default;
  };

  StreamForest() = default;
  Member make_member(const Dataset& batch, std::uint64_t id) const;
  void check_batch(const Dataset& batch) const;

  std::vector<Member> members_;
  ForestOptions options_;
  ClassIndex n_classes_ = 2;
  std::size_t n_features_ = 1;
  std::uint64_t master_seed_ = 0;
  std::size_t batches_seen_ = 0;
  std::size_t replacements_ = 0;
  std::uint64_t next_tree_id_ = 0;
  Rng replacement_rng_;
  std::size_t threads_ = 1;
  std::optional<double> forced_draw_;
  std::optional<ReplacementEvent> last_replacement_;
};

ModelSize model_size(const StreamForest& forest);

/// Classic bagged forest, refit from scratch on whatever data it is given.
class BatchForest {
 public:
  static BatchForest fit(const Dataset& data, const ForestOptions& options, std::uint64_t seed,
                         std::size_t threads = 1);
  /// Fits on the rows named by `indices`; bootstrap samples have |indices| rows.
  static BatchForest fit(const Dataset& data, std::span<const std::size_t> indices,
                         const ForestOptions& options, std::uint64_t seed,
                         std::size_t threads = 1);

  ClassIndex predict(std::span<const double> x) const;
  std::vector<std::size_t> votes(std::span<const double> x) const;
  std::vector<ClassIndex> predict_batch(MatrixView rows, std::size_t threads = 1) const;

  std::size_t n_trees() const { return trees_.size(); }
  const DecisionTree& tree(std::size_t i) const { return trees_.at(i); }
  ClassIndex n_classes() const { return n_classes_; }

  friend bool operator==(const BatchForest&, const BatchForest&) = default;

 private:
  std::vector<DecisionTree> trees_;
  ClassIndex n_classes_ = 2;
};

ModelSize model_size(const BatchForest& forest);

}  // namespace sdf
