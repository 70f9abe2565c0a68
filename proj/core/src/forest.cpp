#include "sdf/forest.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace sdf {

namespace {

// Seed streams derived from the master seed. Tree slot `id` uses 2*id for its
// growth RNG and 2*id + 1 for its bootstrap RNG.
constexpr std::uint64_t kReplacementStream = 0xFFFF'FFFF'FFFF'FFFFULL;

std::uint64_t tree_seed(std::uint64_t master, std::uint64_t id) {
  return derive_seed(master, 2 * id);
}
std::uint64_t bootstrap_seed(std::uint64_t master, std::uint64_t id) {
  return derive_seed(master, 2 * id + 1);
}

std::vector<std::size_t> rows_for(std::size_t n, bool bootstrap, Rng& rng) {
  if (bootstrap) return bootstrap_indices(n, n, rng);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

double accuracy_on(const StreamTree& tree, const Dataset& batch) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < batch.n_samples(); ++i) {
    if (tree.predict(batch.row(i)) == batch.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batch.n_samples());
}

}  // namespace

void ForestOptions::validate() const {
  if (n_trees == 0) {
    throw std::invalid_argument("forest: n_trees must be positive");
  }
  if (replace_count > n_trees) {
    throw std::invalid_argument("forest: replace_count (" + std::to_string(replace_count) +
                                ") exceeds n_trees (" + std::to_string(n_trees) + ")");
  }
  criteria.validate();
}

std::size_t bytes_per_node(ClassIndex n_classes) {
  return sizeof(Node) + static_cast<std::size_t>(n_classes) * sizeof(std::uint64_t);
}

ModelSize model_size(const DecisionTree& tree) {
  const std::size_t per_node = bytes_per_node(tree.n_classes());
  return {tree.node_count(), per_node, tree.node_count() * per_node};
}

ClassIndex plurality(std::span<const std::size_t> votes) {
  if (votes.empty()) {
    throw std::invalid_argument("plurality: no classes");
  }
  return static_cast<ClassIndex>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

StreamForest::Member StreamForest::make_member(const Dataset& batch, std::uint64_t id) const {
  Rng bootstrap(bootstrap_seed(master_seed_, id));
  const auto rows = rows_for(batch.n_samples(), options_.bootstrap, bootstrap);
  return Member{StreamTree::init(batch, rows, n_classes_, options_.criteria,
                                 tree_seed(master_seed_, id)),
                std::move(bootstrap), id};
}

void StreamForest::check_batch(const Dataset& batch) const {
  if (batch.empty()) {
    throw std::invalid_argument("StreamForest: empty batch");
  }
  if (batch.n_features() != n_features_) {
    throw std::invalid_argument("StreamForest: batch has " + std::to_string(batch.n_features()) +
                                " features, forest expects " + std::to_string(n_features_));
  }
  for (const ClassIndex y : batch.labels()) {
    if (y >= n_classes_) {
      throw std::invalid_argument("StreamForest: label " + std::to_string(y) +
                                  " is not below the declared class count " +
                                  std::to_string(n_classes_));
    }
  }
}

StreamForest StreamForest::init(const Dataset& first_batch, ClassIndex n_classes,
                                const ForestOptions& options, std::uint64_t seed,
                                std::size_t threads) {
  options.validate();
  if (n_classes < 2) {
    throw std::invalid_argument("StreamForest: n_classes must be at least 2");
  }
  options.criteria.max_features.resolve(first_batch.n_features());

  StreamForest forest;
  forest.options_ = options;
  forest.n_classes_ = n_classes;
  forest.n_features_ = first_batch.n_features();
  forest.master_seed_ = seed;
  forest.replacement_rng_ = Rng(derive_seed(seed, kReplacementStream));
  forest.set_threads(threads);
  forest.check_batch(first_batch);

  std::vector<std::optional<Member>> built(options.n_trees);
  detail::parallel_for(options.n_trees, forest.threads_, [&](std::size_t i) {
    built[i] = forest.make_member(first_batch, i);
  });
  forest.members_.reserve(options.n_trees);
  for (auto& m : built) forest.members_.push_back(std::move(*m));
  forest.next_tree_id_ = options.n_trees;
  forest.batches_seen_ = 1;
  return forest;
}

void StreamForest::update(const Dataset& batch) {
  check_batch(batch);

  detail::parallel_for(members_.size(), threads_, [&](std::size_t i) {
    Member& m = members_[i];
    const auto rows = rows_for(batch.n_samples(), options_.bootstrap, m.bootstrap_rng);
    m.tree.update(batch, rows);
  });
  ++batches_seen_;

  // Replacement phase: a serial barrier after every tree has been updated.
  ReplacementEvent event;
  event.batch = batches_seen_;
  event.draw = forced_draw_ ? *forced_draw_ : replacement_rng_.uniform01();
  event.fired = batches_seen_ > 1 && options_.replace_count > 0 &&
                event.draw < 1.0 / static_cast<double>(batches_seen_);
  if (event.fired) {
    event.tree_accuracy.resize(members_.size());
    detail::parallel_for(members_.size(), threads_, [&](std::size_t i) {
      event.tree_accuracy[i] = accuracy_on(members_[i].tree, batch);
    });
    std::vector<std::size_t> order(members_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return event.tree_accuracy[a] < event.tree_accuracy[b];
    });
    event.replaced.assign(order.begin(),
                          order.begin() + static_cast<std::ptrdiff_t>(options_.replace_count));

    std::vector<std::optional<Member>> fresh(event.replaced.size());
    const std::uint64_t first_id = next_tree_id_;
    detail::parallel_for(fresh.size(), threads_, [&](std::size_t j) {
      fresh[j] = make_member(batch, first_id + j);
    });
    for (std::size_t j = 0; j < fresh.size(); ++j) {
      members_[event.replaced[j]] = std::move(*fresh[j]);
    }
    next_tree_id_ += fresh.size();
    replacements_ += fresh.size();
  }
  last_replacement_ = std::move(event);
}

std::vector<std::size_t> StreamForest::votes(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument("StreamForest: input has " + std::to_string(x.size()) +
                                " features, expected " + std::to_string(n_features_));
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes_), 0);
  for (const Member& m : members_) ++counts[static_cast<std::size_t>(m.tree.predict(x))];
  return counts;
}

ClassIndex StreamForest::predict(std::span<const double> x) const { return plurality(votes(x)); }

std::vector<ClassIndex> StreamForest::predict_batch(MatrixView rows) const {
  std::vector<ClassIndex> out(rows.rows());
  detail::parallel_for(out.size(), threads_,
                       [&](std::size_t i) { out[i] = predict(rows.row(i)); });
  return out;
}

void StreamForest::set_tree(std::size_t i, StreamTree tree) {
  if (tree.n_classes() != n_classes_ || tree.n_features() != n_features_) {
    throw std::invalid_argument("StreamForest::set_tree: tree shape does not match the forest");
  }
  members_.at(i).tree = std::move(tree);
}

bool operator==(const StreamForest& a, const StreamForest& b) {
  return a.members_ == b.members_ && a.options_ == b.options_ && a.n_classes_ == b.n_classes_ &&
         a.n_features_ == b.n_features_ && a.master_seed_ == b.master_seed_ &&
         a.batches_seen_ == b.batches_seen_ && a.replacements_ == b.replacements_ &&
         a.next_tree_id_ == b.next_tree_id_ && a.replacement_rng_ == b.replacement_rng_;
}

ModelSize model_size(const StreamForest& forest) {
  ModelSize size;
  size.bytes_per_node = bytes_per_node(forest.n_classes());
  for (std::size_t i = 0; i < forest.n_trees(); ++i) {
    size.node_count += forest.tree(i).tree().node_count();
  }
  size.estimated_bytes = size.node_count * size.bytes_per_node;
  return size;
}

}  // namespace sdf
