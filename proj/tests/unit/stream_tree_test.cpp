#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sdf/data_io.hpp"
#include "sdf/stream_tree.hpp"

namespace sdf {
namespace {

std::uint64_t total(const DecisionTree& tree, NodeId id) {
  const auto c = tree.class_counts(id);
  return std::accumulate(c.begin(), c.end(), std::uint64_t{0});
}

std::vector<std::uint64_t> counts_of(const DecisionTree& tree, NodeId id) {
  const auto c = tree.class_counts(id);
  return {c.begin(), c.end()};
}

TEST(StreamTreeInit, AbsentClassesHaveZeroCounts) {
  const Dataset batch({1, 2, 3, 4}, 1, {0, 0, 1, 1}, 2);
  const auto t = StreamTree::init(batch, 3, SplitCriteria{}, 0);
  EXPECT_EQ(t.n_classes(), 3);
  for (NodeId id = 0; id < static_cast<NodeId>(t.tree().node_count()); ++id) {
    ASSERT_EQ(t.tree().class_counts(id).size(), 3u);
    EXPECT_EQ(t.tree().class_counts(id)[2], 0u);
  }
  EXPECT_EQ(t.batches_seen(), 1u);
}

TEST(StreamTreeInit, MatchesBatchFit) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = testing::random_dataset(rng, 120, 4, 3, 12);
    SplitCriteria c;
    c.max_features = MaxFeatures::sqrt();
    const std::uint64_t seed = rng.next();
    EXPECT_EQ(StreamTree::init(d, 3, c, seed).tree(), DecisionTree::fit(d, c, seed));
  }
}

TEST(StreamTreeInit, RejectsBadInput) {
  const Dataset empty({}, 1, {}, 2);
  EXPECT_THROW(StreamTree::init(empty, 2, SplitCriteria{}, 0), std::invalid_argument);
  const Dataset three({1, 2, 3}, 1, {0, 1, 2}, 3);
  EXPECT_THROW(StreamTree::init(three, 2, SplitCriteria{}, 0), std::invalid_argument);
}

TEST(StreamTreeUpdate, PureLeafSplitsOnNewBatch) {
  const Dataset first({1, 2, 3}, 1, {0, 0, 0}, 2);
  auto t = StreamTree::init(first, 2, SplitCriteria{}, 0);
  ASSERT_EQ(t.tree().node_count(), 1u);

  t.update(Dataset({1, 2, 3, 4}, 1, {0, 0, 1, 1}, 2));
  ASSERT_EQ(t.tree().node_count(), 3u);
  EXPECT_EQ(t.tree().node(0).feature, 0);
  EXPECT_EQ(t.tree().node(0).threshold, 2.5);
  EXPECT_EQ(counts_of(t.tree(), 0), (std::vector<std::uint64_t>{5, 2}));
  EXPECT_EQ(t.predict(std::vector<double>{2.0}), 0);
  EXPECT_EQ(t.predict(std::vector<double>{3.0}), 1);
  EXPECT_EQ(t.batches_seen(), 2u);
}

TEST(StreamTreeUpdate, SmallBatchOnlyUpdatesCounts) {
  const Dataset first({1, 2, 3, 4}, 1, {0, 0, 1, 1}, 2);
  SplitCriteria c;
  c.min_samples_split = 3;
  auto t = StreamTree::init(first, 2, c, 0);
  const auto before = t.tree().nodes();
  const std::vector<Node> nodes_before(before.begin(), before.end());

  // Two samples per leaf, both below min_samples_split.
  t.update(Dataset({0.5, 1.0, 3.5, 9.0}, 1, {1, 1, 1, 0}, 2));
  EXPECT_TRUE(std::equal(nodes_before.begin(), nodes_before.end(), t.tree().nodes().begin(),
                         t.tree().nodes().end()));
  EXPECT_EQ(counts_of(t.tree(), 1), (std::vector<std::uint64_t>{2, 2}));
  EXPECT_EQ(counts_of(t.tree(), 2), (std::vector<std::uint64_t>{1, 3}));
  EXPECT_EQ(total(t.tree(), 0), 8u);
}

TEST(StreamTreeUpdate, HistoricalCountsDriveUntouchedLeaves) {
  SplitCriteria c;
  c.min_samples_split = 10;
  auto t = StreamTree::init(Dataset({1, 2, 3, 4, 5}, 1, {0, 0, 0, 0, 0}, 3), 3, c, 0);
  EXPECT_EQ(counts_of(t.tree(), 0), (std::vector<std::uint64_t>{5, 0, 0}));
  EXPECT_EQ(t.predict(std::vector<double>{0}), 0);

  auto flip = StreamTree::init(Dataset({1, 2, 3}, 1, {0, 0, 0}, 3), 3, c, 0);
  flip.update(Dataset({1, 1, 1, 1}, 1, {1, 1, 1, 1}, 3));
  EXPECT_EQ(counts_of(flip.tree(), 0), (std::vector<std::uint64_t>{3, 4, 0}));
  EXPECT_EQ(flip.predict(std::vector<double>{0}), 1);
}

TEST(StreamTreeUpdate, ErrorsLeaveTreeUnchanged) {
  Rng rng(4);
  auto t = StreamTree::init(testing::random_dataset(rng, 50, 2, 3), 3, SplitCriteria{}, 9);
  const StreamTree copy = t;
  EXPECT_THROW(t.update(Dataset({}, 2, {}, 3)), std::invalid_argument);
  EXPECT_THROW(t.update(Dataset({1, 2, 3}, 3, {0}, 3)), std::invalid_argument);
  // A bad label late in the batch must not leave earlier samples counted.
  EXPECT_THROW(t.update(Dataset({1, 2, 3, 4, 5, 6}, 2, {0, 1, 3}, 4)), std::invalid_argument);
  EXPECT_EQ(t, copy);
}

TEST(StreamTreeUpdate, ReplayIsDeterministic) {
  Rng rng(31);
  std::vector<Dataset> batches;
  for (int b = 0; b < 6; ++b) batches.push_back(testing::random_dataset(rng, 40, 5, 4, 20));
  SplitCriteria c;
  c.max_features = MaxFeatures::sqrt();
  auto run = [&] {
    auto t = StreamTree::init(batches[0], 4, c, 1234);
    for (std::size_t b = 1; b < batches.size(); ++b) t.update(batches[b]);
    return t;
  };
  EXPECT_EQ(run(), run());
}

// History is only ever extended: splits persist, regions refine, counts
// are conserved, and dimensions stay fixed.
TEST(StreamTreeProperties, UpdatesPreserveHistory) {
  Rng rng(2024);
  for (int seq = 0; seq < 40; ++seq) {
    const std::size_t p = 1 + rng.uniform_index(4);
    const ClassIndex k = static_cast<ClassIndex>(2 + rng.uniform_index(3));
    SplitCriteria c;
    c.max_features = seq % 2 == 0 ? MaxFeatures::sqrt() : MaxFeatures::all();
    auto t = StreamTree::init(testing::random_dataset(rng, 25, p, k, 10), k, c, rng.next());

    // Per node: class counts it held when it became internal (zero if it was
    // created and split within the same update).
    std::vector<std::vector<std::uint64_t>> held_at_split;
    auto record_new_splits = [&](const DecisionTree& before, const DecisionTree& after) {
      held_at_split.resize(after.node_count(), std::vector<std::uint64_t>(k, 0));
      for (NodeId id = 0; id < static_cast<NodeId>(before.node_count()); ++id) {
        if (before.node(id).is_leaf() && !after.node(id).is_leaf()) {
          held_at_split[id] = counts_of(before, id);
        }
      }
    };
    held_at_split.assign(t.tree().node_count(), std::vector<std::uint64_t>(k, 0));

    for (int u = 0; u < 5; ++u) {
      const std::size_t n = 1 + rng.uniform_index(40);
      const Dataset batch = testing::random_dataset(rng, n, p, k, 10);
      const DecisionTree before = t.tree();
      t.update(batch);
      const DecisionTree& after = t.tree();

      ASSERT_EQ(after.n_features(), p);
      ASSERT_EQ(after.n_classes(), k);
      ASSERT_EQ(t.batches_seen(), static_cast<std::size_t>(u + 2));
      ASSERT_EQ(total(after, 0), total(before, 0) + n);

      for (NodeId id = 0; id < static_cast<NodeId>(before.node_count()); ++id) {
        if (!before.node(id).is_leaf()) {
          const Node& a = before.node(id);
          const Node& b = after.node(id);
          ASSERT_EQ(a.feature, b.feature);
          ASSERT_EQ(a.threshold, b.threshold);
          ASSERT_EQ(a.left, b.left);
          ASSERT_EQ(a.right, b.right);
        }
      }
      const auto old_splits = testing::internal_splits(before);
      const auto new_splits = testing::internal_splits(after);
      ASSERT_TRUE(std::includes(new_splits.begin(), new_splits.end(), old_splits.begin(),
                                old_splits.end()));

      const auto old_regions = testing::leaf_regions(before);
      for (const auto& [id, region] : testing::leaf_regions(after)) {
        const auto parents = std::count_if(old_regions.begin(), old_regions.end(),
                                           [&](const auto& kv) { return kv.second.contains(region); });
        ASSERT_EQ(parents, 1);
      }

      record_new_splits(before, after);
      for (NodeId id = 0; id < static_cast<NodeId>(after.node_count()); ++id) {
        const Node& node = after.node(id);
        if (node.is_leaf()) continue;
        for (ClassIndex cls = 0; cls < k; ++cls) {
          const auto c_parent = after.class_counts(id)[cls];
          const auto c_children =
              after.class_counts(node.left)[cls] + after.class_counts(node.right)[cls];
          ASSERT_EQ(c_parent - c_children, held_at_split[id][cls]);
        }
      }
    }
  }
}

TEST(StreamTreeFromParts, RoundTrips) {
  Rng rng(6);
  auto t = StreamTree::init(testing::random_dataset(rng, 30, 2, 2), 2, SplitCriteria{}, 3);
  t.update(testing::random_dataset(rng, 30, 2, 2));
  EXPECT_EQ(StreamTree::from_parts(t.tree(), t.rng(), t.batches_seen()), t);
}

}  // namespace
}  // namespace sdf
