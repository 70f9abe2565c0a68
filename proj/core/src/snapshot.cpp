#include "sdf/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sdf {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "sdf-stream-forest";
constexpr int kVersion = 1;

const char* rule_name(MaxFeatures::Rule rule) {
  switch (rule) {
    case MaxFeatures::Rule::kAll:
      return "all";
    case MaxFeatures::Rule::kSqrt:
      return "sqrt";
    case MaxFeatures::Rule::kFixed:
      return "fixed";
  }
  return "all";
}

MaxFeatures::Rule rule_from(const std::string& name) {
  if (name == "all") return MaxFeatures::Rule::kAll;
  if (name == "sqrt") return MaxFeatures::Rule::kSqrt;
  if (name == "fixed") return MaxFeatures::Rule::kFixed;
  throw SnapshotError("snapshot: unknown max_features rule '" + name + "'");
}

json criteria_json(const SplitCriteria& c) {
  json j;
  j["min_samples_split"] = c.min_samples_split;
  j["max_features"] = {{"rule", rule_name(c.max_features.rule)}, {"count", c.max_features.count}};
  j["min_impurity_decrease"] = c.min_impurity_decrease;
  j["max_depth"] = c.max_depth ? json(*c.max_depth) : json(nullptr);
  return j;
}

SplitCriteria criteria_from(const json& j) {
  SplitCriteria c;
  c.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  c.max_features.rule = rule_from(j.at("max_features").at("rule").get<std::string>());
  c.max_features.count = j.at("max_features").at("count").get<std::size_t>();
  c.min_impurity_decrease = j.at("min_impurity_decrease").get<double>();
  if (!j.at("max_depth").is_null()) c.max_depth = j.at("max_depth").get<std::size_t>();
  return c;
}

json tree_json(const DecisionTree& tree) {
  json kind = json::array();
  json feature = json::array();
  json threshold = json::array();
  json left = json::array();
  json right = json::array();
  json depth = json::array();
  json counts = json::array();
  for (std::size_t id = 0; id < tree.node_count(); ++id) {
    const Node& n = tree.node(static_cast<NodeId>(id));
    kind.push_back(n.is_leaf() ? "leaf" : "internal");
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    depth.push_back(n.depth);
    const auto c = tree.class_counts(static_cast<NodeId>(id));
    counts.push_back(std::vector<std::uint64_t>(c.begin(), c.end()));
  }
  return {{"kind", kind},   {"feature", feature}, {"threshold", threshold},
          {"left", left},   {"right", right},     {"depth", depth},
          {"class_counts", counts}};
}

DecisionTree tree_from(const json& j, ClassIndex n_classes, std::size_t n_features,
                       const SplitCriteria& criteria, std::uint64_t seed) {
  const auto& kind = j.at("kind");
  const std::size_t n = kind.size();
  for (const char* key : {"feature", "threshold", "left", "right", "depth", "class_counts"}) {
    if (j.at(key).size() != n) {
      throw SnapshotError(std::string("snapshot: node array '") + key + "' has the wrong length");
    }
  }
  std::vector<Node> nodes(n);
  std::vector<std::uint64_t> counts;
  counts.reserve(n * static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < n; ++i) {
    Node& node = nodes[i];
    const auto k = kind[i].get<std::string>();
    node.feature = j["feature"][i].get<std::int32_t>();
    node.threshold = j["threshold"][i].get<double>();
    node.left = j["left"][i].get<NodeId>();
    node.right = j["right"][i].get<NodeId>();
    node.depth = j["depth"][i].get<std::uint32_t>();
    if ((k == "leaf") != node.is_leaf()) {
      throw SnapshotError("snapshot: node " + std::to_string(i) + " kind disagrees with feature");
    }
    const auto c = j["class_counts"][i].get<std::vector<std::uint64_t>>();
    if (c.size() != static_cast<std::size_t>(n_classes)) {
      throw SnapshotError("snapshot: node " + std::to_string(i) + " has " +
                          std::to_string(c.size()) + " class counts");
    }
    counts.insert(counts.end(), c.begin(), c.end());
  }
  return DecisionTree::from_parts(std::move(nodes), std::move(counts), n_classes, n_features,
                                  criteria, seed);
}

Rng rng_from(const json& j) {
  Rng rng;
  rng.set_state(j.get<std::string>());
  return rng;
}

}  // namespace

struct SnapshotAccess {
  static json dump(const StreamForest& f) {
    json trees = json::array();
    for (const auto& m : f.members_) {
      trees.push_back({{"id", m.id},
                       {"seed", m.tree.tree().seed()},
                       {"batches_seen", m.tree.batches_seen()},
                       {"rng", m.tree.rng().state()},
                       {"bootstrap_rng", m.bootstrap_rng.state()},
                       {"nodes", tree_json(m.tree.tree())}});
    }
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["n_classes"] = f.n_classes_;
    doc["n_features"] = f.n_features_;
    doc["options"] = {{"n_trees", f.options_.n_trees},
                      {"replace_count", f.options_.replace_count},
                      {"bootstrap", f.options_.bootstrap},
                      {"criteria", criteria_json(f.options_.criteria)}};
    doc["master_seed"] = f.master_seed_;
    doc["batches_seen"] = f.batches_seen_;
    doc["replacements"] = f.replacements_;
    doc["next_tree_id"] = f.next_tree_id_;
    doc["replacement_rng"] = f.replacement_rng_.state();
    doc["bytes_per_node"] = bytes_per_node(f.n_classes_);
    doc["trees"] = std::move(trees);
    return doc;
  }

  static StreamForest load(const json& doc) {
    if (doc.at("format").get<std::string>() != kFormat) {
      throw SnapshotError("snapshot: not a stream forest document");
    }
    if (doc.at("version").get<int>() != kVersion) {
      throw SnapshotError("snapshot: unsupported version");
    }
    StreamForest f;
    f.n_classes_ = doc.at("n_classes").get<ClassIndex>();
    f.n_features_ = doc.at("n_features").get<std::size_t>();
    const auto& opts = doc.at("options");
    f.options_.n_trees = opts.at("n_trees").get<std::size_t>();
    f.options_.replace_count = opts.at("replace_count").get<std::size_t>();
    f.options_.bootstrap = opts.at("bootstrap").get<bool>();
    f.options_.criteria = criteria_from(opts.at("criteria"));
    f.options_.validate();
    f.master_seed_ = doc.at("master_seed").get<std::uint64_t>();
    f.batches_seen_ = doc.at("batches_seen").get<std::size_t>();
    f.replacements_ = doc.at("replacements").get<std::size_t>();
    f.next_tree_id_ = doc.at("next_tree_id").get<std::uint64_t>();
    f.replacement_rng_ = rng_from(doc.at("replacement_rng"));
    const auto& trees = doc.at("trees");
    if (trees.size() != f.options_.n_trees) {
      throw SnapshotError("snapshot: tree list length does not match n_trees");
    }
    for (const auto& t : trees) {
      DecisionTree tree = tree_from(t.at("nodes"), f.n_classes_, f.n_features_,
                                    f.options_.criteria, t.at("seed").get<std::uint64_t>());
      f.members_.push_back(StreamForest::Member{
          StreamTree::from_parts(std::move(tree), rng_from(t.at("rng")),
                                 t.at("batches_seen").get<std::size_t>()),
          rng_from(t.at("bootstrap_rng")), t.at("id").get<std::uint64_t>()});
    }
    return f;
  }
};

std::string to_snapshot(const StreamForest& forest) { return SnapshotAccess::dump(forest).dump(); }

StreamForest stream_forest_from_snapshot(std::string_view text) {
  try {
    return SnapshotAccess::load(json::parse(text));
  } catch (const json::exception& e) {
    throw SnapshotError(std::string("snapshot: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(std::string("snapshot: ") + e.what());
  }
}

void save_snapshot(const StreamForest& forest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw SnapshotError("snapshot: cannot write " + path.string());
  out << to_snapshot(forest) << '\n';
}

StreamForest load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SnapshotError("snapshot: cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return stream_forest_from_snapshot(buffer.str());
}

}  // namespace sdf
