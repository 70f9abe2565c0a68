#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sdf/forest.hpp"

namespace sdf {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Self-describing JSON document for a StreamForest.
///
/// Holds the hyperparameters, master seed, batch counter, every RNG state and
/// per-tree node arrays (kind, feature, threshold, left, right, depth,
/// class_counts). Thresholds are written with round-trip precision, so a
/// loaded forest predicts bit-identically and continues updating exactly as
/// the original would.
std::string to_snapshot(const StreamForest& forest);
StreamForest stream_forest_from_snapshot(std::string_view text);

void save_snapshot(const StreamForest& forest, const std::filesystem::path& path);
StreamForest load_snapshot(const std::filesystem::path& path);

}  // namespace sdf
