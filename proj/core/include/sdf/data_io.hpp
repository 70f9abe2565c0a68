#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sdf/dataset.hpp"

namespace sdf {

/// Raised for malformed CSV input; carries the 1-based file row and the
/// 0-based column of the offending cell (0 when not cell-specific).
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& message, std::size_t row, std::size_t column);

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct CsvOptions {
  bool has_header = true;
  /// Column index or header name; the last column when unset.
  std::optional<std::variant<std::size_t, std::string>> label_column;
  /// When set, labels must be integers in [0, K) and are used as-is.
  /// Otherwise distinct labels are sorted (numerically if all are integers,
  /// else lexicographically) and numbered from 0.
  std::optional<ClassIndex> declared_classes;
};

struct LoadedCsv {
  Dataset data;
  /// label_names[k] is the original label text of class k.
  std::vector<std::string> label_names;
  std::vector<std::string> feature_names;
};

LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features with round-trip precision and the label as the last column.
void write_csv(const Dataset& data, const std::filesystem::path& path, bool header = true);

/// JSON sidecar mapping class index -> original label text.
void write_label_map(const std::vector<std::string>& label_names,
                     const std::filesystem::path& path);

/// Seeded permutation of 0..n-1 cut into contiguous fixed-size batches.
/// The final batch keeps the remainder.
class BatchPlan {
 public:
  BatchPlan(std::size_t n, std::size_t batch_size, std::uint64_t seed);

  std::size_t batch_size() const { return batch_size_; }
  std::size_t num_batches() const { return (ordering_.size() + batch_size_ - 1) / batch_size_; }
  std::span<const std::size_t> ordering() const { return ordering_; }
  std::span<const std::size_t> batch(std::size_t b) const;
  /// The first `count` batches, concatenated.
  std::span<const std::size_t> prefix(std::size_t batches) const;

 private:
  std::vector<std::size_t> ordering_;
  std::size_t batch_size_;
};

inline BatchPlan make_batches(std::size_t n, std::size_t batch_size, std::uint64_t seed) {
  return BatchPlan(n, batch_size, seed);
}

/// Seeded shuffle followed by round-robin assignment to k folds.
class FoldPlan {
 public:
  FoldPlan(std::size_t n, std::size_t k, std::uint64_t seed);

  std::size_t k() const { return k_; }
  std::span<const std::size_t> assignment() const { return assignment_; }
  /// Held-out rows of fold f, ascending.
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  /// All other rows, ascending.
  std::vector<std::size_t> train_indices(std::size_t fold) const;

 private:
  std::size_t k_;
  std::vector<std::size_t> assignment_;
};

inline FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  return FoldPlan(n, k, seed);
}

enum class SyntheticKind { kBlobs, kXor, kConcentric };

SyntheticKind parse_synthetic_kind(const std::string& name);
std::string to_string(SyntheticKind kind);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kBlobs;
  std::size_t n = 1000;
  /// Blobs: cluster sigma is 1 + noise. Xor/concentric: Gaussian jitter added
  /// to the coordinates with this standard deviation.
  double noise = 0.0;
  std::uint64_t seed = 0;
  /// Blobs only; xor and concentric are always two-class.
  ClassIndex n_classes = 2;
  /// Blobs only; at least max(2, n_classes). Extra columns are pure noise.
  std::size_t n_features = 0;
};

/// Synthetic benchmark data with class counts balanced to within one.
///
/// blobs: class k is an isotropic Gaussian around 10/sqrt(2) * e_k, so every
/// pair of centres is 10 apart (10 sigma at noise 0). xor: 2-D checkerboard
/// on [-1, 1]^2, class = quadrant parity. concentric: class 0 uniform in the
/// disc of radius 1, class 1 in the ring 2 <= r <= 3.
Dataset gen_synthetic(const SyntheticSpec& spec);

}  // namespace sdf
