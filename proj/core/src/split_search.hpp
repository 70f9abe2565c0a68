#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdf/dataset.hpp"
#include "sdf/split.hpp"

namespace sdf::detail {

/// Reusable scratch buffers for best_split; one per growing thread.
class SplitSearcher {
 public:
  std::optional<Split> find(const Dataset& data, std::span<const std::size_t> indices,
                            std::span<const std::size_t> candidate_features);

 private:
  std::vector<std::pair<double, ClassIndex>> column_;
  std::vector<std::uint64_t> left_;
  std::vector<std::uint64_t> right_;
  std::vector<std::uint64_t> total_;
  std::vector<std::size_t> features_;
};

}  // namespace sdf::detail
