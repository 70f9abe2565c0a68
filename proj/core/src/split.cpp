#include "sdf/split.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "split_search.hpp"

namespace sdf {

namespace {

__extension__ using Wide = unsigned __int128;

// Sum of squared counts over children, as the fraction num / den with
// num = sq_left * n_right + sq_right * n_left and den = n_left * n_right.
// Larger is better: weighted child Gini is n - num / den.
struct Score {
  Wide num = 0;
  Wide den = 1;
};

bool better(const Score& a, const Score& b) { return a.num * b.den > b.num * a.den; }

std::uint64_t sum_of_squares(std::span<const std::uint64_t> counts) {
  std::uint64_t s = 0;
  for (const auto c : counts) s += c * c;
  return s;
}

}  // namespace

double gini_impurity(std::span<const std::uint64_t> class_counts) {
  std::uint64_t total = 0;
  for (const auto c : class_counts) total += c;
  if (total == 0) {
    throw std::domain_error("gini_impurity: undefined for an empty count vector");
  }
  const double n = static_cast<double>(total);
  double sum = 0.0;
  for (const auto c : class_counts) {
    const double p = static_cast<double>(c) / n;
    sum += p * p;
  }
  return 1.0 - sum;
}

std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> indices,
                                std::span<const std::size_t> candidate_features) {
  detail::SplitSearcher searcher;
  return searcher.find(data, indices, candidate_features);
}

namespace detail {

std::optional<Split> SplitSearcher::find(const Dataset& data, std::span<const std::size_t> indices,
                                         std::span<const std::size_t> candidate_features) {
  if (indices.empty()) {
    throw std::invalid_argument("best_split: empty index set");
  }
  if (candidate_features.empty()) {
    throw std::invalid_argument("best_split: no candidate features");
  }
  features_.assign(candidate_features.begin(), candidate_features.end());
  std::sort(features_.begin(), features_.end());
  if (features_.back() >= data.n_features()) {
    throw std::invalid_argument("best_split: candidate feature out of range");
  }

  const auto k = static_cast<std::size_t>(data.n_classes());
  total_.assign(k, 0);
  for (const std::size_t i : indices) ++total_[static_cast<std::size_t>(data.label(i))];
  const std::uint64_t n = indices.size();
  const std::uint64_t parent_sq = sum_of_squares(total_);
  // A pure node cannot improve.
  if (parent_sq == n * n) return std::nullopt;

  // Positive decrease requires score > parent_sq / n.
  Score best{static_cast<Wide>(parent_sq), static_cast<Wide>(n)};
  std::optional<Split> result;

  column_.resize(indices.size());
  for (const std::size_t f : features_) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      column_[j] = {data.value(indices[j], f), data.label(indices[j])};
    }
    std::sort(column_.begin(), column_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (column_.front().first == column_.back().first) continue;

    left_.assign(k, 0);
    right_ = total_;
    std::uint64_t sq_left = 0;
    std::uint64_t sq_right = parent_sq;
    for (std::size_t j = 0; j + 1 < column_.size(); ++j) {
      const auto c = static_cast<std::size_t>(column_[j].second);
      sq_left += 2 * left_[c] + 1;
      ++left_[c];
      sq_right -= 2 * right_[c] - 1;
      --right_[c];
      if (column_[j].first == column_[j + 1].first) continue;

      const std::uint64_t n_left = j + 1;
      const std::uint64_t n_right = n - n_left;
      const Score score{static_cast<Wide>(sq_left) * n_right + static_cast<Wide>(sq_right) * n_left,
                        static_cast<Wide>(n_left) * n_right};
      if (!better(score, best)) continue;
      best = score;

      const double lo = column_[j].first;
      const double hi = column_[j + 1].first;
      double threshold = std::midpoint(lo, hi);
      // Adjacent doubles: the midpoint may round up onto `hi`.
      if (threshold >= hi) threshold = lo;
      const double weighted_child =
          static_cast<double>(sq_left) / static_cast<double>(n_left) +
          static_cast<double>(sq_right) / static_cast<double>(n_right);
      const double decrease = (weighted_child - static_cast<double>(parent_sq) /
                                                    static_cast<double>(n)) /
                              static_cast<double>(n);
      result = Split{f, threshold, decrease};
    }
  }
  return result;
}

}  // namespace detail

}  // namespace sdf
