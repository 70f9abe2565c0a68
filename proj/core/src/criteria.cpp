#include "sdf/criteria.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdf {

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
  std::size_t m = 0;
  switch (rule) {
    case Rule::kAll:
      m = n_features;
      break;
    case Rule::kSqrt: {
      // Integer floor(sqrt(p)) without trusting std::sqrt rounding.
      std::size_t root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
      while (root * root > n_features) --root;
      while ((root + 1) * (root + 1) <= n_features) ++root;
      m = root < 1 ? 1 : root;
      break;
    }
    case Rule::kFixed:
      m = count;
      break;
  }
  if (m < 1 || m > n_features) {
    throw std::invalid_argument("max_features resolves to " + std::to_string(m) + " for " +
                                std::to_string(n_features) + " features");
  }
  return m;
}

void SplitCriteria::validate() const {
  if (min_samples_split < 2) {
    throw std::invalid_argument("min_samples_split must be at least 2");
  }
  if (!std::isfinite(min_impurity_decrease) || min_impurity_decrease < 0.0) {
    throw std::invalid_argument("min_impurity_decrease must be finite and nonnegative");
  }
}

}  // namespace sdf
