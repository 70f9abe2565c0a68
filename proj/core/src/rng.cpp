#include "sdf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sdf {

namespace {
__extension__ using Wide = unsigned __int128;
}  // namespace

std::size_t Rng::uniform_index(std::size_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_index: bound must be positive");
  }
  // Lemire's multiply-shift with rejection of the biased low region.
  const auto range = static_cast<std::uint64_t>(bound);
  Wide product = static_cast<Wide>(engine_()) * range;
  auto low = static_cast<std::uint64_t>(product);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      product = static_cast<Wide>(engine_()) * range;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::size_t>(product >> 64);
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string Rng::state() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void Rng::set_state(const std::string& state) {
  std::istringstream in(state);
  std::mt19937_64 engine;
  in >> engine;
  if (in.fail()) {
    throw std::invalid_argument("Rng::set_state: malformed engine state");
  }
  engine_ = engine;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void shuffle(std::span<std::size_t> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_index(i);
    std::swap(values[i - 1], values[j]);
  }
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    Rng& rng) {
  if (count > population) {
    throw std::invalid_argument("sample_without_replacement: count exceeds population");
  }
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` slots end up a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(population - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::size_t> bootstrap_indices(std::size_t population, std::size_t count, Rng& rng) {
  std::vector<std::size_t> out(count);
  for (auto& v : out) {
    v = rng.uniform_index(population);
  }
  return out;
}

}  // namespace sdf
