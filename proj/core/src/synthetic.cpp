#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sdf/data_io.hpp"
#include "sdf/rng.hpp"

namespace sdf {

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "blobs") return SyntheticKind::kBlobs;
  if (name == "xor") return SyntheticKind::kXor;
  if (name == "concentric") return SyntheticKind::kConcentric;
  throw std::invalid_argument("unknown synthetic kind '" + name + "'");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kBlobs:
      return "blobs";
    case SyntheticKind::kXor:
      return "xor";
    case SyntheticKind::kConcentric:
      return "concentric";
  }
  return "blobs";
}

Dataset gen_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 4) throw std::invalid_argument("gen_synthetic: n must be at least 4");
  if (!std::isfinite(spec.noise) || spec.noise < 0.0) {
    throw std::invalid_argument("gen_synthetic: noise must be finite and nonnegative");
  }
  Rng rng(spec.seed);
  std::size_t p = 2;
  ClassIndex k = 2;
  if (spec.kind == SyntheticKind::kBlobs) {
    k = spec.n_classes;
    if (k < 2) throw std::invalid_argument("gen_synthetic: blobs need at least 2 classes");
    const std::size_t min_p = std::max<std::size_t>(2, static_cast<std::size_t>(k));
    p = spec.n_features == 0 ? min_p : spec.n_features;
    if (p < min_p) {
      throw std::invalid_argument("gen_synthetic: blobs need at least " + std::to_string(min_p) +
                                  " features");
    }
  }

  std::vector<double> features(spec.n * p);
  std::vector<ClassIndex> labels(spec.n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < spec.n; ++i) {
    double* x = features.data() + i * p;
    switch (spec.kind) {
      case SyntheticKind::kBlobs: {
        const auto label = static_cast<ClassIndex>(i % static_cast<std::size_t>(k));
        const double sigma = 1.0 + spec.noise;
        for (std::size_t f = 0; f < p; ++f) x[f] = sigma * rng.normal();
        x[static_cast<std::size_t>(label)] += 10.0 / std::numbers::sqrt2;
        labels[i] = label;
        break;
      }
      case SyntheticKind::kXor: {
        // Quadrants in the order (+,+), (-,+), (-,-), (+,-); parity is the class.
        const std::size_t q = i % 4;
        const double sx = (q == 0 || q == 3) ? 1.0 : -1.0;
        const double sy = (q == 0 || q == 1) ? 1.0 : -1.0;
        x[0] = sx * (1.0 - rng.uniform01()) + spec.noise * rng.normal();
        x[1] = sy * (1.0 - rng.uniform01()) + spec.noise * rng.normal();
        labels[i] = static_cast<ClassIndex>(q % 2);
        break;
      }
      case SyntheticKind::kConcentric: {
        const auto label = static_cast<ClassIndex>(i % 2);
        const double u = rng.uniform01();
        const double r = label == 0 ? std::sqrt(u) : std::sqrt(4.0 + 5.0 * u);
        const double theta = two_pi * rng.uniform01();
        x[0] = r * std::cos(theta) + spec.noise * rng.normal();
        x[1] = r * std::sin(theta) + spec.noise * rng.normal();
        labels[i] = label;
        break;
      }
    }
  }

  // Rows were generated in class-cyclic order; shuffle so any prefix is a
  // random sample.
  std::vector<std::size_t> order(spec.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);
  Dataset cyclic(std::move(features), p, std::move(labels), k);
  return cyclic.subset(order);
}

}  // namespace sdf
