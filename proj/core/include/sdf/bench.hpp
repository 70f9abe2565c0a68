#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdf/dataset.hpp"
#include "sdf/forest.hpp"

namespace sdf {

enum class Algorithm { kSdt, kSdf, kDt, kDf };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);
/// Comma-separated list such as "sdt,sdf,dt,df".
std::vector<Algorithm> parse_algorithms(std::string_view list);

struct ExperimentConfig {
  std::string dataset_id = "dataset";
  std::vector<Algorithm> algorithms{Algorithm::kSdt, Algorithm::kSdf, Algorithm::kDt,
                                    Algorithm::kDf};
  std::size_t batch_size = 100;
  std::size_t n_trees = 100;
  std::size_t replace_count = 1;
  /// Randomized training orders for the held-out-test protocol.
  std::size_t repetitions = 5;
  /// Folds for the cross-validation protocol.
  std::size_t folds = 5;
  std::uint64_t master_seed = 0;
  /// Worker threads for per-tree forest work. Never changes results.
  std::size_t threads = 1;
  /// Stop each run after this many batches; all batches when unset.
  std::optional<std::size_t> max_batches;

  /// Throws std::invalid_argument when no algorithm is selected, a list
  /// repeats an algorithm, or a size/count is zero.
  void validate() const;
  /// Compact JSON echo of every field that affects results.
  std::string to_json() const;
};

/// One measurement: an algorithm's state after `sample_size` streamed samples.
struct BenchRecord {
  Algorithm algorithm = Algorithm::kSdt;
  std::string dataset;
  std::size_t run = 0;    // repetition or fold
  std::size_t batch = 0;  // 0-based batch index within the run
  std::size_t sample_size = 0;
  double accuracy = 0.0;
  double train_seconds = 0.0;  // cumulative
  std::size_t node_count = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct ExperimentHooks {
  /// Called with each run's stream forest after its last batch.
  std::function<void(std::size_t run, const StreamForest&)> on_stream_forest;
};

/// Held-out-test protocol: each repetition streams `train` in a freshly
/// shuffled batch order; streaming models are updated per batch, batch
/// models are refit on all samples so far, and everything is scored on
/// `test`. Training time is accumulated per algorithm (refits included).
std::vector<BenchRecord> run_stream_experiment(const ExperimentConfig& config,
                                               const Dataset& train, const Dataset& test,
                                               const ExperimentHooks& hooks = {});

/// k-fold protocol: each fold's training part is streamed as above and the
/// fold itself is the test set. Records carry the fold index as `run`.
std::vector<BenchRecord> run_cv_experiment(const ExperimentConfig& config, const Dataset& data,
                                           const ExperimentHooks& hooks = {});

/// Relative accuracy difference (mean(sdf) - mean(df)) / mean(df); positive
/// favours the stream forest. Throws std::invalid_argument for empty or
/// unequal-length inputs and std::domain_error when mean(df) == 0.
double effect_size(std::span<const double> sdf_accuracy, std::span<const double> df_accuracy);

/// True when the series both dips to <= -threshold and reaches >= +threshold.
bool substantial_shift(std::span<const double> effects, double threshold = 0.01);

struct EffectPoint {
  std::string dataset;
  std::size_t batch = 0;
  std::size_t sample_size = 0;  // smallest over the averaged runs
  double sdf_mean = 0.0;
  double df_mean = 0.0;
  double effect = 0.0;
};

/// Per dataset and batch, averages SDF and DF accuracy over runs and
/// computes the effect size. Batches missing either algorithm are skipped.
std::vector<EffectPoint> effect_series(std::span<const BenchRecord> records);

struct ResultsHeader {
  std::uint64_t seed = 0;
  std::string library_version;
  std::size_t bytes_per_node = 0;
  std::string config;
};

struct ResultsFile {
  ResultsHeader header;
  std::vector<BenchRecord> records;
};

std::string library_version();

/// CSV rows under `# key: value` metadata lines. Doubles are written with
/// round-trip precision so load_results is an exact inverse.
void emit_results(std::span<const BenchRecord> records, const ResultsHeader& header,
                  std::ostream& out);
void emit_results(std::span<const BenchRecord> records, const ResultsHeader& header,
                  const std::filesystem::path& path);
ResultsFile load_results(std::istream& in);
ResultsFile load_results(const std::filesystem::path& path);

}  // namespace sdf
