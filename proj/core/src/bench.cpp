#include "sdf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "sdf/data_io.hpp"
#include "sdf/stream_tree.hpp"
#include "sdf/tree.hpp"

namespace sdf {

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
double timed(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SplitCriteria tree_criteria() { return SplitCriteria{}; }

ForestOptions forest_options(const ExperimentConfig& config) {
  ForestOptions options;
  options.n_trees = config.n_trees;
  options.replace_count = config.replace_count;
  return options;
}

template <class Model>
double accuracy_of(const Model& model, const Dataset& test) {
  if (test.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.n_samples(); ++i) {
    if (model.predict(test.row(i)) == test.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.n_samples());
}

// Per-run model state. Streaming models persist across batches; batch
// models are rebuilt at every batch boundary.
struct RunState {
  std::optional<StreamTree> sdt;
  std::optional<StreamForest> sdf;
  std::optional<DecisionTree> dt;
  std::optional<BatchForest> df;
  std::map<Algorithm, double> seconds;
};

void run_once(const ExperimentConfig& config, const Dataset& train, const Dataset& test,
              std::size_t run, std::uint64_t run_seed, const ExperimentHooks& hooks,
              std::vector<BenchRecord>& out) {
  const BatchPlan plan(train.n_samples(), config.batch_size, derive_seed(run_seed, 0));
  // Streaming and batch variants share seeds, so both see the same randomness
  // on the first batch.
  const std::uint64_t tree_seed = derive_seed(run_seed, 1);
  const std::uint64_t forest_seed = derive_seed(run_seed, 2);
  const ForestOptions options = forest_options(config);
  const ClassIndex k = train.n_classes();

  std::size_t batches = plan.num_batches();
  if (config.max_batches) batches = std::min(batches, *config.max_batches);

  RunState state;
  for (std::size_t b = 0; b < batches; ++b) {
    const auto rows = plan.batch(b);
    const auto seen = plan.prefix(b + 1);
    const Dataset batch = train.subset(rows);
    for (const Algorithm algorithm : config.algorithms) {
      double& total = state.seconds[algorithm];
      std::size_t nodes = 0;
      double accuracy = 0.0;
      switch (algorithm) {
        case Algorithm::kSdt:
          total += timed([&] {
            if (!state.sdt) {
              state.sdt = StreamTree::init(batch, k, tree_criteria(), tree_seed);
            } else {
              state.sdt->update(batch);
            }
          });
          nodes = state.sdt->tree().node_count();
          accuracy = accuracy_of(*state.sdt, test);
          break;
        case Algorithm::kSdf:
          total += timed([&] {
            if (!state.sdf) {
              state.sdf = StreamForest::init(batch, k, options, forest_seed, config.threads);
            } else {
              state.sdf->update(batch);
            }
          });
          nodes = model_size(*state.sdf).node_count;
          accuracy = accuracy_of(*state.sdf, test);
          break;
        case Algorithm::kDt:
          total += timed([&] { state.dt = DecisionTree::fit(train, seen, tree_criteria(), tree_seed); });
          nodes = state.dt->node_count();
          accuracy = accuracy_of(*state.dt, test);
          break;
        case Algorithm::kDf:
          total += timed([&] {
            state.df = BatchForest::fit(train, seen, options, forest_seed, config.threads);
          });
          nodes = model_size(*state.df).node_count;
          accuracy = accuracy_of(*state.df, test);
          break;
      }
      out.push_back(BenchRecord{algorithm, config.dataset_id, run, b, seen.size(), accuracy, total,
                                nodes});
    }
  }
  if (hooks.on_stream_forest && state.sdf) hooks.on_stream_forest(run, *state.sdf);
}

void sort_records(std::vector<BenchRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.run, a.algorithm, a.sample_size) < std::tie(b.run, b.algorithm, b.sample_size);
  });
}

double mean(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kSdt:
      return "sdt";
    case Algorithm::kSdf:
      return "sdf";
    case Algorithm::kDt:
      return "dt";
    case Algorithm::kDf:
      return "df";
  }
  return "sdt";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "sdt") return Algorithm::kSdt;
  if (name == "sdf") return Algorithm::kSdf;
  if (name == "dt") return Algorithm::kDt;
  if (name == "df") return Algorithm::kDf;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> parse_algorithms(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const auto item = list.substr(start, comma - start);
    if (!item.empty()) out.push_back(parse_algorithm(item));
    start = comma + 1;
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms selected");
  auto sorted = algorithms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("experiment: an algorithm is listed twice");
  }
  if (batch_size == 0) throw std::invalid_argument("experiment: batch_size must be positive");
  if (repetitions == 0) throw std::invalid_argument("experiment: repetitions must be positive");
  if (folds < 2) throw std::invalid_argument("experiment: folds must be at least 2");
  if (max_batches && *max_batches == 0) {
    throw std::invalid_argument("experiment: max_batches must be positive");
  }
  if (dataset_id.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument("experiment: dataset id may not contain commas or newlines");
  }
  forest_options(*this).validate();
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["dataset"] = dataset_id;
  j["algorithms"] = nlohmann::json::array();
  for (const auto a : algorithms) j["algorithms"].push_back(to_string(a));
  j["batch_size"] = batch_size;
  j["n_trees"] = n_trees;
  j["replace_count"] = replace_count;
  j["repetitions"] = repetitions;
  j["folds"] = folds;
  j["master_seed"] = master_seed;
  j["max_batches"] = max_batches ? nlohmann::json(*max_batches) : nlohmann::json(nullptr);
  return j.dump();
}

std::vector<BenchRecord> run_stream_experiment(const ExperimentConfig& config,
                                               const Dataset& train, const Dataset& test,
                                               const ExperimentHooks& hooks) {
  config.validate();
  if (train.empty()) throw std::invalid_argument("experiment: empty training set");
  if (test.n_features() != train.n_features()) {
    throw std::invalid_argument("experiment: train and test feature counts differ");
  }
  if (test.n_classes() > train.n_classes()) {
    throw std::invalid_argument("experiment: test set declares more classes than train");
  }
  std::vector<BenchRecord> records;
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    run_once(config, train, test, rep, derive_seed(config.master_seed, rep), hooks, records);
  }
  sort_records(records);
  return records;
}

std::vector<BenchRecord> run_cv_experiment(const ExperimentConfig& config, const Dataset& data,
                                           const ExperimentHooks& hooks) {
  config.validate();
  const FoldPlan folds(data.n_samples(), config.folds, derive_seed(config.master_seed, 0xF01D));
  std::vector<BenchRecord> records;
  for (std::size_t f = 0; f < config.folds; ++f) {
    const auto train_rows = folds.train_indices(f);
    const auto test_rows = folds.test_indices(f);
    const Dataset train = data.subset(train_rows);
    const Dataset test = data.subset(test_rows);
    run_once(config, train, test, f, derive_seed(config.master_seed, f), hooks, records);
  }
  sort_records(records);
  return records;
}

double effect_size(std::span<const double> sdf_accuracy, std::span<const double> df_accuracy) {
  if (sdf_accuracy.empty() || df_accuracy.empty()) {
    throw std::invalid_argument("effect_size: empty accuracy list");
  }
  if (sdf_accuracy.size() != df_accuracy.size()) {
    throw std::invalid_argument("effect_size: accuracy lists differ in length");
  }
  const double df = mean(df_accuracy);
  if (df == 0.0) throw std::domain_error("effect_size: mean DF accuracy is zero");
  // Same quantity as (sdf - df) / df, but exact whenever the ratio is
  // representable.
  return mean(sdf_accuracy) / df - 1.0;
}

bool substantial_shift(std::span<const double> effects, double threshold) {
  if (effects.empty()) return false;
  const auto [lo, hi] = std::minmax_element(effects.begin(), effects.end());
  return *lo <= -threshold && *hi >= threshold;
}

std::vector<EffectPoint> effect_series(std::span<const BenchRecord> records) {
  struct Group {
    std::vector<double> sdf;
    std::vector<double> df;
    std::size_t sample_size = 0;
    bool seen = false;
  };
  std::map<std::pair<std::string, std::size_t>, Group> groups;
  for (const auto& r : records) {
    if (r.algorithm != Algorithm::kSdf && r.algorithm != Algorithm::kDf) continue;
    Group& g = groups[{r.dataset, r.batch}];
    g.sample_size = g.seen ? std::min(g.sample_size, r.sample_size) : r.sample_size;
    g.seen = true;
    (r.algorithm == Algorithm::kSdf ? g.sdf : g.df).push_back(r.accuracy);
  }
  std::vector<EffectPoint> out;
  for (const auto& [key, g] : groups) {
    if (g.sdf.empty() || g.sdf.size() != g.df.size()) continue;
    out.push_back(EffectPoint{key.first, key.second, g.sample_size, mean(g.sdf), mean(g.df),
                              effect_size(g.sdf, g.df)});
  }
  return out;
}

}  // namespace sdf
