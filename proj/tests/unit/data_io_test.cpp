#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sdf/data_io.hpp"
#include "sdf/split.hpp"
#include "sdf/tree.hpp"

namespace sdf {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("sdf_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

TEST(BatchPlan, PartitionsAPermutation) {
  const BatchPlan plan(250, 100, 7);
  ASSERT_EQ(plan.num_batches(), 3u);
  EXPECT_EQ(plan.batch(0).size(), 100u);
  EXPECT_EQ(plan.batch(1).size(), 100u);
  EXPECT_EQ(plan.batch(2).size(), 50u);
  std::vector<std::size_t> seen(plan.ordering().begin(), plan.ordering().end());
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, testing::iota_indices(250));
  EXPECT_EQ(plan.prefix(2).size(), 200u);
  EXPECT_TRUE(std::equal(plan.prefix(2).begin(), plan.prefix(2).end(),
                         plan.ordering().begin()));
  EXPECT_THROW(plan.batch(3), std::out_of_range);

  const BatchPlan single(100, 100, 1);
  EXPECT_EQ(single.num_batches(), 1u);
  EXPECT_EQ(single.batch(0).size(), 100u);
}

TEST(BatchPlan, PureFunctionOfArguments) {
  const BatchPlan a = make_batches(500, 30, 3);
  const BatchPlan b = make_batches(500, 30, 3);
  EXPECT_TRUE(std::equal(a.ordering().begin(), a.ordering().end(), b.ordering().begin(),
                         b.ordering().end()));
  const BatchPlan c = make_batches(500, 30, 4);
  EXPECT_FALSE(std::equal(a.ordering().begin(), a.ordering().end(), c.ordering().begin(),
                          c.ordering().end()));
  EXPECT_THROW(BatchPlan(0, 10, 0), std::invalid_argument);
  EXPECT_THROW(BatchPlan(10, 0, 0), std::invalid_argument);
}

TEST(FoldPlan, SizesAndCoverage) {
  auto sizes = [](const FoldPlan& plan) {
    std::multiset<std::size_t> out;
    for (std::size_t f = 0; f < plan.k(); ++f) out.insert(plan.test_indices(f).size());
    return out;
  };
  EXPECT_EQ(sizes(make_folds(10, 5, 1)), (std::multiset<std::size_t>{2, 2, 2, 2, 2}));
  EXPECT_EQ(sizes(make_folds(11, 5, 1)), (std::multiset<std::size_t>{2, 2, 2, 2, 3}));

  const FoldPlan plan(103, 5, 9);
  std::vector<int> hits(103, 0);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = plan.test_indices(f);
    const auto train = plan.train_indices(f);
    EXPECT_EQ(test.size() + train.size(), 103u);
    for (auto i : test) ++hits[i];
    std::vector<std::size_t> both;
    std::set_intersection(test.begin(), test.end(), train.begin(), train.end(),
                          std::back_inserter(both));
    EXPECT_TRUE(both.empty());
  }
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_THROW(FoldPlan(10, 1, 0), std::invalid_argument);
  EXPECT_THROW(FoldPlan(3, 5, 0), std::invalid_argument);
}

TEST(Synthetic, BalancedAndDeterministic) {
  for (const auto kind : {SyntheticKind::kBlobs, SyntheticKind::kXor, SyntheticKind::kConcentric}) {
    SyntheticSpec spec;
    spec.kind = kind;
    spec.n = 401;
    spec.n_classes = kind == SyntheticKind::kBlobs ? 5 : 2;
    spec.seed = 3;
    const Dataset a = gen_synthetic(spec);
    EXPECT_EQ(a, gen_synthetic(spec));
    EXPECT_EQ(a.n_samples(), 401u);
    const auto hist = class_histogram(a, testing::iota_indices(a.n_samples()));
    const auto [lo, hi] = std::minmax_element(hist.begin(), hist.end());
    EXPECT_LE(*hi - *lo, 1u) << to_string(kind);
    EXPECT_EQ(parse_synthetic_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_synthetic_kind("spirals"), std::invalid_argument);
}

TEST(Synthetic, XorHasNoUsefulRootSplit) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kXor;
  spec.n = 400;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.seed = seed;
    const Dataset d = gen_synthetic(spec);
    ASSERT_EQ(d.n_features(), 2u);
    const auto best = testing::brute_force_split(d, testing::iota_indices(400),
                                                 testing::iota_indices(2));
    if (best) {
      EXPECT_LE(best->decrease, 0.02);
    }
  }
}

TEST(Synthetic, NoiselessBlobsAreSeparable) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kBlobs;
  spec.n = 400;
  spec.seed = 11;
  const Dataset d = gen_synthetic(spec);
  SplitCriteria c;
  c.max_depth = 3;
  EXPECT_EQ(testing::accuracy(DecisionTree::fit(d, c, 0), d), 1.0);
}

TEST(Csv, RoundTripIsBitExact) {
  TempDir dir;
  Rng rng(5);
  std::vector<double> x(60 * 3);
  for (auto& v : x) v = rng.normal() * 1e3 + rng.uniform01() * 1e-9;
  x[0] = 0.1;
  x[1] = -0.0;
  x[2] = 1e-310;
  std::vector<ClassIndex> y(60);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<ClassIndex>(i % 4);
  const Dataset d(x, 3, y, 4);

  write_csv(d, dir / "a.csv");
  const auto loaded = load_csv(dir / "a.csv");
  EXPECT_EQ(loaded.data, d);
  EXPECT_EQ(loaded.feature_names, (std::vector<std::string>{"f0", "f1", "f2"}));

  write_csv(d, dir / "b.csv", false);
  CsvOptions no_header;
  no_header.has_header = false;
  no_header.declared_classes = 4;
  EXPECT_EQ(load_csv(dir / "b.csv", no_header).data, d);
}

TEST(Csv, BlankCellIsReportedWithItsPosition) {
  TempDir dir;
  write_text(dir / "x.csv", "a,b,label\n1,2,0\n3,,1\n");
  try {
    load_csv(dir / "x.csv");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Csv, RejectsBadCells) {
  TempDir dir;
  write_text(dir / "nan.csv", "a,label\nfoo,0\n1,1\n");
  EXPECT_THROW(load_csv(dir / "nan.csv"), LoadError);
  write_text(dir / "ragged.csv", "a,label\n1,0\n1,2,1\n");
  EXPECT_THROW(load_csv(dir / "ragged.csv"), LoadError);
  write_text(dir / "one.csv", "a,label\n1,0\n2,0\n");
  EXPECT_THROW(load_csv(dir / "one.csv"), LoadError);
  EXPECT_THROW(load_csv(dir / "missing.csv"), LoadError);

  write_text(dir / "k.csv", "a,label\n1,0\n2,3\n");
  CsvOptions declared;
  declared.declared_classes = 3;
  try {
    load_csv(dir / "k.csv", declared);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Csv, LabelsByNameAndDictionary) {
  TempDir dir;
  write_text(dir / "n.csv", "class,x,y\nEI,1,2\nN,3,4\nIE,5,6\nN,7,8\n");
  CsvOptions o;
  o.label_column = std::string("class");
  const auto loaded = load_csv(dir / "n.csv", o);
  EXPECT_EQ(loaded.label_names, (std::vector<std::string>{"EI", "IE", "N"}));
  EXPECT_EQ(loaded.feature_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(loaded.data.n_classes(), 3);
  EXPECT_EQ(std::vector<ClassIndex>(loaded.data.labels().begin(), loaded.data.labels().end()),
            (std::vector<ClassIndex>{0, 2, 1, 2}));
  EXPECT_EQ(loaded.data.value(2, 1), 6.0);

  // Integer labels sort numerically, not lexically.
  write_text(dir / "i.csv", "x,label\n1,10\n2,9\n3,2\n");
  EXPECT_EQ(load_csv(dir / "i.csv").label_names, (std::vector<std::string>{"2", "9", "10"}));

  o.label_column = std::size_t{0};
  EXPECT_EQ(load_csv(dir / "n.csv", o).data, loaded.data);
  o.label_column = std::string("nope");
  EXPECT_THROW(load_csv(dir / "n.csv", o), LoadError);

  write_label_map(loaded.label_names, dir / "map.json");
  std::ifstream in(dir / "map.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("\"IE\""), std::string::npos);
}

Dataset shaped(std::size_t n, std::size_t p, ClassIndex k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n * p);
  for (auto& v : x) v = static_cast<double>(rng.uniform_index(8));
  std::vector<ClassIndex> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<ClassIndex>(i % static_cast<std::size_t>(k));
  return Dataset(std::move(x), p, std::move(y), k);
}

TEST(Csv, BenchmarkShapedFiles) {
  TempDir dir;
  const Dataset sequences = shaped(3190, 60, 3, 1);
  write_csv(sequences, dir / "sequences.csv");
  const auto s = load_csv(dir / "sequences.csv").data;
  EXPECT_EQ(s.n_features(), 60u);
  EXPECT_EQ(s.n_classes(), 3);
  EXPECT_EQ(s.n_samples(), 3190u);

  const Dataset train = shaped(7494, 16, 10, 2);
  const Dataset test = shaped(3498, 16, 10, 3);
  write_csv(train, dir / "digits_train.csv");
  write_csv(test, dir / "digits_test.csv");
  CsvOptions o;
  o.declared_classes = 10;
  const auto tr = load_csv(dir / "digits_train.csv", o).data;
  const auto te = load_csv(dir / "digits_test.csv", o).data;
  EXPECT_EQ(tr.n_features(), 16u);
  EXPECT_EQ(tr.n_classes(), 10);
  EXPECT_EQ(tr.n_samples(), 7494u);
  EXPECT_EQ(te.n_samples(), 3498u);
}

TEST(DatasetTest, ValidatesShape) {
  EXPECT_THROW(Dataset({1, 2, 3}, 2, {0}, 2), std::invalid_argument);
  EXPECT_THROW(Dataset({1, 2}, 1, {0, 2}, 2), std::invalid_argument);
  EXPECT_THROW(Dataset({1, 2}, 1, {0, -1}, 2), std::invalid_argument);
  EXPECT_THROW(Dataset({1, std::nan("")}, 1, {0, 1}, 2), std::invalid_argument);
  EXPECT_THROW(Dataset({1}, 1, {0}, 1), std::invalid_argument);
  const Dataset d({1, 2, 3, 4}, 2, {0, 1}, 2);
  const std::vector<std::size_t> pick{1, 1};
  const Dataset s = d.subset(pick);
  EXPECT_EQ(s.n_samples(), 2u);
  EXPECT_EQ(s.value(1, 0), 3.0);
  EXPECT_EQ(d.with_classes(5).n_classes(), 5);
  EXPECT_THROW(d.with_classes(1), std::invalid_argument);
}

}  // namespace
}  // namespace sdf
