#include "sdf/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "json.hpp"
#include "sdf/rng.hpp"

namespace sdf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long long> parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

LoadError::LoadError(const std::string& message, std::size_t row, std::size_t column)
    : std::runtime_error(message + " (row " + std::to_string(row) + ", column " +
                         std::to_string(column) + ")"),
      row_(row),
      column_(column) {}

LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string(), 0, 0);

  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_numbers;
  std::string line;
  std::size_t line_number = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw LoadError("expected " + std::to_string(width) + " columns, found " +
                          std::to_string(cells.size()),
                      line_number, 0);
    }
    if (options.has_header && header.empty()) {
      header.assign(cells.begin(), cells.end());
      continue;
    }
    rows.emplace_back(cells.begin(), cells.end());
    row_numbers.push_back(line_number);
  }
  if (rows.empty()) throw LoadError("no data rows in " + path.string(), line_number, 0);
  if (width < 2) throw LoadError("need at least one feature column and a label column", 1, 0);

  std::size_t label_col = width - 1;
  if (options.label_column) {
    if (const auto* index = std::get_if<std::size_t>(&*options.label_column)) {
      label_col = *index;
    } else {
      const auto& name = std::get<std::string>(*options.label_column);
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw LoadError("no column named '" + name + "'", 1, 0);
      label_col = static_cast<std::size_t>(it - header.begin());
    }
    if (label_col >= width) {
      throw LoadError("label column " + std::to_string(label_col) + " out of range", 1, label_col);
    }
  }

  const std::size_t p = width - 1;
  std::vector<double> features;
  features.reserve(rows.size() * p);
  std::vector<std::string> raw_labels;
  raw_labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& cell = rows[r][c];
      if (cell.empty()) throw LoadError("missing value", row_numbers[r], c);
      if (c == label_col) {
        raw_labels.push_back(cell);
        continue;
      }
      const auto v = parse_double(cell);
      if (!v) throw LoadError("non-numeric value '" + cell + "'", row_numbers[r], c);
      features.push_back(*v);
    }
  }

  LoadedCsv out;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == label_col) continue;
    out.feature_names.push_back(header.empty() ? "f" + std::to_string(out.feature_names.size())
                                               : header[c]);
  }

  std::vector<ClassIndex> labels;
  labels.reserve(raw_labels.size());
  ClassIndex n_classes = 0;
  if (options.declared_classes) {
    n_classes = *options.declared_classes;
    if (n_classes < 2) throw LoadError("declared class count must be at least 2", 0, label_col);
    for (std::size_t r = 0; r < raw_labels.size(); ++r) {
      const auto v = parse_integer(raw_labels[r]);
      if (!v || *v < 0 || *v >= n_classes) {
        throw LoadError("unknown label '" + raw_labels[r] + "' for " +
                            std::to_string(n_classes) + " declared classes",
                        row_numbers[r], label_col);
      }
      labels.push_back(static_cast<ClassIndex>(*v));
    }
    for (ClassIndex k = 0; k < n_classes; ++k) out.label_names.push_back(std::to_string(k));
  } else {
    std::vector<std::string> distinct(raw_labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const bool numeric = std::all_of(distinct.begin(), distinct.end(),
                                     [](const std::string& s) { return parse_integer(s); });
    if (numeric) {
      std::sort(distinct.begin(), distinct.end(), [](const auto& a, const auto& b) {
        return *parse_integer(a) < *parse_integer(b);
      });
    }
    if (distinct.size() < 2) {
      throw LoadError("fewer than two distinct labels; declare the class count", 0, label_col);
    }
    std::map<std::string, ClassIndex> index;
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      index.emplace(distinct[k], static_cast<ClassIndex>(k));
    }
    for (const auto& raw : raw_labels) labels.push_back(index.at(raw));
    n_classes = static_cast<ClassIndex>(distinct.size());
    out.label_names = std::move(distinct);
  }

  out.data = Dataset(std::move(features), p, std::move(labels), n_classes);
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path, bool header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (header) {
    for (std::size_t f = 0; f < data.n_features(); ++f) out << 'f' << f << ',';
    out << "label\n";
  }
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    for (const double v : data.row(i)) out << format_double(v) << ',';
    out << data.label(i) << '\n';
  }
}

void write_label_map(const std::vector<std::string>& label_names,
                     const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["labels"] = nlohmann::json::array();
  for (std::size_t k = 0; k < label_names.size(); ++k) {
    doc["labels"].push_back({{"index", k}, {"value", label_names[k]}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

BatchPlan::BatchPlan(std::size_t n, std::size_t batch_size, std::uint64_t seed)
    : ordering_(n), batch_size_(batch_size) {
  if (n == 0) throw std::invalid_argument("BatchPlan: n must be positive");
  if (batch_size == 0) throw std::invalid_argument("BatchPlan: batch_size must be positive");
  std::iota(ordering_.begin(), ordering_.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(ordering_, rng);
}

std::span<const std::size_t> BatchPlan::batch(std::size_t b) const {
  if (b >= num_batches()) throw std::out_of_range("BatchPlan: batch index out of range");
  const std::size_t begin = b * batch_size_;
  const std::size_t end = std::min(ordering_.size(), begin + batch_size_);
  return std::span<const std::size_t>(ordering_).subspan(begin, end - begin);
}

std::span<const std::size_t> BatchPlan::prefix(std::size_t batches) const {
  const std::size_t end = std::min(ordering_.size(), batches * batch_size_);
  return std::span<const std::size_t>(ordering_).first(end);
}

FoldPlan::FoldPlan(std::size_t n, std::size_t k, std::uint64_t seed) : k_(k), assignment_(n) {
  if (k < 2) throw std::invalid_argument("FoldPlan: k must be at least 2");
  if (n < k) throw std::invalid_argument("FoldPlan: need at least k samples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  for (std::size_t pos = 0; pos < n; ++pos) assignment_[order[pos]] = pos % k;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  if (fold >= k_) throw std::out_of_range("FoldPlan: fold out of range");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  if (fold >= k_) throw std::out_of_range("FoldPlan: fold out of range");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] != fold) out.push_back(i);
  }
  return out;
}

}  // namespace sdf
