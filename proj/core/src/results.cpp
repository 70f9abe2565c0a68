#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sdf/bench.hpp"

#ifndef SDF_VERSION
#define SDF_VERSION "0.0.0"
#endif

namespace sdf {

namespace {

constexpr const char* kMagic = "# sdf-bench results";
constexpr const char* kColumns =
    "algorithm,dataset,run,batch,sample_size,accuracy,train_seconds,node_count";

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <class T>
T parse_number(std::string_view s, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("results: bad number '" + std::string(s) + "' on line " +
                             std::to_string(line));
  }
  return value;
}

}  // namespace

std::string library_version() { return SDF_VERSION; }

void emit_results(std::span<const BenchRecord> records, const ResultsHeader& header,
                  std::ostream& out) {
  if (header.config.find('\n') != std::string::npos) {
    throw std::invalid_argument("results: config echo must be a single line");
  }
  out << kMagic << '\n';
  out << "# format_version: 1\n";
  out << "# library_version: " << header.library_version << '\n';
  out << "# seed: " << header.seed << '\n';
  out << "# bytes_per_node: " << header.bytes_per_node << '\n';
  out << "# config: " << header.config << '\n';
  out << kColumns << '\n';
  for (const auto& r : records) {
    if (r.dataset.find_first_of(",\n\r") != std::string::npos) {
      throw std::invalid_argument("results: dataset id may not contain commas or newlines");
    }
    out << to_string(r.algorithm) << ',' << r.dataset << ',' << r.run << ',' << r.batch << ','
        << r.sample_size << ',' << format_double(r.accuracy) << ','
        << format_double(r.train_seconds) << ',' << r.node_count << '\n';
  }
}

void emit_results(std::span<const BenchRecord> records, const ResultsHeader& header,
                  const std::filesystem::path& path) {
  // Render fully before touching the file so errors never leave partial output.
  std::ostringstream buffer;
  emit_results(records, header, buffer);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("results: cannot write " + path.string());
  out << buffer.str();
}

ResultsFile load_results(std::istream& in) {
  ResultsFile file;
  std::string line;
  std::size_t line_number = 0;
  bool columns_seen = false;
  if (!std::getline(in, line) || line != kMagic) {
    throw std::runtime_error("results: missing header line");
  }
  ++line_number;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "library_version") {
        file.header.library_version = value;
      } else if (key == "seed") {
        file.header.seed = parse_number<std::uint64_t>(value, line_number);
      } else if (key == "bytes_per_node") {
        file.header.bytes_per_node = parse_number<std::size_t>(value, line_number);
      } else if (key == "config") {
        file.header.config = value;
      }
      continue;
    }
    if (!columns_seen) {
      if (line != kColumns) throw std::runtime_error("results: unexpected column header");
      columns_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t comma = rest.find(','); comma != std::string_view::npos;
         comma = rest.find(',')) {
      cells.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    cells.push_back(rest);
    if (cells.size() != 8) {
      throw std::runtime_error("results: expected 8 fields on line " +
                               std::to_string(line_number));
    }
    BenchRecord r;
    r.algorithm = parse_algorithm(cells[0]);
    r.dataset = std::string(cells[1]);
    r.run = parse_number<std::size_t>(cells[2], line_number);
    r.batch = parse_number<std::size_t>(cells[3], line_number);
    r.sample_size = parse_number<std::size_t>(cells[4], line_number);
    r.accuracy = parse_number<double>(cells[5], line_number);
    r.train_seconds = parse_number<double>(cells[6], line_number);
    r.node_count = parse_number<std::size_t>(cells[7], line_number);
    file.records.push_back(std::move(r));
  }
  if (!columns_seen) throw std::runtime_error("results: missing column header");
  return file;
}

ResultsFile load_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("results: cannot read " + path.string());
  return load_results(in);
}

}  // namespace sdf
