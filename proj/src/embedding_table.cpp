#include "bridging/embedding_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bridging/errors.hpp"

namespace bridging {

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) {
    throw DimensionError("embedding table dimension must be positive");
  }
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::optional<VectorView> EmbeddingTable::lookup(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return vector_at(it->second);
}

bool EmbeddingTable::insert(std::string token, VectorView values) {
  if (values.size() != dimension_) {
    throw DimensionError("vector for '" + token + "' has length " +
                         std::to_string(values.size()) + ", table dimension is " +
                         std::to_string(dimension_));
  }
  if (index_.find(token) != index_.end()) {
    return false;
  }
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  values_.insert(values_.end(), values.begin(), values.end());
  return true;
}

VectorView EmbeddingTable::vector_at(std::size_t index) const {
  return VectorView(values_.data() + index * dimension_, dimension_);
}

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

// Splits a line into whitespace-separated fields without copying.
std::vector<std::string_view> split_fields(const std::string& line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(std::string_view(line).substr(start, i - start));
  }
  return fields;
}

double parse_value(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": '" +
                      std::string(field) + "' is not a number");
  }
  return value;
}

}  // namespace

EmbeddingTable load_table(const std::filesystem::path& path,
                          std::optional<std::size_t> expected_dim,
                          LoadStats* stats) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open embedding file: " + path.string());
  }

  LoadStats local;
  std::optional<EmbeddingTable> table;
  std::string line;
  std::vector<double> row;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      ++local.malformed;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() < 2) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected a token followed by coordinates");
    }
    const std::size_t width = fields.size() - 1;
    if (!table) {
      if (expected_dim && width != *expected_dim) {
        throw DimensionError("line " + std::to_string(line_no) + ": dimension " +
                             std::to_string(width) + " does not match expected " +
                             std::to_string(*expected_dim));
      }
      table.emplace(width);
    } else if (width != table->dimension()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table->dimension()) + " values, got " +
                        std::to_string(width));
    }
    row.clear();
    row.reserve(width);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      row.push_back(parse_value(fields[i], line_no));
    }
    if (!table->insert(std::string(fields[0]), row)) {
      ++local.duplicates;
    }
  }
  if (in.bad()) {
    throw IoError("read failure on embedding file: " + path.string());
  }
  if (!table) {
    if (!expected_dim) {
      throw FormatError("empty embedding file and no expected dimension: " +
                        path.string());
    }
    table.emplace(*expected_dim);
  }
  if (stats) {
    *stats = local;
  }
  return std::move(*table);
}

void write_table(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open file for writing: " + path.string());
  }
  char buf[64];
  std::string line;
  for (std::size_t i = 0; i < table.size(); ++i) {
    line = table.tokens()[i];
    for (double v : table.vector_at(i)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      line += ' ';
      line.append(buf, ptr);
      (void)ec;
    }
    line += '\n';
    out << line;
  }
  if (!out) {
    throw IoError("write failure on file: " + path.string());
  }
}

double cosine(VectorView u, VectorView v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine over vectors of lengths " +
                         std::to_string(u.size()) + " and " +
                         std::to_string(v.size()));
  }
  double dot = 0.0, norm_u = 0.0, norm_v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    norm_u += u[i] * u[i];
    norm_v += v[i] * v[i];
  }
  if (norm_u == 0.0 || norm_v == 0.0) {
    throw UndefinedSimilarityError("cosine of a zero-norm vector is undefined");
  }
  return dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingTable& table, std::string_view token, std::size_t k) {
  auto query = table.lookup(token);
  if (!query) {
    throw NotFoundError("token not in table: " + std::string(token));
  }
  std::vector<std::pair<std::string, double>> scored;
  if (k == 0) {
    return scored;
  }
  double query_norm = 0.0;
  for (double x : *query) query_norm += x * x;
  if (query_norm == 0.0) {
    return scored;  // every similarity undefined
  }
  scored.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string& candidate = table.tokens()[i];
    if (candidate == token) {
      continue;
    }
    VectorView vec = table.vector_at(i);
    double norm = 0.0;
    for (double x : vec) norm += x * x;
    if (norm == 0.0) {
      continue;
    }
    scored.emplace_back(candidate, cosine(*query, vec));
  }
  auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  if (scored.size() > k) {
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), better);
    scored.resize(k);
  } else {
    std::sort(scored.begin(), scored.end(), better);
  }
  return scored;
}

}  // namespace bridging
