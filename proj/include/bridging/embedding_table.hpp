#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bridging {

using WordVector = std::vector<double>;
using VectorView = std::span<const double>;

// Counters reported by load_table for anomalies that do not abort the load.
struct LoadStats {
  std::size_t duplicates = 0;  // repeated tokens, first occurrence kept
  std::size_t malformed = 0;   // blank lines skipped
};

// Immutable-after-construction word -> vector map with a fixed dimension.
// Entries keep their insertion order so that serialization is reproducible.
// Safe for concurrent reads once loading is complete.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  bool contains(std::string_view token) const;

  // Returns the stored vector, or nullopt when the token is absent.
  std::optional<VectorView> lookup(std::string_view token) const;

  // Inserts a new entry; returns false (and keeps the existing vector)
  // when the token is already present. Throws DimensionError if the
  // vector length differs from the table dimension.
  bool insert(std::string token, VectorView values);

  // Insertion-ordered vocabulary.
  const std::vector<std::string>& tokens() const { return tokens_; }
  VectorView vector_at(std::size_t index) const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dimension_;
  std::vector<std::string> tokens_;
  std::vector<double> values_;  // flat, tokens_.size() * dimension_
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

// Reads a table in the whitespace-separated text format: one entry per
// line, token followed by decimal coordinates, no header. The dimension is
// taken from the first entry (or expected_dim for an empty file) and every
// other row must match it. Duplicate tokens keep their first vector; blank
// lines are skipped. Both counts land in *stats when given.
EmbeddingTable load_table(const std::filesystem::path& path,
                          std::optional<std::size_t> expected_dim = std::nullopt,
                          LoadStats* stats = nullptr);

// Writes the table in the same text format, one entry per line in stored
// order. Coordinates are printed in the shortest form that parses back to
// the identical double, so load_table(write_table(t)) == t exactly.
void write_table(const EmbeddingTable& table, const std::filesystem::path& path);

// Cosine similarity with 64-bit accumulation. Throws DimensionError on
// length mismatch and UndefinedSimilarityError when either norm is zero.
double cosine(VectorView u, VectorView v);

// The k vocabulary items most cosine-similar to the stored vector of
// `token`, excluding the token itself, in descending similarity with exact
// ties broken lexicographically. Entries whose similarity is undefined
// (zero norm on either side) are skipped.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    const EmbeddingTable& table, std::string_view token, std::size_t k);

}  // namespace bridging
