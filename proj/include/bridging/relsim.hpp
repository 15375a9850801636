#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bridging/embedding_table.hpp"

namespace bridging {

struct WordPair {
  std::string first;
  std::string second;
  std::optional<double> gold_score;  // human prototypicality rating

  bool operator==(const WordPair&) const = default;
};

// A relation class: its prototypical pairs plus the human-ranked candidate
// pairs to be scored against them.
struct RelationDataset {
  std::string relation_name;
  std::vector<WordPair> prototypical_pairs;  // at least one
  std::vector<WordPair> candidate_pairs;     // gold_score present on each
};

// Relational similarity between the pairs (v1, v2) and (v3, v4): all four
// vectors are normalized to unit length first, then the cosine of the two
// difference vectors is returned. Throws UndefinedSimilarityError when an
// input or a difference vector has zero norm.
double pair_relsim(VectorView v1, VectorView v2, VectorView v3, VectorView v4);

// Mean of pair_relsim(pair, proto) over the prototypical pairs. When
// suffix_second is set, "_PP" is attached to the second element of every
// pair before lookup, falling back to the unsuffixed form when the
// suffixed one is missing and fallback_unsuffixed is set. A word that does
// not resolve raises CoverageError naming it.
double mean_proto_similarity(const WordPair& pair, const std::vector<WordPair>& protos,
                             const EmbeddingTable& table, bool suffix_second,
                             bool fallback_unsuffixed = true);

// Spearman's rank correlation: Pearson correlation of the average-tie
// ranks. Throws DimensionError on length mismatch and
// UndefinedCorrelationError when either side has zero rank variance.
double spearman_rho(std::span<const double> system_scores,
                    std::span<const double> gold_scores);

struct ScoredPair {
  WordPair pair;
  double system_score = 0.0;
};

struct DroppedPair {
  WordPair pair;
  std::string missing_word;
};

struct RankedRelation {
  std::string relation_name;
  std::vector<ScoredPair> ranked;  // descending system score
  std::vector<DroppedPair> dropped;
  double rho = 0.0;
};

// Scores every candidate pair by mean prototype similarity, ranks them
// descending (input order on exact ties), and computes rho against the gold
// scores of the pairs that could be scored; unresolvable candidates are
// dropped and reported. Throws CoverageError when no candidate is scorable.
RankedRelation rank_relation(const RelationDataset& dataset,
                             const EmbeddingTable& table, bool suffix_second,
                             bool fallback_unsuffixed = true);

// Reads the declarative dataset format: a `relation <name>` header, then
// `proto <w1> <w2>` lines, then `cand <w1> <w2> <gold_score>` lines.
// Blank lines and lines starting with '#' are skipped.
RelationDataset load_relation_dataset(const std::filesystem::path& path);

}  // namespace bridging
