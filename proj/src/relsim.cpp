#include "bridging/relsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bridging/errors.hpp"
#include "bridging/np_semantics.hpp"

namespace bridging {

namespace {

WordVector unit_vector(VectorView v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm == 0.0) {
    throw UndefinedSimilarityError("cannot normalize a zero vector");
  }
  norm = std::sqrt(norm);
  WordVector out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

// Average-tie (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      ranks[order[k]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

VectorView require(const EmbeddingTable& table, const std::string& word,
                   bool suffixed, bool fallback_unsuffixed) {
  if (suffixed) {
    const std::string key = word + std::string(kPpSuffix);
    if (auto vec = table.lookup(key)) return *vec;
    if (!fallback_unsuffixed) {
      throw CoverageError("word not in table: " + key);
    }
  }
  if (auto vec = table.lookup(word)) return *vec;
  throw CoverageError("word not in table: " + word);
}

}  // namespace

double pair_relsim(VectorView v1, VectorView v2, VectorView v3, VectorView v4) {
  if (v1.size() != v2.size() || v1.size() != v3.size() || v1.size() != v4.size()) {
    throw DimensionError("pair_relsim requires four vectors of equal length");
  }
  const WordVector u1 = unit_vector(v1);
  const WordVector u2 = unit_vector(v2);
  const WordVector u3 = unit_vector(v3);
  const WordVector u4 = unit_vector(v4);
  WordVector d1(u1.size()), d2(u1.size());
  for (std::size_t i = 0; i < u1.size(); ++i) {
    d1[i] = u1[i] - u2[i];
    d2[i] = u3[i] - u4[i];
  }
  return cosine(d1, d2);  // throws on a zero difference vector
}

double mean_proto_similarity(const WordPair& pair, const std::vector<WordPair>& protos,
                             const EmbeddingTable& table, bool suffix_second,
                             bool fallback_unsuffixed) {
  if (protos.empty()) {
    throw StructuralError("mean_proto_similarity requires at least one prototype");
  }
  VectorView v1 = require(table, pair.first, false, fallback_unsuffixed);
  VectorView v2 = require(table, pair.second, suffix_second, fallback_unsuffixed);
  double sum = 0.0;
  for (const WordPair& proto : protos) {
    VectorView v3 = require(table, proto.first, false, fallback_unsuffixed);
    VectorView v4 = require(table, proto.second, suffix_second, fallback_unsuffixed);
    sum += pair_relsim(v1, v2, v3, v4);
  }
  return sum / static_cast<double>(protos.size());
}

double spearman_rho(std::span<const double> system_scores,
                    std::span<const double> gold_scores) {
  if (system_scores.size() != gold_scores.size()) {
    throw DimensionError("rank correlation over lists of lengths " +
                         std::to_string(system_scores.size()) + " and " +
                         std::to_string(gold_scores.size()));
  }
  if (system_scores.empty()) {
    throw DimensionError("rank correlation of empty lists");
  }
  const std::vector<double> rx = average_ranks(system_scores);
  const std::vector<double> ry = average_ranks(gold_scores);
  const double n = static_cast<double>(rx.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= n;
  mean_y /= n;
  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0.0 || var_y == 0.0) {
    throw UndefinedCorrelationError(
        "rank correlation undefined: zero rank variance");
  }
  return cov / std::sqrt(var_x * var_y);
}

RankedRelation rank_relation(const RelationDataset& dataset,
                             const EmbeddingTable& table, bool suffix_second,
                             bool fallback_unsuffixed) {
  RankedRelation result;
  result.relation_name = dataset.relation_name;
  std::vector<double> system_scores;
  std::vector<double> gold_scores;
  for (const WordPair& pair : dataset.candidate_pairs) {
    try {
      const double score = mean_proto_similarity(pair, dataset.prototypical_pairs,
                                                 table, suffix_second,
                                                 fallback_unsuffixed);
      result.ranked.push_back({pair, score});
      system_scores.push_back(score);
      gold_scores.push_back(pair.gold_score.value_or(0.0));
    } catch (const CoverageError& e) {
      result.dropped.push_back({pair, e.what()});
    }
  }
  if (result.ranked.empty()) {
    throw CoverageError("relation '" + dataset.relation_name +
                        "': no candidate pair could be scored");
  }
  result.rho = spearman_rho(system_scores, gold_scores);
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const ScoredPair& a, const ScoredPair& b) {
                     return a.system_score > b.system_score;
                   });
  return result;
}

RelationDataset load_relation_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open relation dataset: " + path.string());
  }
  RelationDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword) || keyword[0] == '#') {
      continue;
    }
    if (keyword == "relation") {
      std::string name;
      if (!(fields >> name)) {
        throw FormatError("line " + std::to_string(line_no) + ": relation needs a name");
      }
      dataset.relation_name = name;
      have_header = true;
    } else if (keyword == "proto") {
      WordPair pair;
      if (!(fields >> pair.first >> pair.second)) {
        throw FormatError("line " + std::to_string(line_no) + ": proto needs two words");
      }
      dataset.prototypical_pairs.push_back(std::move(pair));
    } else if (keyword == "cand") {
      WordPair pair;
      double gold = 0.0;
      if (!(fields >> pair.first >> pair.second >> gold)) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": cand needs two words and a gold score");
      }
      pair.gold_score = gold;
      dataset.candidate_pairs.push_back(std::move(pair));
    } else {
      throw FormatError("line " + std::to_string(line_no) + ": unknown keyword '" +
                        keyword + "'");
    }
  }
  if (!have_header) {
    throw FormatError("relation dataset lacks a 'relation <name>' header: " +
                      path.string());
  }
  if (dataset.prototypical_pairs.empty()) {
    throw FormatError("relation '" + dataset.relation_name +
                      "' lists no prototypical pairs");
  }
  return dataset;
}

}  // namespace bridging
