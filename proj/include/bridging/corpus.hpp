#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bridging/document.hpp"
#include "bridging/embedding_table.hpp"
#include "bridging/resolver.hpp"

namespace bridging {

// Reads a corpus file: one JSON object per line, each a full document
// (doc_id, sentences, mentions, optional entities map, gold_links). When
// the entities map is omitted it is derived from the mentions' entity ids.
// Every document is validated before being returned. Format problems raise
// FormatError with the line number; invariant violations raise
// ValidationError with the doc id and field path.
std::vector<Document> load_corpus(const std::filesystem::path& path);

// Predictions of one document's gold anaphors, in gold-link order.
struct DocumentPredictions {
  std::string doc_id;
  std::vector<Prediction> predictions;
};

// Aggregate outcome of one experiment run.
struct ExperimentReport {
  std::string config_summary;
  std::size_t resolved_count = 0;
  std::size_t total_anaphors = 0;
  double accuracy = 0.0;  // resolved_count / total_anaphors, 0 when empty
  // Gold-relation breakdown, present when any gold link carries a label.
  std::optional<std::map<std::string, double>> per_relation_accuracy;
};

// Entity-level accuracy over all gold anaphors: a prediction is correct iff
// its predicted entity equals the gold antecedent entity; absent predictions
// count as incorrect. Requires exactly one prediction per gold anaphor of
// every listed document (ValidationError otherwise); the result does not
// depend on the order of the prediction lists.
ExperimentReport score(const std::vector<DocumentPredictions>& predictions,
                       const std::vector<Document>& docs,
                       std::string config_summary = {});

// Resolves every document under one configuration. jobs > 1 spreads
// documents over that many threads; each result lands in a fixed slot, so
// the output is identical for every job count.
std::vector<DocumentPredictions> resolve_corpus(const std::vector<Document>& docs,
                                                const EmbeddingTable& table,
                                                const ResolutionConfig& config,
                                                std::size_t jobs = 1);

// One resolve+score run per modifier subset, holding everything else in
// base_config fixed (representation mode forced to head_plus_modifiers so
// the subsets take effect; the empty subset therefore reproduces head-only
// results exactly).
std::vector<ExperimentReport> ablation_run(
    const std::vector<Document>& docs, const EmbeddingTable& table,
    const ResolutionConfig& base_config,
    const std::vector<ModifierKindSet>& modifier_subsets, std::size_t jobs = 1);

// Named experiment configurations:
//   isnotes_head   window 2, first sentence on, head only (no of-phrase)
//   isnotes_full   window 2, first sentence on, head + all modifiers
//   isnotes_mixed  as full, but candidates are reduced to their heads
//   bashi          window 2, first sentence off, comparative exemption
//   arrau_rst      window 10, first sentence off, never-suffix policy
// Unknown names raise NotFoundError.
ResolutionConfig preset_config(std::string_view name);
const std::vector<std::string>& preset_names();

// How often the gold antecedent entity is reachable at all: the fraction of
// gold anaphors whose candidate list (built and entity-expanded per config)
// contains at least one mention of the gold entity.
struct CoverageStats {
  std::size_t covered = 0;
  std::size_t total = 0;
  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
  }
};
CoverageStats antecedent_coverage(const std::vector<Document>& docs,
                                  const ResolutionConfig& config);

// Predictions as a TSV with one row per anaphor:
//   doc_id  anaphor_id  predicted_mention_id  predicted_entity_id  score
// Absent fields are written as "-"; scores use shortest round-trip form, so
// write → read is lossless and repeated writes are byte-identical.
void write_predictions(const std::filesystem::path& path,
                       const std::vector<DocumentPredictions>& predictions);
std::vector<DocumentPredictions> read_predictions(const std::filesystem::path& path);

// Human-readable rendering of a report (aligned key/value lines).
std::string format_report(const ExperimentReport& report);

// Machine-readable rendering (one JSON object, stable key order).
std::string report_to_json(const ExperimentReport& report);

}  // namespace bridging
