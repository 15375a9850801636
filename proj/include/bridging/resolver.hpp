#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bridging/document.hpp"
#include "bridging/embedding_table.hpp"
#include "bridging/np_semantics.hpp"

namespace bridging {

// How mentions are turned into content-word lists. head_only restricts
// every mention to its head (modifier_kinds is ignored); the mixed mode
// keeps head+modifiers for the anaphor but head-only for candidates.
// include_of_postmodifier applies in every mode.
enum class RepresentationMode {
  head_only,
  head_plus_modifiers,
  mixed_anaphor_full_candidate_head,
};

RepresentationMode parse_representation_mode(std::string_view name);
std::string_view format_representation_mode(RepresentationMode mode);

// Every knob of the deterministic antecedent-selection algorithm.
struct ResolutionConfig {
  std::size_t window_sentences = 2;
  bool include_first_sentence = true;
  SuffixPolicy suffix_policy = SuffixPolicy::isnotes;
  RepresentationMode representation_mode = RepresentationMode::head_plus_modifiers;
  ModifierKindSet modifier_kinds = ModifierKindSet::all();
  bool include_of_postmodifier = true;
  bool exclude_time_candidates = true;
  bool exclude_bridging_anaphor_candidates = true;
  bool entity_expansion = true;
  bool fallback_unsuffixed = true;

  bool operator==(const ResolutionConfig&) const = default;
};

// One-line summary of a configuration for reports and logs.
std::string describe(const ResolutionConfig& config);

// Antecedent candidates of one anaphor, closest-first. Every candidate
// textually precedes the anaphor and the anaphor is never its own
// candidate.
struct CandidateList {
  std::string anaphor_id;
  std::vector<std::string> candidates;
};

struct Prediction {
  std::string anaphor_id;
  std::optional<std::string> predicted_mention_id;
  std::optional<std::string> predicted_entity_id;
  std::optional<double> score;
};

// Content words for a mention in the anaphor role: mode-dependent
// collection followed by the suffix policy.
ContentWordSet anaphor_content_words(const NounPhrase& np,
                                     const ResolutionConfig& config);

// Content words for a mention in the candidate role: head-only under
// head_only and mixed modes, head+modifiers otherwise. Never suffixed.
ContentWordSet candidate_content_words(const NounPhrase& np,
                                       const ResolutionConfig& config);

// Pools mentions preceding the anaphor from its own sentence, the previous
// window_sentences sentences, and (optionally) the first sentence of the
// document; drops bridging anaphors and, for non-time anaphors, time-typed
// mentions, per the config; deduplicates and orders closest-first. Throws
// StructuralError when the anaphor does not belong to the document.
CandidateList build_candidates(const Document& doc, const NounPhrase& anaphor,
                               const ResolutionConfig& config);

// Adds every other mention of each candidate's entity that precedes the
// anaphor, deduplicates, and restores closest-first order.
CandidateList expand_entities(const CandidateList& candidates, const Document& doc);

// Scores every candidate by cosine against the anaphor vector and picks the
// argmax; exact score ties go to the candidate earlier in the closest-first
// order. Candidates whose vector is absent (or incomparable) are skipped;
// when none is scorable the prediction is absent.
Prediction select_antecedent(VectorView anaphor_vec, const CandidateList& candidates,
                             const Document& doc, const EmbeddingTable& table,
                             const ResolutionConfig& config);

// Full pipeline over the document's gold bridging anaphors, in gold-link
// order: build candidates, expand entities (when configured), vectorize,
// select. Anaphors whose own vector is absent yield absent predictions.
std::vector<Prediction> resolve_document(const Document& doc,
                                         const EmbeddingTable& table,
                                         const ResolutionConfig& config);

}  // namespace bridging
