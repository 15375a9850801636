#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bridging/embedding_table.hpp"

namespace bridging {

// Suffix marking the head-of-prepositional/possessive-construction sense of
// a noun in the PP-context vocabulary.
inline constexpr std::string_view kPpSuffix = "_PP";

enum class ModifierKind { common_noun, adjective, ed_participle, ing_participle };

struct Premodifier {
  std::string lemma;  // lowercase
  ModifierKind kind = ModifierKind::common_noun;

  bool operator==(const Premodifier&) const = default;
};

// Which premodifier kinds participate in an NP's content-word list.
struct ModifierKindSet {
  bool common_noun = false;
  bool adjective = false;
  bool ed_participle = false;
  bool ing_participle = false;

  static ModifierKindSet all() { return {true, true, true, true}; }
  static ModifierKindSet none() { return {}; }

  bool contains(ModifierKind kind) const;
  bool empty() const {
    return !common_noun && !adjective && !ed_participle && !ing_participle;
  }

  bool operator==(const ModifierKindSet&) const = default;
};

// Parses a comma-separated list of kind names: "noun"/"common_noun",
// "adjective", "ed_participle", "ing_participle", "participle" (both
// participle kinds), "all", "none". Throws FormatError on unknown names.
ModifierKindSet parse_modifier_kinds(std::string_view spec);
std::string format_modifier_kinds(const ModifierKindSet& kinds);

enum class SemanticType { time, other };

struct OfPostmodifier {
  std::string head_lemma;
  std::vector<Premodifier> premodifiers;

  bool operator==(const OfPostmodifier&) const = default;
};

// An annotated mention. Lemmas and modifier kinds come from the corpus
// annotation; nothing here is computed from raw text.
struct NounPhrase {
  std::string mention_id;
  std::size_t sentence_index = 0;
  std::size_t span_start = 0;  // token offsets within the sentence
  std::size_t span_end = 0;    // exclusive
  std::string head_lemma;      // lowercase
  std::vector<Premodifier> premodifiers;  // surface order
  std::optional<OfPostmodifier> of_postmodifier;
  SemanticType semantic_type = SemanticType::other;
  bool is_bridging_anaphor = false;
  bool is_comparative_anaphor = false;
  std::optional<std::string> entity_id;
};

// Ordered list of lookup keys (lemmas, possibly "_PP"-suffixed). An NP that
// yields no usable key is represented as an absent vector downstream, never
// as an empty set.
using ContentWordSet = std::vector<std::string>;

// Which corpus conventions govern the "_PP" suffix on anaphors.
enum class SuffixPolicy {
  isnotes,  // suffix bridging anaphors unless their semantic type is time
  bashi,    // as isnotes, but comparative anaphors are exempt
  arrau,    // never suffix
};

SuffixPolicy parse_suffix_policy(std::string_view name);
std::string_view format_suffix_policy(SuffixPolicy policy);

// Whether a mention is being represented as the anaphor or as an antecedent
// candidate. Candidates never receive the "_PP" suffix.
enum class MentionRole { anaphor, candidate };

// Builds the content-word list: selected premodifier lemmas in surface
// order, then the head lemma; when include_of_postmodifier is set and an
// "of"-postmodifier is present, its selected premodifiers and head follow.
ContentWordSet collect_content_words(const NounPhrase& np,
                                     const ModifierKindSet& modifier_kinds,
                                     bool include_of_postmodifier);

// Appends "_PP" to every token when the policy calls for it: the mention is
// in the anaphor role, is a bridging anaphor, and is not a time expression
// (under bashi, additionally not a comparative anaphor; under arrau, never).
// Idempotent: tokens already carrying the suffix are left alone.
ContentWordSet apply_suffix(ContentWordSet words, const NounPhrase& np,
                            SuffixPolicy policy, MentionRole role);

// Mean of the vectors of the tokens that resolve in the table. A
// "_PP"-suffixed token missing from the table falls back to its unsuffixed
// form when fallback_unsuffixed is set; tokens still missing are dropped
// from the average. Returns nullopt when nothing resolves.
std::optional<WordVector> np_vector(const EmbeddingTable& table,
                                    const ContentWordSet& words,
                                    bool fallback_unsuffixed);

// Syntactic shape of an NP as far as noun-pair extraction is concerned:
// either `head preposition modifier` or `modifier 's head`, or neither.
enum class NpStructureRelation { none, preposition, possessive };

struct NpStructure {
  std::string head_lemma;
  NpStructureRelation relation = NpStructureRelation::none;
  std::string modifier_head_lemma;
};

// Emits the training pair (head + "_PP", modifier head) for prepositional
// and possessive structures; the NP head is always on the left. Structures
// with neither relation yield nothing.
std::optional<std::pair<std::string, std::string>> extract_noun_pair(
    const NpStructure& np_structure);

}  // namespace bridging
