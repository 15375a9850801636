#include "bridging/resolver.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "bridging/errors.hpp"

namespace bridging {

RepresentationMode parse_representation_mode(std::string_view name) {
  if (name == "head_only") return RepresentationMode::head_only;
  if (name == "head_plus_modifiers") return RepresentationMode::head_plus_modifiers;
  if (name == "mixed" || name == "mixed_anaphor_full_candidate_head") {
    return RepresentationMode::mixed_anaphor_full_candidate_head;
  }
  throw FormatError("unknown representation mode: '" + std::string(name) + "'");
}

std::string_view format_representation_mode(RepresentationMode mode) {
  switch (mode) {
    case RepresentationMode::head_only: return "head_only";
    case RepresentationMode::head_plus_modifiers: return "head_plus_modifiers";
    case RepresentationMode::mixed_anaphor_full_candidate_head: return "mixed";
  }
  return "?";
}

std::string describe(const ResolutionConfig& config) {
  std::string out = "window=" + std::to_string(config.window_sentences);
  out += config.include_first_sentence ? " first_sentence=on" : " first_sentence=off";
  out += " suffix=" + std::string(format_suffix_policy(config.suffix_policy));
  out += " mode=" + std::string(format_representation_mode(config.representation_mode));
  out += " kinds=" + format_modifier_kinds(config.modifier_kinds);
  out += config.include_of_postmodifier ? " of_post=on" : " of_post=off";
  out += config.exclude_time_candidates ? " exclude_time=on" : " exclude_time=off";
  out += config.exclude_bridging_anaphor_candidates ? " exclude_anaphors=on"
                                                    : " exclude_anaphors=off";
  out += config.entity_expansion ? " expansion=on" : " expansion=off";
  out += config.fallback_unsuffixed ? " fallback=on" : " fallback=off";
  return out;
}

ContentWordSet anaphor_content_words(const NounPhrase& np,
                                     const ResolutionConfig& config) {
  const ModifierKindSet kinds =
      config.representation_mode == RepresentationMode::head_only
          ? ModifierKindSet::none()
          : config.modifier_kinds;
  ContentWordSet words =
      collect_content_words(np, kinds, config.include_of_postmodifier);
  return apply_suffix(std::move(words), np, config.suffix_policy,
                      MentionRole::anaphor);
}

ContentWordSet candidate_content_words(const NounPhrase& np,
                                       const ResolutionConfig& config) {
  const ModifierKindSet kinds =
      config.representation_mode == RepresentationMode::head_plus_modifiers
          ? config.modifier_kinds
          : ModifierKindSet::none();
  return collect_content_words(np, kinds, config.include_of_postmodifier);
}

namespace {

// Cosine that reports incomparable pairs as absent instead of throwing.
std::optional<double> comparable_cosine(VectorView u, VectorView v) {
  double dot = 0.0, norm_u = 0.0, norm_v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    norm_u += u[i] * u[i];
    norm_v += v[i] * v[i];
  }
  if (norm_u == 0.0 || norm_v == 0.0) {
    return std::nullopt;
  }
  return dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
}

std::vector<std::string> sort_closest_first(std::vector<const NounPhrase*> pool) {
  std::sort(pool.begin(), pool.end(), [](const NounPhrase* a, const NounPhrase* b) {
    return closer_to_anaphor(*a, *b);
  });
  std::vector<std::string> ids;
  ids.reserve(pool.size());
  for (const NounPhrase* np : pool) {
    ids.push_back(np->mention_id);
  }
  return ids;
}

}  // namespace

CandidateList build_candidates(const Document& doc, const NounPhrase& anaphor,
                               const ResolutionConfig& config) {
  const NounPhrase* own = doc.find_mention(anaphor.mention_id);
  if (!own) {
    throw StructuralError("anaphor '" + anaphor.mention_id +
                          "' is not a mention of doc '" + doc.doc_id + "'");
  }

  const std::size_t window_start =
      anaphor.sentence_index >= config.window_sentences
          ? anaphor.sentence_index - config.window_sentences
          : 0;

  std::vector<const NounPhrase*> pool;
  for (const NounPhrase& mention : doc.mentions) {
    if (mention.mention_id == anaphor.mention_id) continue;
    if (!precedes(mention, anaphor)) continue;
    const bool in_window = mention.sentence_index >= window_start &&
                           mention.sentence_index <= anaphor.sentence_index;
    const bool in_first = config.include_first_sentence && mention.sentence_index == 0;
    if (!in_window && !in_first) continue;
    if (config.exclude_bridging_anaphor_candidates && mention.is_bridging_anaphor) {
      continue;
    }
    if (config.exclude_time_candidates &&
        anaphor.semantic_type != SemanticType::time &&
        mention.semantic_type == SemanticType::time) {
      continue;
    }
    pool.push_back(&mention);
  }
  return {anaphor.mention_id, sort_closest_first(std::move(pool))};
}

CandidateList expand_entities(const CandidateList& candidates, const Document& doc) {
  const NounPhrase* anaphor = doc.find_mention(candidates.anaphor_id);
  if (!anaphor) {
    throw StructuralError("anaphor '" + candidates.anaphor_id +
                          "' is not a mention of doc '" + doc.doc_id + "'");
  }
  std::unordered_set<std::string> seen(candidates.candidates.begin(),
                                       candidates.candidates.end());
  std::vector<const NounPhrase*> pool;
  for (const std::string& id : candidates.candidates) {
    const NounPhrase* mention = doc.find_mention(id);
    if (!mention) continue;
    pool.push_back(mention);
    if (!mention->entity_id) continue;
    for (const std::string& other_id : doc.entity_mentions(*mention->entity_id)) {
      if (seen.contains(other_id)) continue;
      const NounPhrase* other = doc.find_mention(other_id);
      if (!other || !precedes(*other, *anaphor)) continue;
      seen.insert(other_id);
      pool.push_back(other);
    }
  }
  return {candidates.anaphor_id, sort_closest_first(std::move(pool))};
}

Prediction select_antecedent(VectorView anaphor_vec, const CandidateList& candidates,
                             const Document& doc, const EmbeddingTable& table,
                             const ResolutionConfig& config) {
  Prediction best{candidates.anaphor_id, std::nullopt, std::nullopt, std::nullopt};
  for (const std::string& id : candidates.candidates) {
    const NounPhrase* mention = doc.find_mention(id);
    if (!mention) continue;
    auto vec = np_vector(table, candidate_content_words(*mention, config),
                         config.fallback_unsuffixed);
    if (!vec) continue;
    auto score = comparable_cosine(anaphor_vec, *vec);
    if (!score) continue;
    if (!best.score || *score > *best.score) {
      best.predicted_mention_id = id;
      best.predicted_entity_id = mention->entity_id;
      best.score = score;
    }
  }
  return best;
}

std::vector<Prediction> resolve_document(const Document& doc,
                                         const EmbeddingTable& table,
                                         const ResolutionConfig& config) {
  std::vector<Prediction> predictions;
  predictions.reserve(doc.gold_links.size());
  for (const GoldLink& link : doc.gold_links) {
    const NounPhrase* anaphor = doc.find_mention(link.anaphor_id);
    if (!anaphor) {
      throw StructuralError("gold anaphor '" + link.anaphor_id +
                            "' is not a mention of doc '" + doc.doc_id + "'");
    }
    auto anaphor_vec = np_vector(table, anaphor_content_words(*anaphor, config),
                                 config.fallback_unsuffixed);
    if (!anaphor_vec) {
      predictions.push_back({link.anaphor_id, std::nullopt, std::nullopt, std::nullopt});
      continue;
    }
    CandidateList candidates = build_candidates(doc, *anaphor, config);
    if (config.entity_expansion) {
      candidates = expand_entities(candidates, doc);
    }
    predictions.push_back(
        select_antecedent(*anaphor_vec, candidates, doc, table, config));
  }
  return predictions;
}

}  // namespace bridging
