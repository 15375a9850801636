#include "bridging/np_semantics.hpp"

#include <algorithm>

#include "bridging/errors.hpp"

namespace bridging {

bool ModifierKindSet::contains(ModifierKind kind) const {
  switch (kind) {
    case ModifierKind::common_noun: return common_noun;
    case ModifierKind::adjective: return adjective;
    case ModifierKind::ed_participle: return ed_participle;
    case ModifierKind::ing_participle: return ing_participle;
  }
  return false;
}

ModifierKindSet parse_modifier_kinds(std::string_view spec) {
  ModifierKindSet kinds;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string_view name = spec.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (name == "noun" || name == "common_noun") {
      kinds.common_noun = true;
    } else if (name == "adjective") {
      kinds.adjective = true;
    } else if (name == "ed_participle") {
      kinds.ed_participle = true;
    } else if (name == "ing_participle") {
      kinds.ing_participle = true;
    } else if (name == "participle") {
      kinds.ed_participle = true;
      kinds.ing_participle = true;
    } else if (name == "all") {
      kinds = ModifierKindSet::all();
    } else if (!name.empty() && name != "none") {
      throw FormatError("unknown modifier kind: '" + std::string(name) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return kinds;
}

std::string format_modifier_kinds(const ModifierKindSet& kinds) {
  if (kinds.empty()) return "none";
  std::string out;
  auto add = [&out](std::string_view name) {
    if (!out.empty()) out += ',';
    out += name;
  };
  if (kinds.common_noun) add("noun");
  if (kinds.adjective) add("adjective");
  if (kinds.ed_participle) add("ed_participle");
  if (kinds.ing_participle) add("ing_participle");
  return out;
}

SuffixPolicy parse_suffix_policy(std::string_view name) {
  if (name == "isnotes") return SuffixPolicy::isnotes;
  if (name == "bashi") return SuffixPolicy::bashi;
  if (name == "arrau") return SuffixPolicy::arrau;
  throw FormatError("unknown suffix policy: '" + std::string(name) + "'");
}

std::string_view format_suffix_policy(SuffixPolicy policy) {
  switch (policy) {
    case SuffixPolicy::isnotes: return "isnotes";
    case SuffixPolicy::bashi: return "bashi";
    case SuffixPolicy::arrau: return "arrau";
  }
  return "?";
}

namespace {

void append_selected(const std::vector<Premodifier>& premodifiers,
                     const ModifierKindSet& kinds, ContentWordSet& out) {
  for (const Premodifier& mod : premodifiers) {
    if (kinds.contains(mod.kind)) {
      out.push_back(mod.lemma);
    }
  }
}

bool has_pp_suffix(std::string_view token) {
  return token.size() > kPpSuffix.size() && token.ends_with(kPpSuffix);
}

}  // namespace

ContentWordSet collect_content_words(const NounPhrase& np,
                                     const ModifierKindSet& modifier_kinds,
                                     bool include_of_postmodifier) {
  ContentWordSet words;
  append_selected(np.premodifiers, modifier_kinds, words);
  words.push_back(np.head_lemma);
  if (include_of_postmodifier && np.of_postmodifier) {
    append_selected(np.of_postmodifier->premodifiers, modifier_kinds, words);
    words.push_back(np.of_postmodifier->head_lemma);
  }
  return words;
}

ContentWordSet apply_suffix(ContentWordSet words, const NounPhrase& np,
                            SuffixPolicy policy, MentionRole role) {
  if (role != MentionRole::anaphor) return words;
  if (!np.is_bridging_anaphor || np.semantic_type == SemanticType::time) return words;
  if (policy == SuffixPolicy::arrau) return words;
  if (policy == SuffixPolicy::bashi && np.is_comparative_anaphor) return words;
  for (std::string& token : words) {
    if (!has_pp_suffix(token)) {
      token += kPpSuffix;
    }
  }
  return words;
}

std::optional<WordVector> np_vector(const EmbeddingTable& table,
                                    const ContentWordSet& words,
                                    bool fallback_unsuffixed) {
  WordVector sum(table.dimension(), 0.0);
  std::size_t resolved = 0;
  for (const std::string& token : words) {
    auto vec = table.lookup(token);
    if (!vec && fallback_unsuffixed && has_pp_suffix(token)) {
      vec = table.lookup(
          std::string_view(token).substr(0, token.size() - kPpSuffix.size()));
    }
    if (!vec) {
      continue;
    }
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += (*vec)[i];
    }
    ++resolved;
  }
  if (resolved == 0) {
    return std::nullopt;
  }
  for (double& x : sum) {
    x /= static_cast<double>(resolved);
  }
  return sum;
}

std::optional<std::pair<std::string, std::string>> extract_noun_pair(
    const NpStructure& np_structure) {
  if (np_structure.relation == NpStructureRelation::none) {
    return std::nullopt;
  }
  return std::make_pair(np_structure.head_lemma + std::string(kPpSuffix),
                        np_structure.modifier_head_lemma);
}

}  // namespace bridging
