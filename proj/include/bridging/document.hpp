#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bridging/np_semantics.hpp"

namespace bridging {

// One gold bridging link: the anaphor mention and its antecedent entity.
struct GoldLink {
  std::string anaphor_id;
  std::string antecedent_entity_id;
  std::optional<std::string> relation;  // e.g. "set-of", "part-of", "other"
};

// A fully annotated document: tokenized sentences, the mention list, the
// coreference grouping of mentions into entities, and the gold bridging
// links. `validate()` enforces every structural invariant; loaders call it
// before handing documents out.
class Document {
 public:
  std::string doc_id;
  std::vector<std::vector<std::string>> sentences;
  std::vector<NounPhrase> mentions;
  std::unordered_map<std::string, std::vector<std::string>> entities;
  std::vector<GoldLink> gold_links;

  // Rebuilds the mention index and checks invariants: unique mention ids,
  // spans inside their sentences, comparative implies bridging, entity
  // membership a partition consistent with each mention's entity_id, gold
  // links naming bridging-anaphor mentions and known entities, one link per
  // anaphor. Throws ValidationError with the doc id and field path.
  void validate();

  const NounPhrase* find_mention(std::string_view mention_id) const;

  // Mentions of an entity, empty when the entity is unknown.
  const std::vector<std::string>& entity_mentions(std::string_view entity_id) const;

 private:
  std::unordered_map<std::string, std::size_t> mention_index_;
};

// Total order on mention positions: sentence, then span start, then span
// end. `precedes` is the strict "textually earlier" test used for candidate
// eligibility: an earlier sentence, or the same sentence and a strictly
// earlier start token.
bool precedes(const NounPhrase& mention, const NounPhrase& anaphor);

// Comparator for closest-first candidate ordering relative to an anaphor
// all candidates precede: later position first, mention id as final
// tie-break so the order is total and storage-independent.
bool closer_to_anaphor(const NounPhrase& a, const NounPhrase& b);

}  // namespace bridging
