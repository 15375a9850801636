#include "bridging/document.hpp"

#include <tuple>
#include <unordered_set>

#include "bridging/errors.hpp"

namespace bridging {

namespace {

[[noreturn]] void fail(const std::string& doc_id, const std::string& path,
                       const std::string& what) {
  throw ValidationError("doc '" + doc_id + "': " + path + ": " + what);
}

std::tuple<std::size_t, std::size_t, std::size_t> position(const NounPhrase& np) {
  return {np.sentence_index, np.span_start, np.span_end};
}

}  // namespace

void Document::validate() {
  mention_index_.clear();
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const NounPhrase& np = mentions[i];
    const std::string path = "mentions[" + std::to_string(i) + "]";
    if (np.mention_id.empty()) {
      fail(doc_id, path + ".id", "empty mention id");
    }
    if (!mention_index_.emplace(np.mention_id, i).second) {
      fail(doc_id, path + ".id", "duplicate mention id '" + np.mention_id + "'");
    }
    if (np.head_lemma.empty()) {
      fail(doc_id, path + ".head", "empty head lemma");
    }
    if (np.sentence_index >= sentences.size()) {
      fail(doc_id, path + ".sentence",
           "sentence index " + std::to_string(np.sentence_index) + " out of range");
    }
    if (np.span_start >= np.span_end ||
        np.span_end > sentences[np.sentence_index].size()) {
      fail(doc_id, path + ".span", "span [" + std::to_string(np.span_start) + ", " +
                                       std::to_string(np.span_end) +
                                       ") outside its sentence");
    }
    if (np.is_comparative_anaphor && !np.is_bridging_anaphor) {
      fail(doc_id, path, "comparative anaphor must be a bridging anaphor");
    }
    for (const Premodifier& mod : np.premodifiers) {
      if (mod.lemma.empty()) {
        fail(doc_id, path + ".premodifiers", "empty premodifier lemma");
      }
    }
    if (np.of_postmodifier && np.of_postmodifier->head_lemma.empty()) {
      fail(doc_id, path + ".of_postmodifier.head", "empty head lemma");
    }
  }

  // Entity grouping must partition the mentions that carry an entity id.
  std::unordered_set<std::string> grouped;
  for (const auto& [entity_id, members] : entities) {
    const std::string path = "entities['" + entity_id + "']";
    for (const std::string& member : members) {
      auto it = mention_index_.find(member);
      if (it == mention_index_.end()) {
        fail(doc_id, path, "unknown mention '" + member + "'");
      }
      const NounPhrase& np = mentions[it->second];
      if (!np.entity_id || *np.entity_id != entity_id) {
        fail(doc_id, path,
             "mention '" + member + "' does not carry this entity id");
      }
      if (!grouped.insert(member).second) {
        fail(doc_id, path, "mention '" + member + "' grouped twice");
      }
    }
  }
  for (const NounPhrase& np : mentions) {
    if (np.entity_id && !grouped.contains(np.mention_id)) {
      fail(doc_id, "entities",
           "mention '" + np.mention_id + "' carries entity '" + *np.entity_id +
               "' but is not grouped under it");
    }
  }

  std::unordered_set<std::string> linked;
  for (std::size_t i = 0; i < gold_links.size(); ++i) {
    const GoldLink& link = gold_links[i];
    const std::string path = "gold_links[" + std::to_string(i) + "]";
    const NounPhrase* anaphor = find_mention(link.anaphor_id);
    if (!anaphor) {
      fail(doc_id, path + ".anaphor", "unknown mention '" + link.anaphor_id + "'");
    }
    if (!anaphor->is_bridging_anaphor) {
      fail(doc_id, path + ".anaphor",
           "mention '" + link.anaphor_id + "' is not flagged as a bridging anaphor");
    }
    if (!entities.contains(link.antecedent_entity_id)) {
      fail(doc_id, path + ".entity",
           "unknown entity '" + link.antecedent_entity_id + "'");
    }
    if (!linked.insert(link.anaphor_id).second) {
      fail(doc_id, path + ".anaphor",
           "anaphor '" + link.anaphor_id + "' has more than one gold link");
    }
  }
}

const NounPhrase* Document::find_mention(std::string_view mention_id) const {
  auto it = mention_index_.find(std::string(mention_id));
  return it == mention_index_.end() ? nullptr : &mentions[it->second];
}

const std::vector<std::string>& Document::entity_mentions(
    std::string_view entity_id) const {
  static const std::vector<std::string> kEmpty;
  auto it = entities.find(std::string(entity_id));
  return it == entities.end() ? kEmpty : it->second;
}

bool precedes(const NounPhrase& mention, const NounPhrase& anaphor) {
  if (mention.sentence_index != anaphor.sentence_index) {
    return mention.sentence_index < anaphor.sentence_index;
  }
  return mention.span_start < anaphor.span_start;
}

bool closer_to_anaphor(const NounPhrase& a, const NounPhrase& b) {
  if (position(a) != position(b)) {
    return position(a) > position(b);
  }
  return a.mention_id < b.mention_id;
}

}  // namespace bridging
