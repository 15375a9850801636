#include "bridging/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "bridging/errors.hpp"

namespace bridging {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

ModifierKind parse_kind(const std::string& name, const std::string& where) {
  if (name == "common_noun") return ModifierKind::common_noun;
  if (name == "adjective") return ModifierKind::adjective;
  if (name == "ed_participle") return ModifierKind::ed_participle;
  if (name == "ing_participle") return ModifierKind::ing_participle;
  throw FormatError(where + ": unknown modifier kind '" + name + "'");
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw FormatError(where + ": missing field '" + key + "'");
  }
  return *it;
}

std::vector<Premodifier> parse_premodifiers(const json& arr, const std::string& where) {
  std::vector<Premodifier> out;
  out.reserve(arr.size());
  for (const json& p : arr) {
    Premodifier mod;
    mod.lemma = require(p, "lemma", where).get<std::string>();
    mod.kind = parse_kind(require(p, "kind", where).get<std::string>(), where);
    out.push_back(std::move(mod));
  }
  return out;
}

NounPhrase parse_mention(const json& m, const std::string& doc_id) {
  NounPhrase np;
  np.mention_id = require(m, "id", doc_id + ": mention").get<std::string>();
  const std::string where = doc_id + ": mention '" + np.mention_id + "'";
  np.sentence_index = require(m, "sentence", where).get<std::size_t>();
  const json& span = require(m, "span", where);
  if (!span.is_array() || span.size() != 2) {
    throw FormatError(where + ": span must be [start, end]");
  }
  np.span_start = span[0].get<std::size_t>();
  np.span_end = span[1].get<std::size_t>();
  np.head_lemma = require(m, "head", where).get<std::string>();
  if (m.contains("premodifiers")) {
    np.premodifiers = parse_premodifiers(m.at("premodifiers"), where);
  }
  if (m.contains("of_postmodifier") && !m.at("of_postmodifier").is_null()) {
    const json& post = m.at("of_postmodifier");
    OfPostmodifier of;
    of.head_lemma = require(post, "head", where + ".of_postmodifier").get<std::string>();
    if (post.contains("premodifiers")) {
      of.premodifiers =
          parse_premodifiers(post.at("premodifiers"), where + ".of_postmodifier");
    }
    np.of_postmodifier = std::move(of);
  }
  const std::string sem = m.value("semantic_type", std::string("other"));
  if (sem == "time") {
    np.semantic_type = SemanticType::time;
  } else if (sem == "other") {
    np.semantic_type = SemanticType::other;
  } else {
    throw FormatError(where + ": semantic_type must be 'time' or 'other'");
  }
  np.is_bridging_anaphor = m.value("bridging_anaphor", false);
  np.is_comparative_anaphor = m.value("comparative_anaphor", false);
  if (m.contains("entity") && !m.at("entity").is_null()) {
    np.entity_id = m.at("entity").get<std::string>();
  }
  return np;
}

Document parse_document(const json& d) {
  Document doc;
  doc.doc_id = require(d, "doc_id", "document").get<std::string>();
  for (const json& sent : require(d, "sentences", doc.doc_id)) {
    std::vector<std::string> tokens;
    tokens.reserve(sent.size());
    for (const json& tok : sent) {
      tokens.push_back(tok.get<std::string>());
    }
    doc.sentences.push_back(std::move(tokens));
  }
  for (const json& m : require(d, "mentions", doc.doc_id)) {
    doc.mentions.push_back(parse_mention(m, doc.doc_id));
  }
  if (d.contains("entities")) {
    for (const auto& [entity_id, members] : d.at("entities").items()) {
      std::vector<std::string> ids;
      for (const json& id : members) {
        ids.push_back(id.get<std::string>());
      }
      doc.entities.emplace(entity_id, std::move(ids));
    }
  } else {
    // Derive the grouping from the mentions' own entity ids.
    for (const NounPhrase& np : doc.mentions) {
      if (np.entity_id) {
        doc.entities[*np.entity_id].push_back(np.mention_id);
      }
    }
  }
  for (const json& g : require(d, "gold_links", doc.doc_id)) {
    GoldLink link;
    link.anaphor_id = require(g, "anaphor", doc.doc_id + ": gold link").get<std::string>();
    link.antecedent_entity_id =
        require(g, "antecedent_entity", doc.doc_id + ": gold link").get<std::string>();
    if (g.contains("relation") && !g.at("relation").is_null()) {
      link.relation = g.at("relation").get<std::string>();
    }
    doc.gold_links.push_back(std::move(link));
  }
  return doc;
}

}  // namespace

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus: " + path.string());
  }
  std::vector<Document> docs;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    Document doc;
    try {
      doc = parse_document(json::parse(line));
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen_ids.insert(doc.doc_id).second) {
      throw ValidationError("duplicate doc_id '" + doc.doc_id + "' at line " +
                            std::to_string(line_no));
    }
    doc.validate();
    docs.push_back(std::move(doc));
  }
  return docs;
}

ExperimentReport score(const std::vector<DocumentPredictions>& predictions,
                       const std::vector<Document>& docs,
                       std::string config_summary) {
  std::unordered_map<std::string, const DocumentPredictions*> by_doc;
  for (const DocumentPredictions& dp : predictions) {
    if (!by_doc.emplace(dp.doc_id, &dp).second) {
      throw ValidationError("predictions list doc '" + dp.doc_id + "' twice");
    }
  }
  std::unordered_set<std::string> known_docs;
  for (const Document& doc : docs) known_docs.insert(doc.doc_id);
  for (const DocumentPredictions& dp : predictions) {
    if (!known_docs.count(dp.doc_id)) {
      throw ValidationError("predictions for unknown doc '" + dp.doc_id + "'");
    }
  }

  ExperimentReport report;
  report.config_summary = std::move(config_summary);
  std::map<std::string, std::pair<std::size_t, std::size_t>> relation_counts;
  for (const Document& doc : docs) {
    auto found = by_doc.find(doc.doc_id);
    if (found == by_doc.end()) {
      if (doc.gold_links.empty()) continue;
      throw ValidationError("no predictions for doc '" + doc.doc_id + "'");
    }
    const DocumentPredictions& dp = *found->second;
    if (dp.predictions.size() != doc.gold_links.size()) {
      throw ValidationError("doc '" + doc.doc_id + "': " +
                            std::to_string(dp.predictions.size()) +
                            " predictions for " +
                            std::to_string(doc.gold_links.size()) + " gold anaphors");
    }
    std::unordered_map<std::string, const Prediction*> by_anaphor;
    for (const Prediction& p : dp.predictions) {
      if (!by_anaphor.emplace(p.anaphor_id, &p).second) {
        throw ValidationError("doc '" + doc.doc_id + "': two predictions for anaphor '" +
                              p.anaphor_id + "'");
      }
    }
    for (const GoldLink& link : doc.gold_links) {
      auto pred = by_anaphor.find(link.anaphor_id);
      if (pred == by_anaphor.end()) {
        throw ValidationError("doc '" + doc.doc_id + "': no prediction for anaphor '" +
                              link.anaphor_id + "'");
      }
      const bool correct =
          pred->second->predicted_entity_id.has_value() &&
          *pred->second->predicted_entity_id == link.antecedent_entity_id;
      ++report.total_anaphors;
      if (correct) ++report.resolved_count;
      if (link.relation) {
        auto& [rel_correct, rel_total] = relation_counts[*link.relation];
        ++rel_total;
        if (correct) ++rel_correct;
      }
    }
  }
  report.accuracy = report.total_anaphors == 0
                        ? 0.0
                        : static_cast<double>(report.resolved_count) /
                              static_cast<double>(report.total_anaphors);
  if (!relation_counts.empty()) {
    std::map<std::string, double> per_relation;
    for (const auto& [relation, counts] : relation_counts) {
      per_relation[relation] =
          static_cast<double>(counts.first) / static_cast<double>(counts.second);
    }
    report.per_relation_accuracy = std::move(per_relation);
  }
  return report;
}

std::vector<DocumentPredictions> resolve_corpus(const std::vector<Document>& docs,
                                                const EmbeddingTable& table,
                                                const ResolutionConfig& config,
                                                std::size_t jobs) {
  std::vector<DocumentPredictions> results(docs.size());
  if (jobs == 0) jobs = 1;
  jobs = std::min(jobs, docs.size() == 0 ? std::size_t{1} : docs.size());

  auto run_slot = [&](std::size_t i) {
    results[i].doc_id = docs[i].doc_id;
    results[i].predictions = resolve_document(docs[i], table, config);
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) run_slot(i);
    return results;
  }

  std::vector<std::exception_ptr> failures(docs.size());
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < docs.size(); i += jobs) {
        try {
          run_slot(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return results;
}

std::vector<ExperimentReport> ablation_run(
    const std::vector<Document>& docs, const EmbeddingTable& table,
    const ResolutionConfig& base_config,
    const std::vector<ModifierKindSet>& modifier_subsets, std::size_t jobs) {
  std::vector<ExperimentReport> reports;
  reports.reserve(modifier_subsets.size());
  for (const ModifierKindSet& subset : modifier_subsets) {
    ResolutionConfig config = base_config;
    config.representation_mode = RepresentationMode::head_plus_modifiers;
    config.modifier_kinds = subset;
    reports.push_back(
        score(resolve_corpus(docs, table, config, jobs), docs, describe(config)));
  }
  return reports;
}

ResolutionConfig preset_config(std::string_view name) {
  ResolutionConfig config;  // defaults equal isnotes_full
  if (name == "isnotes_full") {
    return config;
  }
  if (name == "isnotes_head") {
    config.representation_mode = RepresentationMode::head_only;
    config.modifier_kinds = ModifierKindSet::none();
    config.include_of_postmodifier = false;
    return config;
  }
  if (name == "isnotes_mixed") {
    config.representation_mode = RepresentationMode::mixed_anaphor_full_candidate_head;
    return config;
  }
  if (name == "bashi") {
    config.include_first_sentence = false;
    config.suffix_policy = SuffixPolicy::bashi;
    return config;
  }
  if (name == "arrau_rst") {
    config.window_sentences = 10;
    config.include_first_sentence = false;
    config.suffix_policy = SuffixPolicy::arrau;
    return config;
  }
  throw NotFoundError("unknown preset '" + std::string(name) +
                      "' (expected isnotes_head, isnotes_full, isnotes_mixed, "
                      "bashi, or arrau_rst)");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "isnotes_head", "isnotes_full", "isnotes_mixed", "bashi", "arrau_rst"};
  return names;
}

CoverageStats antecedent_coverage(const std::vector<Document>& docs,
                                  const ResolutionConfig& config) {
  CoverageStats stats;
  for (const Document& doc : docs) {
    for (const GoldLink& link : doc.gold_links) {
      const NounPhrase* anaphor = doc.find_mention(link.anaphor_id);
      CandidateList candidates = build_candidates(doc, *anaphor, config);
      if (config.entity_expansion) {
        candidates = expand_entities(candidates, doc);
      }
      ++stats.total;
      for (const std::string& id : candidates.candidates) {
        const NounPhrase* candidate = doc.find_mention(id);
        if (candidate && candidate->entity_id &&
            *candidate->entity_id == link.antecedent_entity_id) {
          ++stats.covered;
          break;
        }
      }
    }
  }
  return stats;
}

void write_predictions(const std::filesystem::path& path,
                       const std::vector<DocumentPredictions>& predictions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open file for writing: " + path.string());
  }
  for (const DocumentPredictions& dp : predictions) {
    for (const Prediction& p : dp.predictions) {
      out << dp.doc_id << '\t' << p.anaphor_id << '\t'
          << p.predicted_mention_id.value_or("-") << '\t'
          << p.predicted_entity_id.value_or("-") << '\t'
          << (p.score ? format_double(*p.score) : std::string("-")) << '\n';
    }
  }
  if (!out) {
    throw IoError("write failure on file: " + path.string());
  }
}

std::vector<DocumentPredictions> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open predictions: " + path.string());
  }
  std::vector<DocumentPredictions> out;
  std::unordered_map<std::string, std::size_t> doc_slot;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string, 5> fields;
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        if (field >= fields.size()) {
          throw FormatError("line " + std::to_string(line_no) +
                            ": expected 5 tab-separated fields");
        }
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != fields.size()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected 5 tab-separated fields");
    }
    Prediction p;
    p.anaphor_id = fields[1];
    if (fields[2] != "-") p.predicted_mention_id = fields[2];
    if (fields[3] != "-") p.predicted_entity_id = fields[3];
    if (fields[4] != "-") {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(fields[4].data(),
                                       fields[4].data() + fields[4].size(), value);
      if (ec != std::errc{} || ptr != fields[4].data() + fields[4].size()) {
        throw FormatError("line " + std::to_string(line_no) + ": bad score '" +
                          fields[4] + "'");
      }
      p.score = value;
    }
    auto [slot, inserted] = doc_slot.emplace(fields[0], out.size());
    if (inserted) {
      out.push_back({fields[0], {}});
    }
    out[slot->second].predictions.push_back(std::move(p));
  }
  return out;
}

std::string format_report(const ExperimentReport& report) {
  std::ostringstream out;
  if (!report.config_summary.empty()) {
    out << "config            " << report.config_summary << '\n';
  }
  out << "total_anaphors    " << report.total_anaphors << '\n';
  out << "resolved_count    " << report.resolved_count << '\n';
  out << "accuracy          " << format_double(report.accuracy) << "  ("
      << format_double(report.accuracy * 100.0) << "%)\n";
  if (report.per_relation_accuracy) {
    for (const auto& [relation, accuracy] : *report.per_relation_accuracy) {
      out << "accuracy[" << relation << "]  " << format_double(accuracy) << '\n';
    }
  }
  return out.str();
}

std::string report_to_json(const ExperimentReport& report) {
  json j = json::object();
  j["config"] = report.config_summary;
  j["total_anaphors"] = report.total_anaphors;
  j["resolved_count"] = report.resolved_count;
  j["accuracy"] = report.accuracy;
  if (report.per_relation_accuracy) {
    json rel = json::object();
    for (const auto& [relation, accuracy] : *report.per_relation_accuracy) {
      rel[relation] = accuracy;
    }
    j["per_relation_accuracy"] = rel;
  }
  return j.dump();
}

}  // namespace bridging
