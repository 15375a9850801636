#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "bridging/corpus.hpp"
#include "bridging/errors.hpp"

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace bridging;

namespace {

NounPhrase mention(std::string id, std::size_t sentence, std::size_t start,
                   std::size_t end, std::string head,
                   std::optional<std::string> entity = std::nullopt) {
  NounPhrase np;
  np.mention_id = std::move(id);
  np.sentence_index = sentence;
  np.span_start = start;
  np.span_end = end;
  np.head_lemma = std::move(head);
  np.entity_id = std::move(entity);
  return np;
}

// Two documents with three gold anaphors between them. Doc "a" carries
// relation labels, doc "b" does not.
std::vector<Document> two_docs() {
  Document a;
  a.doc_id = "a";
  a.sentences.assign(3, {"t0", "t1", "t2", "t3"});
  a.mentions = {
      mention("a_m1", 0, 0, 1, "house", "e1"),
      mention("a_m2", 0, 2, 3, "roof", "e1"),
      mention("a_m3", 1, 0, 1, "tree", "e2"),
      mention("a_x1", 1, 2, 3, "door"),
      mention("a_x2", 2, 0, 1, "leaf"),
  };
  a.mentions[3].is_bridging_anaphor = true;
  a.mentions[4].is_bridging_anaphor = true;
  a.gold_links = {{"a_x1", "e1", "part-of"}, {"a_x2", "e2", "set-of"}};

  Document b;
  b.doc_id = "b";
  b.sentences.assign(2, {"t0", "t1", "t2"});
  b.mentions = {
      mention("b_m1", 0, 0, 1, "band", "f1"),
      mention("b_x1", 1, 0, 1, "drummer"),
  };
  b.mentions[1].is_bridging_anaphor = true;
  b.gold_links = {{"b_x1", "f1", std::nullopt}};

  std::vector<Document> docs;
  for (Document* d : {&a, &b}) {
    for (const NounPhrase& np : d->mentions) {
      if (np.entity_id) d->entities[*np.entity_id].push_back(np.mention_id);
    }
    d->validate();
    docs.push_back(std::move(*d));
  }
  return docs;
}

Prediction predict(std::string anaphor, std::optional<std::string> mention_id,
                   std::optional<std::string> entity,
                   std::optional<double> score) {
  return Prediction{std::move(anaphor), std::move(mention_id), std::move(entity),
                    score};
}

std::vector<DocumentPredictions> all_correct() {
  return {
      {"a", {predict("a_x1", "a_m2", "e1", 0.75), predict("a_x2", "a_m3", "e2", 0.5)}},
      {"b", {predict("b_x1", "b_m1", "f1", 0.25)}},
  };
}

}  // namespace

TEST_CASE("load_corpus") {
  testsupport::TempDir dir;

  SUBCASE("reads documents, one JSON object per line") {
    const auto path = dir.write(
        "corpus.jsonl",
        R"({"doc_id": "d1", "sentences": [["the", "old", "mill", "runs"], ["its", "wheel", "turns"]], "mentions": [{"id": "m1", "sentence": 0, "span": [0, 3], "head": "mill", "premodifiers": [{"lemma": "old", "kind": "adjective"}], "entity": "e1"}, {"id": "m2", "sentence": 1, "span": [0, 2], "head": "wheel", "bridging_anaphor": true, "of_postmodifier": {"head": "wood", "premodifiers": [{"lemma": "oiled", "kind": "ed_participle"}]}}], "entities": {"e1": ["m1"]}, "gold_links": [{"anaphor": "m2", "antecedent_entity": "e1", "relation": "part-of"}]})"
        "\n"
        "\n"
        R"({"doc_id": "d2", "sentences": [["march", "was", "wet"]], "mentions": [{"id": "n1", "sentence": 0, "span": [0, 1], "head": "march", "semantic_type": "time", "entity": "t1"}], "gold_links": []})"
        "\n");
    const std::vector<Document> docs = load_corpus(path);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == "d1");

    const NounPhrase* m1 = docs[0].find_mention("m1");
    REQUIRE(m1 != nullptr);
    CHECK(m1->premodifiers ==
          std::vector<Premodifier>{{"old", ModifierKind::adjective}});
    CHECK(m1->entity_id == "e1");
    CHECK_FALSE(m1->is_bridging_anaphor);

    const NounPhrase* m2 = docs[0].find_mention("m2");
    REQUIRE(m2 != nullptr);
    CHECK(m2->is_bridging_anaphor);
    REQUIRE(m2->of_postmodifier.has_value());
    CHECK(m2->of_postmodifier->head_lemma == "wood");
    CHECK(m2->of_postmodifier->premodifiers ==
          std::vector<Premodifier>{{"oiled", ModifierKind::ed_participle}});
    CHECK_FALSE(m2->entity_id.has_value());

    REQUIRE(docs[0].gold_links.size() == 1);
    CHECK(docs[0].gold_links[0].anaphor_id == "m2");
    CHECK(docs[0].gold_links[0].antecedent_entity_id == "e1");
    CHECK(docs[0].gold_links[0].relation == "part-of");

    // Second document: entities derived from the mentions' own ids.
    CHECK(docs[1].find_mention("n1")->semantic_type == SemanticType::time);
    CHECK(docs[1].entity_mentions("t1") == std::vector<std::string>{"n1"});
  }

  SUBCASE("broken JSON reports the line number") {
    const auto path = dir.write(
        "broken.jsonl",
        R"({"doc_id": "ok", "sentences": [["x"]], "mentions": [], "gold_links": []})"
        "\n{not json\n");
    try {
      load_corpus(path);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  SUBCASE("missing fields name the document and mention") {
    const auto path = dir.write(
        "missing.jsonl",
        R"({"doc_id": "d9", "sentences": [["x"]], "mentions": [{"id": "m1", "sentence": 0, "span": [0, 1]}], "gold_links": []})"
        "\n");
    try {
      load_corpus(path);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      const std::string what = e.what();
      CHECK(what.find("m1") != std::string::npos);
      CHECK(what.find("head") != std::string::npos);
    }
  }

  SUBCASE("duplicate doc ids are rejected") {
    const std::string doc =
        R"({"doc_id": "twin", "sentences": [["x"]], "mentions": [], "gold_links": []})";
    const auto path = dir.write("dup.jsonl", doc + "\n" + doc + "\n");
    CHECK_THROWS_AS(load_corpus(path), ValidationError);
  }

  SUBCASE("invariant violations surface as validation errors") {
    const auto path = dir.write(
        "invalid.jsonl",
        R"({"doc_id": "bad", "sentences": [["x", "y"]], "mentions": [{"id": "m1", "sentence": 0, "span": [0, 1], "head": "x"}], "gold_links": [{"anaphor": "m1", "antecedent_entity": "e1"}]})"
        "\n");
    // m1 is not flagged as a bridging anaphor and e1 does not exist.
    CHECK_THROWS_AS(load_corpus(path), ValidationError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_corpus(dir.path() / "absent.jsonl"), IoError);
  }
}

TEST_CASE("score") {
  const std::vector<Document> docs = two_docs();

  SUBCASE("all correct") {
    const ExperimentReport report = score(all_correct(), docs, "cfg");
    CHECK(report.config_summary == "cfg");
    CHECK(report.total_anaphors == 3);
    CHECK(report.resolved_count == 3);
    CHECK(report.accuracy == 1.0);
    REQUIRE(report.per_relation_accuracy.has_value());
    CHECK(report.per_relation_accuracy->at("part-of") == 1.0);
    CHECK(report.per_relation_accuracy->at("set-of") == 1.0);
  }

  SUBCASE("absent and wrong predictions count as incorrect") {
    auto predictions = all_correct();
    predictions[0].predictions[0] = predict("a_x1", std::nullopt, std::nullopt,
                                            std::nullopt);
    predictions[1].predictions[0] = predict("b_x1", "b_m1", "wrong", 0.9);
    const ExperimentReport report = score(predictions, docs);
    CHECK(report.total_anaphors == 3);
    CHECK(report.resolved_count == 1);
    CHECK(report.accuracy == doctest::Approx(1.0 / 3.0));
    CHECK(report.per_relation_accuracy->at("part-of") == 0.0);
    CHECK(report.per_relation_accuracy->at("set-of") == 1.0);
  }

  SUBCASE("matching is at the entity level") {
    auto predictions = all_correct();
    // A different mention of the same entity is still a hit.
    predictions[0].predictions[0] = predict("a_x1", "a_m1", "e1", 0.1);
    CHECK(score(predictions, docs).resolved_count == 3);
  }

  SUBCASE("prediction order does not matter") {
    auto predictions = all_correct();
    std::swap(predictions[0].predictions[0], predictions[0].predictions[1]);
    std::swap(predictions[0], predictions[1]);
    const ExperimentReport report = score(predictions, docs);
    CHECK(report.resolved_count == 3);
    CHECK(report.accuracy == 1.0);
  }

  SUBCASE("documents without gold anaphors need no predictions") {
    std::vector<Document> extended = docs;
    Document quiet;
    quiet.doc_id = "quiet";
    quiet.sentences = {{"t0"}};
    quiet.validate();
    extended.push_back(std::move(quiet));
    CHECK(score(all_correct(), extended).total_anaphors == 3);
  }

  SUBCASE("no gold links anywhere") {
    std::vector<Document> empty_docs(1);
    empty_docs[0].doc_id = "only";
    empty_docs[0].sentences = {{"t0"}};
    empty_docs[0].validate();
    const ExperimentReport report = score({}, empty_docs);
    CHECK(report.total_anaphors == 0);
    CHECK(report.accuracy == 0.0);
    CHECK_FALSE(report.per_relation_accuracy.has_value());
  }

  SUBCASE("cardinality violations") {
    auto duplicated_doc = all_correct();
    duplicated_doc.push_back(duplicated_doc[0]);
    CHECK_THROWS_AS(score(duplicated_doc, docs), ValidationError);

    auto unknown_doc = all_correct();
    unknown_doc.push_back({"ghost", {}});
    CHECK_THROWS_AS(score(unknown_doc, docs), ValidationError);

    auto missing_doc = all_correct();
    missing_doc.pop_back();
    CHECK_THROWS_AS(score(missing_doc, docs), ValidationError);

    auto short_doc = all_correct();
    short_doc[0].predictions.pop_back();
    CHECK_THROWS_AS(score(short_doc, docs), ValidationError);

    auto duplicate_anaphor = all_correct();
    duplicate_anaphor[0].predictions[1].anaphor_id = "a_x1";
    CHECK_THROWS_AS(score(duplicate_anaphor, docs), ValidationError);

    auto wrong_anaphor = all_correct();
    wrong_anaphor[0].predictions[1].anaphor_id = "a_zz";
    CHECK_THROWS_AS(score(wrong_anaphor, docs), ValidationError);
  }
}

TEST_CASE("preset configurations") {
  CHECK(preset_config("isnotes_full") == ResolutionConfig{});

  const ResolutionConfig head = preset_config("isnotes_head");
  CHECK(head.representation_mode == RepresentationMode::head_only);
  CHECK(head.modifier_kinds == ModifierKindSet::none());
  CHECK_FALSE(head.include_of_postmodifier);
  CHECK(head.window_sentences == 2);
  CHECK(head.include_first_sentence);

  CHECK(preset_config("isnotes_mixed").representation_mode ==
        RepresentationMode::mixed_anaphor_full_candidate_head);

  const ResolutionConfig bashi = preset_config("bashi");
  CHECK_FALSE(bashi.include_first_sentence);
  CHECK(bashi.suffix_policy == SuffixPolicy::bashi);
  CHECK(bashi.window_sentences == 2);

  const ResolutionConfig arrau = preset_config("arrau_rst");
  CHECK(arrau.window_sentences == 10);
  CHECK_FALSE(arrau.include_first_sentence);
  CHECK(arrau.suffix_policy == SuffixPolicy::arrau);

  CHECK(preset_names().size() == 5);
  for (const std::string& name : preset_names()) {
    CHECK_NOTHROW(preset_config(name));
  }
  CHECK_THROWS_AS(preset_config("isnotes"), NotFoundError);
}

TEST_CASE("resolve_corpus is independent of the job count") {
  std::mt19937 rng(550);
  std::vector<synthetic::Case> cases;
  std::vector<Document> docs;
  for (int i = 0; i < 9; ++i) {
    cases.push_back(synthetic::make_case(rng));
    cases.back().doc.doc_id = "doc" + std::to_string(i);
    docs.push_back(cases.back().doc);
  }
  // One shared table covers every case's vocabulary by construction.
  const EmbeddingTable& table = cases.front().table;
  const ResolutionConfig config = preset_config("isnotes_full");

  const auto serial = resolve_corpus(docs, table, config, 1);
  REQUIRE(serial.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(serial[i].doc_id == docs[i].doc_id);
    CHECK(serial[i].predictions.size() == docs[i].gold_links.size());
  }

  for (std::size_t jobs : {std::size_t{2}, std::size_t{3}, std::size_t{16}}) {
    const auto parallel = resolve_corpus(docs, table, config, jobs);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(parallel[i].doc_id == serial[i].doc_id);
      REQUIRE(parallel[i].predictions.size() == serial[i].predictions.size());
      for (std::size_t j = 0; j < serial[i].predictions.size(); ++j) {
        CHECK(synthetic::same_prediction(parallel[i].predictions[j],
                                         serial[i].predictions[j]));
      }
    }
  }
}

TEST_CASE("ablation over modifier subsets") {
  std::mt19937 rng(661);
  synthetic::Case c = synthetic::make_case(rng);
  const std::vector<Document> docs = {c.doc};

  const ResolutionConfig base = preset_config("isnotes_full");
  const std::vector<ModifierKindSet> subsets = {
      ModifierKindSet::none(),
      ModifierKindSet{true, false, false, false},
      ModifierKindSet::all(),
  };
  const std::vector<ExperimentReport> reports =
      ablation_run(docs, c.table, base, subsets);
  REQUIRE(reports.size() == subsets.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(reports[i].total_anaphors == docs[0].gold_links.size());
    CHECK(reports[i].config_summary.find(format_modifier_kinds(subsets[i])) !=
          std::string::npos);
  }

  // The empty subset must reproduce the head-only run, modifiers stripped
  // from mentions but the of-phrase handling untouched.
  ResolutionConfig head_only = base;
  head_only.representation_mode = RepresentationMode::head_only;
  const ExperimentReport direct =
      score(resolve_corpus(docs, c.table, head_only), docs);
  CHECK(reports[0].resolved_count == direct.resolved_count);
  CHECK(reports[0].accuracy == direct.accuracy);

  // The full subset reproduces the base config itself.
  const ExperimentReport full = score(resolve_corpus(docs, c.table, base), docs);
  CHECK(reports[2].resolved_count == full.resolved_count);
}

TEST_CASE("antecedent_coverage") {
  Document doc;
  doc.doc_id = "cov";
  doc.sentences.assign(8, {"t0", "t1", "t2"});
  doc.mentions = {
      mention("far", 0, 0, 1, "source", "e1"),
      mention("near", 6, 0, 1, "other", "e2"),
      mention("x1", 7, 0, 1, "first"),
      mention("x2", 7, 1, 2, "second"),
  };
  doc.mentions[2].is_bridging_anaphor = true;
  doc.mentions[3].is_bridging_anaphor = true;
  doc.entities = {{"e1", {"far"}}, {"e2", {"near"}}};
  doc.gold_links = {{"x1", "e1", std::nullopt}, {"x2", "e2", std::nullopt}};
  doc.validate();

  ResolutionConfig config;  // window 2, first sentence on
  config.include_first_sentence = false;

  // e1 lives in sentence 0 only: out of reach for a window of two.
  const CoverageStats narrow = antecedent_coverage({doc}, config);
  CHECK(narrow.total == 2);
  CHECK(narrow.covered == 1);
  CHECK(narrow.fraction() == 0.5);

  config.window_sentences = 10;
  const CoverageStats wide = antecedent_coverage({doc}, config);
  CHECK(wide.covered == 2);
  CHECK(wide.fraction() == 1.0);

  // The first-sentence pool also recovers the distant antecedent.
  config.window_sentences = 2;
  config.include_first_sentence = true;
  CHECK(antecedent_coverage({doc}, config).covered == 2);

  CHECK(antecedent_coverage({}, config).total == 0);
  CHECK(antecedent_coverage({}, config).fraction() == 0.0);
}

TEST_CASE("prediction files") {
  testsupport::TempDir dir;
  const std::vector<DocumentPredictions> predictions = {
      {"a",
       {predict("a_x1", "a_m2", "e1", 1.0 / 3.0),
        predict("a_x2", std::nullopt, std::nullopt, std::nullopt)}},
      {"b", {predict("b_x1", "b_m1", "f1", 1e-17)}},
  };

  SUBCASE("write → read round-trips losslessly") {
    const auto path = dir.path() / "preds.tsv";
    write_predictions(path, predictions);
    const auto loaded = read_predictions(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].doc_id == "a");
    REQUIRE(loaded[0].predictions.size() == 2);
    CHECK(loaded[0].predictions[0].anaphor_id == "a_x1");
    CHECK(loaded[0].predictions[0].predicted_mention_id == "a_m2");
    CHECK(loaded[0].predictions[0].predicted_entity_id == "e1");
    CHECK(loaded[0].predictions[0].score == 1.0 / 3.0);  // bit-exact
    CHECK_FALSE(loaded[0].predictions[1].predicted_mention_id.has_value());
    CHECK_FALSE(loaded[0].predictions[1].score.has_value());
    CHECK(loaded[1].predictions[0].score == 1e-17);

    // Rewriting what was read reproduces the bytes.
    const auto again = dir.path() / "again.tsv";
    write_predictions(again, loaded);
    CHECK(testsupport::slurp(again) == testsupport::slurp(path));
  }

  SUBCASE("absent fields render as dashes") {
    const auto path = dir.path() / "dash.tsv";
    write_predictions(path, {{"d", {predict("x", std::nullopt, std::nullopt,
                                            std::nullopt)}}});
    CHECK(testsupport::slurp(path) == "d\tx\t-\t-\t-\n");
  }

  SUBCASE("malformed rows are rejected") {
    CHECK_THROWS_AS(read_predictions(dir.write("short.tsv", "a\tb\tc\td\n")),
                    FormatError);
    CHECK_THROWS_AS(
        read_predictions(dir.write("long.tsv", "a\tb\tc\td\t1.0\textra\n")),
        FormatError);
    CHECK_THROWS_AS(
        read_predictions(dir.write("score.tsv", "a\tb\tc\td\tnot-a-number\n")),
        FormatError);
    CHECK_THROWS_AS(read_predictions(dir.path() / "absent.tsv"), IoError);
  }
}

TEST_CASE("report rendering") {
  ExperimentReport report;
  report.config_summary = "window=2 mode=head_plus_modifiers";
  report.total_anaphors = 8;
  report.resolved_count = 2;
  report.accuracy = 0.25;
  report.per_relation_accuracy = {{{"part-of", 0.5}, {"set-of", 0.0}}};

  SUBCASE("text form") {
    const std::string text = format_report(report);
    CHECK(text.find("window=2") != std::string::npos);
    CHECK(text.find("total_anaphors    8") != std::string::npos);
    CHECK(text.find("resolved_count    2") != std::string::npos);
    CHECK(text.find("0.25") != std::string::npos);
    CHECK(text.find("(25%)") != std::string::npos);
    CHECK(text.find("accuracy[part-of]") != std::string::npos);
  }

  SUBCASE("json form parses back") {
    const auto j = nlohmann::json::parse(report_to_json(report));
    CHECK(j.at("config") == "window=2 mode=head_plus_modifiers");
    CHECK(j.at("total_anaphors") == 8);
    CHECK(j.at("resolved_count") == 2);
    CHECK(j.at("accuracy") == 0.25);
    CHECK(j.at("per_relation_accuracy").at("set-of") == 0.0);

    ExperimentReport plain;
    plain.total_anaphors = 1;
    const auto j2 = nlohmann::json::parse(report_to_json(plain));
    CHECK_FALSE(j2.contains("per_relation_accuracy"));
  }
}
