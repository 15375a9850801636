// Command-line front end: fuse, neighbors, resolve, score, relsim,
// extract-pairs, ablate. Every subcommand is deterministic; identical
// invocations produce byte-identical output. Usage problems exit 2, domain
// failures exit 1.

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bridging/corpus.hpp"
#include "bridging/embedding_table.hpp"
#include "bridging/errors.hpp"
#include "bridging/fusion.hpp"
#include "bridging/np_semantics.hpp"
#include "bridging/relsim.hpp"
#include "bridging/resolver.hpp"

namespace {

using namespace bridging;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Sink that is either stdout or a file, so subcommands can stream to both.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw IoError("cannot open file for writing: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    if (file_.is_open() && !file_) {
      throw IoError("write failure on file: " + path);
    }
  }

 private:
  std::ofstream file_;
};

// Resolution-config flags shared by resolve and ablate. Every field of
// ResolutionConfig has a like-named flag; a preset supplies the defaults
// and explicitly given flags override it.
struct ConfigOptions {
  std::string preset = "isnotes_full";
  std::size_t window_sentences = 2;
  bool include_first_sentence = true;
  std::string suffix_policy = "isnotes";
  std::string representation_mode = "head_plus_modifiers";
  std::string modifier_kinds = "all";
  bool include_of_postmodifier = true;
  bool exclude_time_candidates = true;
  bool exclude_bridging_anaphor_candidates = true;
  bool entity_expansion = true;
  bool fallback_unsuffixed = true;
};

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
  cmd->add_option("--preset", opts.preset,
                  "Configuration preset: isnotes_head, isnotes_full, "
                  "isnotes_mixed, bashi, arrau_rst")
      ->capture_default_str();
  cmd->add_option("--window-sentences", opts.window_sentences,
                  "Candidate window: how many sentences before the anaphor's "
                  "own sentence contribute candidates (preset: 2, arrau_rst: 10)");
  cmd->add_flag("--include-first-sentence,!--no-include-first-sentence",
                opts.include_first_sentence,
                "Also pool mentions from the document's first sentence "
                "(preset: on for isnotes_*, off for bashi/arrau_rst)");
  cmd->add_option("--suffix-policy", opts.suffix_policy,
                  "When anaphor tokens get the \"_PP\" suffix: isnotes, bashi "
                  "(comparative anaphors exempt), arrau (never)");
  cmd->add_option("--representation-mode", opts.representation_mode,
                  "head_only, head_plus_modifiers, or mixed (anaphor keeps "
                  "modifiers, candidates reduce to heads)");
  cmd->add_option("--modifier-kinds", opts.modifier_kinds,
                  "Premodifier kinds kept in content words: comma list of "
                  "noun, adjective, participle (or ed_participle/"
                  "ing_participle), or all / none");
  cmd->add_flag("--include-of-postmodifier,!--no-include-of-postmodifier",
                opts.include_of_postmodifier,
                "Append the head and selected premodifiers of an "
                "\"of\"-postmodifier to the content words");
  cmd->add_flag("--exclude-time-candidates,!--no-exclude-time-candidates",
                opts.exclude_time_candidates,
                "Drop time-typed candidates unless the anaphor itself is "
                "time-typed");
  cmd->add_flag("--exclude-bridging-anaphor-candidates,"
                "!--no-exclude-bridging-anaphor-candidates",
                opts.exclude_bridging_anaphor_candidates,
                "Drop other bridging anaphors from the candidate pool");
  cmd->add_flag("--entity-expansion,!--no-entity-expansion", opts.entity_expansion,
                "Expand candidates to all preceding mentions of their entities");
  cmd->add_flag("--fallback-unsuffixed,!--no-fallback-unsuffixed",
                opts.fallback_unsuffixed,
                "Fall back to the plain form when a \"_PP\" token is missing");
}

ResolutionConfig build_config(const CLI::App* cmd, const ConfigOptions& opts) {
  ResolutionConfig config = preset_config(opts.preset);
  if (cmd->count("--window-sentences")) {
    config.window_sentences = opts.window_sentences;
  }
  if (cmd->count("--include-first-sentence")) {
    config.include_first_sentence = opts.include_first_sentence;
  }
  if (cmd->count("--suffix-policy")) {
    config.suffix_policy = parse_suffix_policy(opts.suffix_policy);
  }
  if (cmd->count("--representation-mode")) {
    config.representation_mode = parse_representation_mode(opts.representation_mode);
  }
  if (cmd->count("--modifier-kinds")) {
    config.modifier_kinds = parse_modifier_kinds(opts.modifier_kinds);
  }
  if (cmd->count("--include-of-postmodifier")) {
    config.include_of_postmodifier = opts.include_of_postmodifier;
  }
  if (cmd->count("--exclude-time-candidates")) {
    config.exclude_time_candidates = opts.exclude_time_candidates;
  }
  if (cmd->count("--exclude-bridging-anaphor-candidates")) {
    config.exclude_bridging_anaphor_candidates =
        opts.exclude_bridging_anaphor_candidates;
  }
  if (cmd->count("--entity-expansion")) {
    config.entity_expansion = opts.entity_expansion;
  }
  if (cmd->count("--fallback-unsuffixed")) {
    config.fallback_unsuffixed = opts.fallback_unsuffixed;
  }
  return config;
}

void setup_fuse(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "fuse", "Concatenate two embedding tables over their vocabulary union, "
              "padding one-sided words with a constant filler half");
  auto opts = std::make_shared<std::tuple<std::string, std::string, std::string,
                                          double>>();
  cmd->add_option("--left", std::get<0>(*opts), "Left (general) table")->required();
  cmd->add_option("--right", std::get<1>(*opts), "Right (context) table")->required();
  cmd->add_option("--out", std::get<2>(*opts), "Output table path")->required();
  std::get<3>(*opts) = 0.1;
  cmd->add_option("--filler", std::get<3>(*opts),
                  "Constant coordinate for the missing half")
      ->capture_default_str();
  cmd->callback([opts] {
    const auto& [left_path, right_path, out_path, filler] = *opts;
    EmbeddingTable left = load_table(left_path);
    EmbeddingTable right = load_table(right_path);
    FusionSpec spec{&left, &right, filler};
    EmbeddingTable fused = fuse(spec);
    write_table(fused, out_path);
    std::cout << "fused " << fused.size() << " words, dimension "
              << fused.dimension() << '\n';
  });
}

void setup_neighbors(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "neighbors", "Nearest neighbors of a word by cosine similarity");
  auto opts =
      std::make_shared<std::tuple<std::string, std::string, std::size_t>>();
  cmd->add_option("--embeddings", std::get<0>(*opts), "Embedding table")->required();
  cmd->add_option("--word", std::get<1>(*opts), "Query word")->required();
  std::get<2>(*opts) = 10;
  cmd->add_option("--top", std::get<2>(*opts), "Number of neighbors")
      ->capture_default_str();
  cmd->callback([opts] {
    const auto& [table_path, word, top] = *opts;
    EmbeddingTable table = load_table(table_path);
    for (const auto& [token, similarity] : nearest_neighbors(table, word, top)) {
      std::cout << token << '\t' << format_double(similarity) << '\n';
    }
  });
}

void setup_resolve(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "resolve", "Predict an antecedent entity for every gold bridging "
                 "anaphor of a corpus");
  struct Opts {
    std::string embeddings;
    std::string corpus;
    std::string out;
    std::size_t jobs = 1;
    bool coverage_only = false;
    ConfigOptions config;
  };
  auto opts = std::make_shared<Opts>();
  cmd->add_option("--embeddings", opts->embeddings, "Embedding table")->required();
  cmd->add_option("--corpus", opts->corpus, "Corpus file (one JSON document "
                                            "per line)")
      ->required();
  cmd->add_option("--out", opts->out,
                  "Predictions TSV path (stdout when omitted)");
  cmd->add_option("--jobs", opts->jobs,
                  "Documents resolved in parallel; output is identical for "
                  "every value")
      ->capture_default_str();
  cmd->add_flag("--coverage-only", opts->coverage_only,
                "Report how often the gold entity is within reach of the "
                "candidate lists instead of resolving");
  add_config_options(cmd, opts->config);
  cmd->callback([opts, cmd] {
    const ResolutionConfig config = build_config(cmd, opts->config);
    const std::vector<Document> docs = load_corpus(opts->corpus);
    if (opts->coverage_only) {
      const CoverageStats stats = antecedent_coverage(docs, config);
      std::cout << "covered " << stats.covered << " of " << stats.total
                << " gold anaphors (" << format_double(stats.fraction() * 100.0)
                << "%)\n";
      return;
    }
    EmbeddingTable table = load_table(opts->embeddings);
    const auto predictions = resolve_corpus(docs, table, config, opts->jobs);
    if (opts->out.empty()) {
      for (const DocumentPredictions& dp : predictions) {
        for (const Prediction& p : dp.predictions) {
          std::cout << dp.doc_id << '\t' << p.anaphor_id << '\t'
                    << p.predicted_mention_id.value_or("-") << '\t'
                    << p.predicted_entity_id.value_or("-") << '\t'
                    << (p.score ? format_double(*p.score) : std::string("-"))
                    << '\n';
        }
      }
    } else {
      write_predictions(opts->out, predictions);
      std::cerr << "wrote predictions for " << docs.size() << " documents to "
                << opts->out << '\n';
    }
  });
}

void setup_score(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "score", "Entity-level accuracy of a predictions file against a corpus");
  struct Opts {
    std::string corpus;
    std::string predictions;
    bool as_json = false;
  };
  auto opts = std::make_shared<Opts>();
  cmd->add_option("--corpus", opts->corpus, "Corpus file")->required();
  cmd->add_option("--predictions", opts->predictions, "Predictions TSV")->required();
  cmd->add_flag("--json", opts->as_json, "Emit the report as one JSON object");
  cmd->callback([opts] {
    const std::vector<Document> docs = load_corpus(opts->corpus);
    const auto predictions = read_predictions(opts->predictions);
    const ExperimentReport report = score(predictions, docs);
    if (opts->as_json) {
      std::cout << report_to_json(report) << '\n';
    } else {
      std::cout << format_report(report);
    }
  });
}

void setup_relsim(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "relsim", "Rank a relation dataset's candidate pairs by mean relational "
                "similarity to its prototypes and report Spearman's rho");
  struct Opts {
    std::string embeddings;
    std::string dataset;
    bool suffix_second = false;
    bool fallback_unsuffixed = true;
    bool print_ranked = false;
  };
  auto opts = std::make_shared<Opts>();
  cmd->add_option("--embeddings", opts->embeddings, "Embedding table")->required();
  cmd->add_option("--dataset", opts->dataset,
                  "Relation dataset (relation/proto/cand lines)")
      ->required();
  cmd->add_flag("--suffix-second", opts->suffix_second,
                "Look up second elements with the \"_PP\" suffix");
  cmd->add_flag("--fallback-unsuffixed,!--no-fallback-unsuffixed",
                opts->fallback_unsuffixed,
                "Fall back to the plain form when a \"_PP\" form is missing");
  cmd->add_flag("--print-ranked", opts->print_ranked,
                "Also print the ranked candidate pairs");
  cmd->callback([opts] {
    EmbeddingTable table = load_table(opts->embeddings);
    const RelationDataset dataset = load_relation_dataset(opts->dataset);
    const RankedRelation ranked = rank_relation(dataset, table, opts->suffix_second,
                                                opts->fallback_unsuffixed);
    std::cout << "relation " << ranked.relation_name << '\n';
    std::cout << "pairs_scored " << ranked.ranked.size() << '\n';
    std::cout << "pairs_dropped " << ranked.dropped.size() << '\n';
    std::ostringstream rounded;
    rounded.setf(std::ios::fixed);
    rounded.precision(2);
    rounded << ranked.rho;
    std::cout << "rho " << rounded.str() << " (exact "
              << format_double(ranked.rho) << ")\n";
    if (opts->print_ranked) {
      for (const ScoredPair& sp : ranked.ranked) {
        std::cout << sp.pair.first << '\t' << sp.pair.second << '\t'
                  << format_double(sp.system_score) << '\n';
      }
    }
    for (const DroppedPair& dp : ranked.dropped) {
      std::cerr << "dropped " << dp.pair.first << ' ' << dp.pair.second << ": "
                << dp.missing_word << '\n';
    }
  });
}

void setup_extract_pairs(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "extract-pairs", "Turn prepositional/possessive NP structures into "
                       "suffixed head-modifier training pairs");
  struct Opts {
    std::string in;
    std::string out;
  };
  auto opts = std::make_shared<Opts>();
  cmd->add_option("--in", opts->in,
                  "Structure file: one `head prep|poss modifier_head` per "
                  "line; single-field lines are bare NPs (stdin when omitted)");
  cmd->add_option("--out", opts->out, "Output path (stdout when omitted)");
  cmd->callback([opts] {
    std::ifstream file;
    if (!opts->in.empty()) {
      file.open(opts->in);
      if (!file) {
        throw IoError("cannot open structure file: " + opts->in);
      }
    }
    std::istream& in = opts->in.empty() ? std::cin : file;
    Output out(opts->out);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream fields(line);
      NpStructure structure;
      std::string relation;
      if (!(fields >> structure.head_lemma)) {
        continue;  // blank line
      }
      if (fields >> relation) {
        if (relation == "prep") {
          structure.relation = NpStructureRelation::preposition;
        } else if (relation == "poss") {
          structure.relation = NpStructureRelation::possessive;
        } else {
          throw FormatError("line " + std::to_string(line_no) +
                            ": relation must be 'prep' or 'poss', got '" +
                            relation + "'");
        }
        if (!(fields >> structure.modifier_head_lemma)) {
          throw FormatError("line " + std::to_string(line_no) +
                            ": missing modifier head");
        }
      }
      if (auto pair = extract_noun_pair(structure)) {
        out.stream() << pair->first << '\t' << pair->second << '\n';
      }
    }
    out.finish(opts->out);
  });
}

void setup_ablate(CLI::App& app) {
  auto cmd = app.add_subcommand(
      "ablate", "Resolve and score once per modifier subset, everything else "
                "held fixed");
  struct Opts {
    std::string embeddings;
    std::string corpus;
    std::vector<std::string> subsets;
    std::size_t jobs = 1;
    bool as_json = false;
    ConfigOptions config;
  };
  auto opts = std::make_shared<Opts>();
  cmd->add_option("--embeddings", opts->embeddings, "Embedding table")->required();
  cmd->add_option("--corpus", opts->corpus, "Corpus file")->required();
  cmd->add_option("--subset", opts->subsets,
                  "Modifier subset to test (repeatable), e.g. none, noun, "
                  "noun,adjective; default: the seven standard subsets");
  cmd->add_option("--jobs", opts->jobs, "Documents resolved in parallel")
      ->capture_default_str();
  cmd->add_flag("--json", opts->as_json, "One JSON report per line");
  add_config_options(cmd, opts->config);
  cmd->callback([opts, cmd] {
    const ResolutionConfig base = build_config(cmd, opts->config);
    std::vector<std::string> subset_specs = opts->subsets;
    if (subset_specs.empty()) {
      subset_specs = {"none",           "noun",           "adjective",
                      "participle",     "noun,adjective", "noun,participle",
                      "adjective,participle"};
    }
    std::vector<ModifierKindSet> subsets;
    subsets.reserve(subset_specs.size());
    for (const std::string& spec : subset_specs) {
      subsets.push_back(parse_modifier_kinds(spec));
    }
    const std::vector<Document> docs = load_corpus(opts->corpus);
    EmbeddingTable table = load_table(opts->embeddings);
    const auto reports = ablation_run(docs, table, base, subsets, opts->jobs);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (opts->as_json) {
        std::cout << report_to_json(reports[i]) << '\n';
      } else {
        if (i > 0) std::cout << '\n';
        std::cout << "modifier_kinds    " << subset_specs[i] << '\n'
                  << format_report(reports[i]);
      }
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bridging anaphora resolution with fused word embeddings"};
  app.require_subcommand(1);
  setup_fuse(app);
  setup_neighbors(app);
  setup_resolve(app);
  setup_score(app);
  setup_relsim(app);
  setup_extract_pairs(app);
  setup_ablate(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const bridging::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
