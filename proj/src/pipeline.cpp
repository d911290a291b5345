// Copyright 2026 The Catchphrase Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catchphrase/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <tuple>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "catchphrase/checkpoint.hpp"
#include "catchphrase/errors.hpp"

namespace catchphrase {
namespace {

using Header = std::vector<std::pair<std::string, std::string>>;

void write_header(std::ostream& out, const Header& header) {
  for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
}

// Writes `text` next to `path` and renames it into place.
void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.empty()) throw ConfigError("output path not set");
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string());
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_output(const std::filesystem::path& path, std::string_view key) {
  if (path.empty()) throw ConfigError("missing required setting " + std::string(key));
}

template <class T>
void train_and_save(const RunConfig& cfg, const PreparedCorpus& corpus,
                    const EmbeddingTable& table, std::ostream& log) {
  const TrainConfig tcfg = cfg.train_config();
  TrainResult<T> result = train<T>(corpus.split, table, tcfg, {});
  for (const auto& w : result.log.warnings) log << "warning: " << w << '\n';
  for (const auto& e : result.log.epochs) {
    log << "epoch " << e.epoch << ": " << e.steps << " steps, mean loss " << real(e.mean_total)
        << '\n';
  }
  CheckpointMeta meta = tcfg.checkpoint_meta;
  meta.epochs_completed = tcfg.epochs;
  if (!cfg.train_log.empty()) {
    std::ostringstream csv;
    write_header(csv, cfg.artifact_header());
    result.log.write_csv(csv);
    write_file(cfg.train_log, csv.str());
  }
  save_checkpoint(cfg.checkpoint, result.params, result.adam, meta);
  log << "checkpoint written to " << cfg.checkpoint.string() << '\n';
}

struct LoadedModel {
  Precision precision = Precision::kDouble;
  std::optional<Checkpoint<float>> as_float;
  std::optional<Checkpoint<double>> as_double;
  std::string config_hash;
};

LoadedModel load_model(const RunConfig& cfg) {
  require_existing_path(cfg.checkpoint, "checkpoint");
  LoadedModel m;
  m.precision = checkpoint_precision(cfg.checkpoint);
  if (m.precision == Precision::kFloat) {
    m.as_float = load_checkpoint<float>(cfg.checkpoint, &cfg.dims);
    m.config_hash = m.as_float->meta.config_hash;
  } else {
    m.as_double = load_checkpoint<double>(cfg.checkpoint, &cfg.dims);
    m.config_hash = m.as_double->meta.config_hash;
  }
  return m;
}

struct TestInputs {
  PreparedCorpus corpus;
  EmbeddingTable table{1};
};

TestInputs load_test_inputs(const RunConfig& cfg) {
  require_existing_path(cfg.corpus_dir, "corpus_dir");
  require_existing_path(cfg.embeddings, "embeddings");
  TestInputs in;
  in.corpus = prepare_corpus(cfg);
  if (in.corpus.split.test.empty()) {
    throw ConfigError("no documents from test year " + std::to_string(cfg.test_year) + " in " +
                      cfg.corpus_dir.string());
  }
  CorpusSplit test_only;
  test_only.test = in.corpus.split.test;
  const auto vocab = corpus_vocabulary(test_only);
  in.table = load_embedding_source(cfg.embeddings, cfg.dims.embedding_dim, &vocab);
  return in;
}

}  // namespace

void require_existing_path(const std::filesystem::path& path, std::string_view key) {
  if (path.empty()) throw ConfigError("missing required setting " + std::string(key));
  if (!std::filesystem::exists(path)) {
    throw ConfigError(std::string(key) + " path does not exist: " + path.string());
  }
}

PreparedCorpus prepare_corpus(const RunConfig& cfg) {
  PreparedCorpus out;
  out.split = split_by_year(load_corpus_dir(cfg.corpus_dir, &out.diagnostics), cfg.test_year);
  if (cfg.max_train_docs > 0 && out.split.train.size() > cfg.max_train_docs) {
    out.split.train.resize(cfg.max_train_docs);
  }
  if (cfg.max_test_docs > 0 && out.split.test.size() > cfg.max_test_docs) {
    out.split.test.resize(cfg.max_test_docs);
  }
  return out;
}

std::unordered_set<std::string> corpus_vocabulary(const CorpusSplit& split) {
  std::unordered_set<std::string> vocab;
  auto add = [&](const TokenSeq& seq) {
    for (const auto& t : seq.tokens) {
      vocab.insert(t);
      std::string lower = t;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
        return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
      });
      vocab.insert(std::move(lower));
    }
  };
  for (const auto* side : {&split.train, &split.test}) {
    for (const auto& doc : *side) {
      for (const auto& s : doc.sentences) add(s);
      for (const auto& c : doc.catchphrases) add(c);
    }
  }
  return vocab;
}

EmbeddingTable load_embedding_source(const std::filesystem::path& path, std::size_t dim,
                                     const std::unordered_set<std::string>* vocabulary) {
  require_existing_path(path, "embeddings");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings " + path.string());
  if (is_embedding_cache(in)) {
    EmbeddingTable table = load_embedding_cache(in);
    if (table.dim() != dim) {
      throw ConfigError("embedding cache " + path.string() + " has width " +
                        std::to_string(table.dim()) + ", expected " + std::to_string(dim));
    }
    return table;
  }
  return load_embeddings(in, dim, vocabulary);
}

template <class T>
std::vector<DocumentPhrases> extract_documents(const ModelParams<T>& params,
                                               const EmbeddingTable& table,
                                               std::span<const CaseDocument> docs,
                                               std::size_t t, std::size_t r) {
  std::vector<DocumentPhrases> out;
  for (const auto& doc : docs) {
    Extraction e = extract_for_document(params, table, doc, t, r);
    out.push_back({doc.id, e.anchor_count, std::move(e.phrases)});
  }
  return out;
}

DocumentPhrases random_extraction(const CaseDocument& doc, std::size_t t, std::size_t r,
                                  RandomStream& rng) {
  ScoreSheet sheet;
  for (const auto& s : doc.sentences) {
    std::vector<double> row(s.size());
    for (auto& v : row) v = rng.uniform();
    sheet.sentence_word_scores.push_back(std::move(row));
  }
  const auto anchors = select_anchors(sheet, t);
  return {doc.id, anchors.size(), extract_phrases(doc, anchors, r)};
}

std::map<std::string, std::vector<TokenSeq>> phrases_by_doc(std::span<const DocumentPhrases> docs) {
  std::map<std::string, std::vector<TokenSeq>> out;
  for (const auto& d : docs) {
    auto& list = out[d.doc_id];
    for (const auto& p : d.phrases) list.push_back(p.tokens);
  }
  return out;
}

std::map<std::string, std::vector<TokenSeq>> golds_by_doc(std::span<const CaseDocument> docs) {
  std::map<std::string, std::vector<TokenSeq>> out;
  for (const auto& d : docs) {
    if (d.has_catchphrases()) out[d.id] = d.catchphrases;
  }
  return out;
}

template <class T>
std::vector<DocumentStats> compute_score_stats(const ModelParams<T>& params,
                                               const EmbeddingTable& table,
                                               std::span<const CaseDocument> docs,
                                               std::size_t negatives, std::uint64_t seed) {
  std::vector<ScoredDocument<T>> scored;
  scored.reserve(docs.size());
  for (const auto& d : docs) scored.push_back(score_document(params, d, table));

  std::vector<DocumentStats> out;
  const std::size_t others = docs.empty() ? 0 : docs.size() - 1;
  const std::size_t k = std::min(negatives, others);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].has_catchphrases()) continue;
    DocumentStats ds;
    ds.doc_id = docs[i].id;
    ds.stats = make_score_stats(scored[i].scores.all_catchword_scores(),
                                scored[i].scores.all_sentence_scores());
    RandomStream rng(seed, "negatives", i);
    for (std::size_t pick : rng.sample_without_replacement(others, k)) {
      const std::size_t j = pick < i ? pick : pick + 1;
      std::vector<double> cross;
      for (const auto& phrase : scored[i].encoding.catchphrases) {
        const auto s = score_phrase_words<T>(params, phrase, scored[j].encoding.document);
        cross.insert(cross.end(), s.begin(), s.end());
      }
      ds.stats.negatives.push_back(
          make_negative_pairing(cross, scored[j].scores.all_sentence_scores()));
      ds.negative_ids.push_back(docs[j].id);
    }
    out.push_back(std::move(ds));
  }
  return out;
}

ConstraintRates constraint_rates(std::span<const DocumentStats> stats) {
  ConstraintRates r;
  std::size_t held[5] = {};
  for (const auto& d : stats) {
    const ScoreStats& s = d.stats;
    ++r.documents;
    held[0] += s.catch_mean > s.sentence_mean;
    held[2] += s.catch_mean + s.catch_std > s.sentence_mean + s.sentence_std;
    held[3] += s.catch_mean - s.catch_std > s.sentence_mean;
    held[4] += s.catch_std > kSpreadFloor && s.sentence_std > kSpreadFloor;
    for (const auto& n : s.negatives) {
      ++r.pairings;
      held[1] += n.sentence_mean > n.cross_catch_mean;
    }
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const std::size_t total = i == 1 ? r.pairings : r.documents;
    r.rate[i] = total ? static_cast<double>(held[i]) / static_cast<double>(total) : 0.0;
  }
  return r;
}

void write_score_stats(std::ostream& out,
                       std::span<const std::pair<std::string, std::string>> header,
                       std::span<const DocumentStats> stats) {
  for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
  out << "row,doc_id,negative_id,catch_mean,catch_std,sentence_mean,sentence_std,"
         "cross_catch_mean,negative_sentence_mean,o1,o2,o3,o4,o5\n";
  for (const auto& d : stats) {
    const ScoreStats& s = d.stats;
    out << "doc," << d.doc_id << ",," << real(s.catch_mean) << ',' << real(s.catch_std) << ','
        << real(s.sentence_mean) << ',' << real(s.sentence_std) << ",,,"
        << (s.catch_mean > s.sentence_mean) << ",,"
        << (s.catch_mean + s.catch_std > s.sentence_mean + s.sentence_std) << ','
        << (s.catch_mean - s.catch_std > s.sentence_mean) << ','
        << (s.catch_std > kSpreadFloor && s.sentence_std > kSpreadFloor) << '\n';
    for (std::size_t k = 0; k < s.negatives.size(); ++k) {
      const auto& n = s.negatives[k];
      out << "pair," << d.doc_id << ',' << d.negative_ids[k] << ",,,,,"
          << real(n.cross_catch_mean) << ',' << real(n.sentence_mean) << ",,"
          << (n.sentence_mean > n.cross_catch_mean) << ",,,\n";
    }
  }
  const ConstraintRates r = constraint_rates(stats);
  out << "rate,all,,,,,,,," << real(r.rate[0]) << ',' << real(r.rate[1]) << ','
      << real(r.rate[2]) << ',' << real(r.rate[3]) << ',' << real(r.rate[4]) << '\n';
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  require_existing_path(cfg.corpus_dir, "corpus_dir");
  require_existing_path(cfg.embeddings, "embeddings");
  require_output(cfg.checkpoint, "checkpoint");
  const PreparedCorpus corpus = prepare_corpus(cfg);
  const auto vocab = corpus_vocabulary(corpus.split);
  const EmbeddingTable table =
      load_embedding_source(cfg.embeddings, cfg.dims.embedding_dim, &vocab);
  log << "train: " << corpus.split.train.size() << " documents, held-out year "
      << cfg.test_year << ", " << table.size() << " embeddings, config " << cfg.hash() << '\n';
  if (cfg.precision == Precision::kFloat) {
    train_and_save<float>(cfg, corpus, table, log);
  } else {
    train_and_save<double>(cfg, corpus, table, log);
  }
}

void cmd_extract(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  require_output(cfg.phrases, "phrases");
  const LoadedModel model = load_model(cfg);
  const TestInputs in = load_test_inputs(cfg);
  const auto& docs = in.corpus.split.test;
  const auto extracted =
      model.as_float
          ? extract_documents(model.as_float->params, in.table, docs, cfg.top_t, cfg.radius)
          : extract_documents(model.as_double->params, in.table, docs, cfg.top_t, cfg.radius);
  Header header = cfg.artifact_header();
  header.emplace_back("model_config_hash", model.config_hash);
  std::ostringstream text;
  write_phrases(text, header, extracted);
  write_file(cfg.phrases, text.str());
  log << "extract: " << extracted.size() << " documents written to " << cfg.phrases.string()
      << '\n';
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  require_existing_path(cfg.phrases, "phrases");
  require_existing_path(cfg.corpus_dir, "corpus_dir");
  require_output(cfg.report, "report");
  const PreparedCorpus corpus = prepare_corpus(cfg);
  std::ifstream in(cfg.phrases);
  if (!in) throw IoError("cannot open " + cfg.phrases.string());
  const PhrasesFile file = read_phrases(in);
  const auto& test = corpus.split.test;
  auto extractions = phrases_by_doc(file.docs);
  for (const auto& d : test) {
    if (!d.has_catchphrases()) extractions.erase(d.id);
  }
  const RougeReport report = evaluate_corpus(extractions, golds_by_doc(test));

  Header header = cfg.artifact_header();
  for (const auto& [k, v] : file.header) {
    if (k == "config_hash") header.emplace_back("phrases_config_hash", v);
  }
  std::ostringstream table, csv;
  write_header(table, header);
  report.write_table(table);
  write_header(csv, header);
  report.write_csv(csv);
  auto table_path = cfg.report, csv_path = cfg.report;
  table_path += ".txt";
  csv_path += ".csv";
  write_file(table_path, table.str());
  write_file(csv_path, csv.str());
  log << "evaluate: " << report.documents.size() << " documents, ROUGE-1 F "
      << real(report.average[kRouge1].f_measure) << '\n';
}

void cmd_score_stats(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  require_output(cfg.stats, "stats");
  const LoadedModel model = load_model(cfg);
  const TestInputs in = load_test_inputs(cfg);
  const auto& docs = in.corpus.split.test;
  const std::size_t k = cfg.loss.negative_set_size;
  const auto stats =
      model.as_float ? compute_score_stats(model.as_float->params, in.table, docs, k,
                                           cfg.negatives_seed)
                     : compute_score_stats(model.as_double->params, in.table, docs, k,
                                           cfg.negatives_seed);
  Header header = cfg.artifact_header();
  header.emplace_back("model_config_hash", model.config_hash);
  std::ostringstream text;
  write_score_stats(text, header, stats);
  write_file(cfg.stats, text.str());
  const ConstraintRates r = constraint_rates(stats);
  log << "score-stats: " << r.documents << " documents, " << r.pairings << " pairings;";
  for (int i = 0; i < 5; ++i) log << " o" << i + 1 << "=" << real(r.rate[i]);
  log << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Catchphrase extraction for legal case reports"};
  app.require_subcommand(1);
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> config_files;

  using Command = void (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"train", "train a model and write a checkpoint", cmd_train},
      {"extract", "extract catchphrases from held-out documents", cmd_extract},
      {"evaluate", "score extracted phrases against gold catchphrases", cmd_evaluate},
      {"score-stats", "report score statistics and constraint satisfaction", cmd_score_stats},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_files[name], "key=value configuration file");
    for (const auto& spec : RunConfig::keys()) {
      std::string flag = spec.name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      const std::string slot = std::string(name) + "/" + spec.name;
      options[slot] = sub->add_option("--" + flag, values[slot], spec.help);
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const std::string name = std::get<0>(commands[i]);
    try {
      RunConfig cfg;
      if (!config_files[name].empty()) cfg.load_file(config_files[name]);
      for (const auto& spec : RunConfig::keys()) {
        const std::string slot = name + "/" + spec.name;
        if (options[slot]->count() > 0) cfg.set(spec.name, values[slot]);
      }
      std::get<2>(commands[i])(cfg, err);
      return 0;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}

#define CATCHPHRASE_INSTANTIATE(T)                                                            \
  template std::vector<DocumentPhrases> extract_documents<T>(                                 \
      const ModelParams<T>&, const EmbeddingTable&, std::span<const CaseDocument>,            \
      std::size_t, std::size_t);                                                              \
  template std::vector<DocumentStats> compute_score_stats<T>(                                 \
      const ModelParams<T>&, const EmbeddingTable&, std::span<const CaseDocument>,            \
      std::size_t, std::uint64_t);

CATCHPHRASE_INSTANTIATE(float)
CATCHPHRASE_INSTANTIATE(double)

#undef CATCHPHRASE_INSTANTIATE

}  // namespace catchphrase
