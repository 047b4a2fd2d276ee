// commrec command-line frontend. Talks to the core exclusively through the
// C API in commrec.h; argument parsing and report post-processing live here.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "commrec.h"

namespace {

using nlohmann::json;

// ---- C handle RAII -----------------------------------------------------

struct StringFree {
  void operator()(char* s) const { commrec_string_free(s); }
};
using CStr = std::unique_ptr<char, StringFree>;

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, HandleDeleter<T, Free>>;

using CorpusHandle = Handle<commrec_corpus, commrec_corpus_free>;
using VocabHandle = Handle<commrec_vocab, commrec_vocab_free>;
using MatrixHandle = Handle<commrec_matrix, commrec_matrix_free>;
using VectorsHandle = Handle<commrec_vectors, commrec_vectors_free>;
using IndexHandle = Handle<commrec_index, commrec_index_free>;
using ClassifierHandle = Handle<commrec_classifier, commrec_classifier_free>;

[[noreturn]] void die(commrec_status status) {
  std::cerr << "error: " << commrec_status_name(status) << ": " << commrec_last_error() << "\n";
  std::exit(1);
}

void check(commrec_status status) {
  if (status != COMMREC_OK) die(status);
}

CorpusHandle load_corpus(const std::string& path) {
  commrec_corpus* p = nullptr;
  check(commrec_corpus_load(path.c_str(), &p));
  return CorpusHandle(p);
}

VocabHandle load_vocab(const std::string& path) {
  commrec_vocab* p = nullptr;
  check(commrec_vocab_load(path.c_str(), &p));
  return VocabHandle(p);
}

MatrixHandle load_matrix(const std::string& path) {
  commrec_matrix* p = nullptr;
  check(commrec_matrix_load(path.c_str(), &p));
  return MatrixHandle(p);
}

VectorsHandle load_vectors(const std::string& path) {
  commrec_vectors* p = nullptr;
  check(commrec_vectors_load(path.c_str(), &p));
  return VectorsHandle(p);
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    std::exit(1);
  }
  out << text << "\n";
  if (!out) {
    std::cerr << "error: write failed on " << out_path << "\n";
    std::exit(1);
  }
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(1);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Community file: a single {"name","members"} object or an array of them.
// With an array, --name picks the entry.
std::string select_community(const std::string& path, const std::string& name) {
  json obj = json::parse(read_file_or_die(path), nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) {
    std::cerr << "error: " << path << " is not valid JSON\n";
    std::exit(1);
  }
  if (obj.is_object()) {
    if (!name.empty() && obj.value("name", "") != name) {
      std::cerr << "error: " << path << " holds community '" << obj.value("name", "")
                << "', not '" << name << "'\n";
      std::exit(1);
    }
    return obj.dump();
  }
  if (obj.is_array()) {
    if (name.empty()) {
      std::cerr << "error: " << path << " holds " << obj.size()
                << " communities; pick one with --name\n";
      std::exit(1);
    }
    for (const auto& item : obj) {
      if (item.is_object() && item.value("name", "") == name) return item.dump();
    }
    std::cerr << "error: no community named '" << name << "' in " << path << "\n";
    std::exit(1);
  }
  std::cerr << "error: " << path << " is neither a community object nor an array\n";
  std::exit(1);
}

// ---- JSON config files ---------------------------------------------------

// Flat {"option": value} objects for --config; command-line flags win.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json obj = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        if (!opt->results().empty()) {
          obj[opt->get_lnames()[0]] = opt->results().size() == 1 ? json(opt->results()[0])
                                                                 : json(opt->results());
        } else if (default_also && !opt->get_default_str().empty()) {
          obj[opt->get_lnames()[0]] = opt->get_default_str();
        }
      }
    }
    return obj.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json obj = json::parse(input, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw CLI::FileError("config file is not a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : obj.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) {
          item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      } else {
        item.inputs.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

void add_common(CLI::App* sub) {
  sub->set_config("--config", "", "JSON config file; explicit flags take precedence");
  sub->config_formatter(std::make_shared<JsonConfig>());
  static int threads = 1;
  sub->add_option("--threads", threads,
                  "worker thread cap (computation is currently single-threaded)");
}

// ---- subcommand state -----------------------------------------------------

struct SynthArgs {
  std::string spec_path;
  std::string out_corpus;
  std::string out_communities;
  uint64_t seed = 0;
  bool seed_given = false;
  size_t vocab_size = 2000;
  size_t background_users = 500;
  size_t communities = 4;
  size_t community_size = 10;
  size_t topic_words = 20;
  double topic_mix = 0.3;
  size_t posts_per_user = 40;
  size_t tokens_per_post = 10;
  double zipf = 1.1;
  double embed_frac = 0.6;
  double clf_frac = 0.2;
};

int run_synth(const SynthArgs& args) {
  json cfg;
  if (!args.spec_path.empty()) {
    cfg = json::parse(read_file_or_die(args.spec_path), nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object()) {
      std::cerr << "error: " << args.spec_path << " is not a JSON object\n";
      return 1;
    }
  } else {
    cfg["vocab_size"] = args.vocab_size;
    cfg["background_users"] = args.background_users;
    cfg["posts_per_user"] = args.posts_per_user;
    cfg["tokens_per_post"] = args.tokens_per_post;
    cfg["zipf_exponent"] = args.zipf;
    cfg["embed_train_fraction"] = args.embed_frac;
    cfg["classifier_train_fraction"] = args.clf_frac;
    json comms = json::array();
    for (size_t c = 0; c < args.communities; ++c) {
      json plan;
      plan["name"] = "community" + std::to_string(c);
      plan["size"] = args.community_size;
      plan["topic_words"] = args.topic_words;
      plan["topic_mix"] = args.topic_mix;
      comms.push_back(std::move(plan));
    }
    cfg["communities"] = std::move(comms);
  }
  if (args.seed_given || !cfg.contains("seed")) cfg["seed"] = args.seed;

  commrec_corpus* corpus = nullptr;
  char* communities_json = nullptr;
  check(commrec_synth_generate(cfg.dump().c_str(), &corpus, &communities_json));
  CorpusHandle corpus_h(corpus);
  CStr comms(communities_json);

  check(commrec_corpus_save(corpus, args.out_corpus.c_str()));
  write_output(comms.get(), args.out_communities);
  std::cerr << "generated " << commrec_corpus_user_count(corpus) << " users -> "
            << args.out_corpus << "\n";
  return 0;
}

struct BuildVocabArgs {
  std::string corpus;
  std::string out;
  int64_t min_count = 20;
  int64_t max_size = 200000;
  int64_t delta = 5;
  double theta = 10.0;
};

int run_build_vocab(const BuildVocabArgs& args) {
  CorpusHandle corpus = load_corpus(args.corpus);
  commrec_vocab* vocab = nullptr;
  check(commrec_vocab_build(corpus.get(), args.min_count, args.max_size, args.delta, args.theta,
                            &vocab));
  VocabHandle vocab_h(vocab);
  check(commrec_vocab_save(vocab, args.out.c_str()));
  std::cerr << "vocabulary of " << commrec_vocab_size(vocab) << " types -> " << args.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string corpus;
  std::string vocab;
  std::string out;
  std::string init = "random";
  std::string pretrained;
  size_t dim = 128;
  size_t sample_size = 50;
  size_t steps = 200000;
  size_t batch = 32;
  double learning_rate = 0.05;
  uint64_t seed = 0;
  size_t report_intervals = 10;
};

int run_train(const TrainArgs& args) {
  CorpusHandle corpus = load_corpus(args.corpus);
  VocabHandle vocab = load_vocab(args.vocab);

  json cfg;
  cfg["dim"] = args.dim;
  cfg["sample_size"] = args.sample_size;
  cfg["steps"] = args.steps;
  cfg["batch"] = args.batch;
  cfg["learning_rate"] = args.learning_rate;
  cfg["seed"] = args.seed;
  cfg["report_intervals"] = args.report_intervals;
  cfg["init"] = args.init;
  if (!args.pretrained.empty()) cfg["pretrained_path"] = args.pretrained;

  commrec_matrix* matrix = nullptr;
  char* report = nullptr;
  check(commrec_train_reid(corpus.get(), vocab.get(), cfg.dump().c_str(), &matrix, &report));
  MatrixHandle matrix_h(matrix);
  CStr report_s(report);

  check(commrec_matrix_save(matrix, args.out.c_str()));
  // The report carries wall time, so it goes to the log stream, not into a
  // reproducible artifact.
  std::cerr << "training report: " << report_s.get() << "\n";
  std::cerr << "matrix " << commrec_matrix_rows(matrix) << "x" << commrec_matrix_dim(matrix)
            << " -> " << args.out << "\n";
  return 0;
}

struct EmbedArgs {
  std::string corpus;
  std::string vocab;
  std::string matrix;
  std::string split = "all";
  std::string out;
};

int run_embed(const EmbedArgs& args) {
  CorpusHandle corpus = load_corpus(args.corpus);
  VocabHandle vocab = load_vocab(args.vocab);
  MatrixHandle matrix = load_matrix(args.matrix);
  commrec_vectors* vectors = nullptr;
  size_t skipped = 0;
  check(commrec_embed_users(corpus.get(), vocab.get(), matrix.get(), args.split.c_str(),
                            &vectors, &skipped));
  VectorsHandle vectors_h(vectors);
  check(commrec_vectors_save(vectors, args.out.c_str()));
  std::cerr << "embedded " << commrec_vectors_count(vectors) << " users (skipped " << skipped
            << " empty) -> " << args.out << "\n";
  return 0;
}

struct BuildIndexArgs {
  std::string vectors;
  std::string out;
  uint32_t lsh_tables = 32;
  uint32_t lsh_bits = 12;
  uint64_t seed = 0;
  bool no_lsh = false;
};

int run_build_index(const BuildIndexArgs& args) {
  VectorsHandle vectors = load_vectors(args.vectors);
  commrec_index* index = nullptr;
  uint32_t tables = args.no_lsh ? 0 : args.lsh_tables;
  check(commrec_index_build(vectors.get(), tables, args.lsh_bits, args.seed, &index));
  IndexHandle index_h(index);
  check(commrec_index_save(index, args.out.c_str()));
  std::cerr << "index of " << commrec_index_size(index) << " users -> " << args.out << "\n";
  return 0;
}

struct FitArgs {
  std::string corpus;
  std::string vectors;
  std::string community;
  std::string name;
  std::string neg_split = "classifier-train";
  double lambda = 1.0;
  std::string out;
};

int run_fit(const FitArgs& args) {
  CorpusHandle corpus = load_corpus(args.corpus);
  VectorsHandle vectors = load_vectors(args.vectors);
  std::string community = select_community(args.community, args.name);
  commrec_classifier* clf = nullptr;
  check(commrec_fit(corpus.get(), vectors.get(), community.c_str(), args.neg_split.c_str(),
                    args.lambda, &clf));
  ClassifierHandle clf_h(clf);
  check(commrec_classifier_save(clf, args.out.c_str()));
  std::cerr << "classifier (k=" << commrec_classifier_dim(clf) << ") -> " << args.out << "\n";
  return 0;
}

struct RetrieveArgs {
  std::string index;
  std::string classifier;
  size_t k = 10;
  std::string mode = "exact";
  std::string out;
};

int run_retrieve(const RetrieveArgs& args) {
  commrec_index* index = nullptr;
  check(commrec_index_load(args.index.c_str(), &index));
  IndexHandle index_h(index);
  commrec_classifier* clf = nullptr;
  check(commrec_classifier_load(args.classifier.c_str(), &clf));
  ClassifierHandle clf_h(clf);

  size_t dim = commrec_classifier_dim(clf);
  std::vector<double> w(dim);
  check(commrec_classifier_weights(clf, w.data()));

  commrec_query_mode mode =
      args.mode == "approx" ? COMMREC_QUERY_APPROX : COMMREC_QUERY_EXACT;
  char* result = nullptr;
  check(commrec_index_query(index, w.data(), dim, args.k, mode, &result));
  CStr result_s(result);
  write_output(result_s.get(), args.out);
  return 0;
}

struct EvaluateArgs {
  std::string corpus;
  std::string vectors;
  std::string community;
  std::string name;
  std::string neg_split = "classifier-train";
  std::string test_split = "test";
  double lambda = 1.0;
  std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
  CorpusHandle corpus = load_corpus(args.corpus);
  VectorsHandle vectors = load_vectors(args.vectors);

  json file = json::parse(read_file_or_die(args.community), nullptr, false);
  if (file.is_discarded()) {
    std::cerr << "error: " << args.community << " is not valid JSON\n";
    return 1;
  }
  std::vector<json> targets;
  if (file.is_object()) {
    targets.push_back(file);
  } else if (file.is_array()) {
    for (const auto& item : file) {
      if (args.name.empty() || item.value("name", "") == args.name) targets.push_back(item);
    }
  }
  if (!args.name.empty()) {
    std::erase_if(targets, [&](const json& t) { return t.value("name", "") != args.name; });
  }
  if (targets.empty()) {
    std::cerr << "error: no matching community in " << args.community << "\n";
    return 1;
  }

  auto evaluate_one = [&](const json& community) {
    char* report = nullptr;
    check(commrec_evaluate(corpus.get(), vectors.get(), community.dump().c_str(),
                           args.neg_split.c_str(), args.test_split.c_str(), args.lambda,
                           &report));
    CStr report_s(report);
    return json::parse(report_s.get());
  };

  if (targets.size() == 1) {
    write_output(evaluate_one(targets[0]).dump(2), args.out);
    return 0;
  }
  json reports = json::array();
  double auc_sum = 0.0;
  double inv_mrr_sum = 0.0;
  for (const auto& target : targets) {
    json report = evaluate_one(target);
    auc_sum += report["mean_auc"].get<double>();
    inv_mrr_sum += report["inv_mrr"].get<double>();
    reports.push_back(std::move(report));
  }
  json summary;
  summary["reports"] = std::move(reports);
  summary["mean_auc"] = auc_sum / static_cast<double>(targets.size());
  summary["mean_inv_mrr"] = inv_mrr_sum / static_cast<double>(targets.size());
  write_output(summary.dump(2), args.out);
  return 0;
}

struct DriftArgs {
  std::string matrix;
  std::string init;
  std::string vocab;
  size_t top = 1000;
  size_t clusters = 0;
  std::string linkage = "average";
  std::string format = "json";
  std::string out;
};

int run_drift(const DriftArgs& args) {
  MatrixHandle final_m = load_matrix(args.matrix);
  MatrixHandle init_m = load_matrix(args.init);
  VocabHandle vocab = load_vocab(args.vocab);
  char* result = nullptr;
  check(commrec_analyze_drift(final_m.get(), init_m.get(), vocab.get(), args.top, args.clusters,
                              args.linkage.c_str(), &result));
  CStr result_s(result);
  if (args.format == "tsv") {
    json obj = json::parse(result_s.get());
    std::ostringstream tsv;
    bool first = true;
    for (const auto& entry : obj["drift"]) {
      if (!first) tsv << "\n";
      first = false;
      tsv << entry["token"].get<std::string>() << '\t' << entry["distance"].dump();
    }
    write_output(tsv.str(), args.out);
  } else {
    write_output(result_s.get(), args.out);
  }
  return 0;
}

struct CommunitiesArgs {
  std::string vectors;
  std::string communities;
  std::string out;
};

int run_communities(const CommunitiesArgs& args) {
  VectorsHandle vectors = load_vectors(args.vectors);
  std::string communities = read_file_or_die(args.communities);
  char* result = nullptr;
  check(commrec_analyze_communities(vectors.get(), communities.c_str(), &result));
  CStr result_s(result);
  write_output(result_s.get(), args.out);
  return 0;
}

struct TopTweetsArgs {
  std::string classifier;
  std::string corpus;
  std::string user;
  std::string vocab;
  std::string matrix;
  size_t k = 10;
  std::string out;
};

int run_top_tweets(const TopTweetsArgs& args) {
  commrec_classifier* clf = nullptr;
  check(commrec_classifier_load(args.classifier.c_str(), &clf));
  ClassifierHandle clf_h(clf);
  CorpusHandle corpus = load_corpus(args.corpus);
  VocabHandle vocab = load_vocab(args.vocab);
  MatrixHandle matrix = load_matrix(args.matrix);
  char* result = nullptr;
  check(commrec_top_tweets(clf, corpus.get(), args.user.c_str(), vocab.get(), matrix.get(),
                           args.k, &result));
  CStr result_s(result);
  write_output(result_s.get(), args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commrec: community member retrieval from user text"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with planted communities");
  add_common(synth_cmd);
  synth_cmd->add_option("--spec", synth.spec_path, "full synth config as a JSON file");
  synth_cmd->add_option("--vocab-size", synth.vocab_size, "vocabulary size")->capture_default_str();
  synth_cmd->add_option("--background-users", synth.background_users, "background user count")->capture_default_str();
  synth_cmd->add_option("--communities", synth.communities, "number of planted communities")->capture_default_str();
  synth_cmd->add_option("--community-size", synth.community_size, "members per community")->capture_default_str();
  synth_cmd->add_option("--topic-words", synth.topic_words, "topic words per community")->capture_default_str();
  synth_cmd->add_option("--topic-mix", synth.topic_mix, "member topic-word probability")->capture_default_str();
  synth_cmd->add_option("--posts-per-user", synth.posts_per_user, "posts per user")->capture_default_str();
  synth_cmd->add_option("--tokens-per-post", synth.tokens_per_post, "tokens per post")->capture_default_str();
  synth_cmd->add_option("--zipf", synth.zipf, "background Zipf exponent")->capture_default_str();
  synth_cmd->add_option("--embed-frac", synth.embed_frac, "embed-train share of background users")->capture_default_str();
  synth_cmd->add_option("--clf-frac", synth.clf_frac, "classifier-train share of background users")->capture_default_str();
  auto* seed_opt = synth_cmd->add_option("--seed", synth.seed, "rng seed")->capture_default_str();
  synth_cmd->add_option("--out-corpus", synth.out_corpus, "corpus JSONL output path")->required();
  synth_cmd->add_option("--out-communities", synth.out_communities, "community specs JSON output path");
  synth_cmd->callback([&] {
    synth.seed_given = seed_opt->count() > 0;
    std::exit(run_synth(synth));
  });

  BuildVocabArgs bv;
  auto* bv_cmd = app.add_subcommand("build-vocab", "build the vocabulary with PMI bigrams");
  add_common(bv_cmd);
  bv_cmd->add_option("--corpus", bv.corpus, "corpus JSONL")->required();
  bv_cmd->add_option("--min-count", bv.min_count, "frequency cutoff")->capture_default_str();
  bv_cmd->add_option("--max-size", bv.max_size, "vocabulary size cap")->capture_default_str();
  bv_cmd->add_option("--delta", bv.delta, "bigram score discount")->capture_default_str();
  bv_cmd->add_option("--theta", bv.theta, "bigram acceptance threshold")->capture_default_str();
  bv_cmd->add_option("--out", bv.out, "vocabulary TSV output path")->required();
  bv_cmd->callback([&] { std::exit(run_build_vocab(bv)); });

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-embeddings", "train the word embedding matrix on the re-identification objective");
  add_common(train_cmd);
  train_cmd->add_option("--corpus", train.corpus, "corpus JSONL")->required();
  train_cmd->add_option("--vocab", train.vocab, "vocabulary TSV")->required();
  train_cmd->add_option("--dim", train.dim, "embedding dimension")->capture_default_str();
  train_cmd->add_option("--sample-size", train.sample_size, "posts per sampled subset")->capture_default_str();
  train_cmd->add_option("--steps", train.steps, "total triplets")->capture_default_str();
  train_cmd->add_option("--batch", train.batch, "triplets per update")->capture_default_str();
  train_cmd->add_option("--learning-rate", train.learning_rate, "SGD learning rate")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "rng seed")->capture_default_str();
  train_cmd->add_option("--report-intervals", train.report_intervals, "training report granularity")->capture_default_str();
  train_cmd->add_option("--init", train.init, "random | pretrained")->check(CLI::IsMember({"random", "pretrained"}))->capture_default_str();
  train_cmd->add_option("--pretrained", train.pretrained, "pretrained vector file for --init pretrained");
  train_cmd->add_option("--out", train.out, "matrix output path")->required();
  train_cmd->callback([&] { std::exit(run_train(train)); });

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed-users", "embed corpus users through a trained matrix");
  add_common(embed_cmd);
  embed_cmd->add_option("--corpus", embed.corpus, "corpus JSONL")->required();
  embed_cmd->add_option("--vocab", embed.vocab, "vocabulary TSV")->required();
  embed_cmd->add_option("--matrix", embed.matrix, "embedding matrix")->required();
  embed_cmd->add_option("--split", embed.split, "all | embed-train | classifier-train | test")
      ->check(CLI::IsMember({"all", "embed-train", "classifier-train", "test"}))
      ->capture_default_str();
  embed_cmd->add_option("--out", embed.out, "user vectors output path")->required();
  embed_cmd->callback([&] { std::exit(run_embed(embed)); });

  BuildIndexArgs bi;
  auto* bi_cmd = app.add_subcommand("build-index", "build the retrieval index over user vectors");
  add_common(bi_cmd);
  bi_cmd->add_option("--vectors", bi.vectors, "user vectors file")->required();
  bi_cmd->add_option("--lsh-tables", bi.lsh_tables, "LSH table count")->capture_default_str();
  bi_cmd->add_option("--lsh-bits", bi.lsh_bits, "hash bits per table")->capture_default_str();
  bi_cmd->add_option("--seed", bi.seed, "hyperplane rng seed")->capture_default_str();
  bi_cmd->add_flag("--no-lsh", bi.no_lsh, "brute-force index only");
  bi_cmd->add_option("--out", bi.out, "index output path")->required();
  bi_cmd->callback([&] { std::exit(run_build_index(bi)); });

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a community classifier from a query set");
  add_common(fit_cmd);
  fit_cmd->add_option("--corpus", fit.corpus, "corpus JSONL (for the negative split)")->required();
  fit_cmd->add_option("--vectors", fit.vectors, "user vectors file")->required();
  fit_cmd->add_option("--community", fit.community, "community spec JSON")->required();
  fit_cmd->add_option("--name", fit.name, "community name when the file is an array");
  fit_cmd->add_option("--neg-split", fit.neg_split, "split used as negatives")->capture_default_str();
  fit_cmd->add_option("--lambda", fit.lambda, "L2 regularization weight")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "classifier output path")->required();
  fit_cmd->callback([&] { std::exit(run_fit(fit)); });

  RetrieveArgs retrieve;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "query the index with a fitted classifier");
  add_common(retrieve_cmd);
  retrieve_cmd->add_option("--index", retrieve.index, "index file")->required();
  retrieve_cmd->add_option("--classifier", retrieve.classifier, "classifier JSON")->required();
  retrieve_cmd->add_option("--k", retrieve.k, "results to return")->capture_default_str();
  retrieve_cmd->add_option("--mode", retrieve.mode, "exact | approx")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  retrieve_cmd->add_option("--out", retrieve.out, "output path (default stdout)");
  retrieve_cmd->callback([&] { std::exit(run_retrieve(retrieve)); });

  EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "leave-one-out evaluation of one or all communities");
  add_common(eval_cmd);
  eval_cmd->add_option("--corpus", evaluate.corpus, "corpus JSONL")->required();
  eval_cmd->add_option("--vectors", evaluate.vectors, "user vectors file")->required();
  eval_cmd->add_option("--community", evaluate.community, "community spec JSON (object or array)")->required();
  eval_cmd->add_option("--name", evaluate.name, "restrict to one community");
  eval_cmd->add_option("--neg-split", evaluate.neg_split, "negative training split")->capture_default_str();
  eval_cmd->add_option("--test-split", evaluate.test_split, "ranking pool split")->capture_default_str();
  eval_cmd->add_option("--lambda", evaluate.lambda, "L2 regularization weight")->capture_default_str();
  eval_cmd->add_option("--out", evaluate.out, "output path (default stdout)");
  eval_cmd->callback([&] { std::exit(run_evaluate(evaluate)); });

  DriftArgs drift;
  auto* drift_cmd = app.add_subcommand("analyze-drift", "tokens that moved farthest from initialization");
  add_common(drift_cmd);
  drift_cmd->add_option("--matrix", drift.matrix, "final matrix")->required();
  drift_cmd->add_option("--init", drift.init, "initial matrix")->required();
  drift_cmd->add_option("--vocab", drift.vocab, "vocabulary TSV")->required();
  drift_cmd->add_option("--top", drift.top, "entries to keep")->capture_default_str();
  drift_cmd->add_option("--clusters", drift.clusters, "also cluster the top tokens (0 = off)")->capture_default_str();
  drift_cmd->add_option("--linkage", drift.linkage, "average | single | complete")
      ->check(CLI::IsMember({"average", "single", "complete"}))
      ->capture_default_str();
  drift_cmd->add_option("--format", drift.format, "json | tsv")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  drift_cmd->add_option("--out", drift.out, "output path (default stdout)");
  drift_cmd->callback([&] { std::exit(run_drift(drift)); });

  CommunitiesArgs comm;
  auto* comm_cmd = app.add_subcommand("analyze-communities", "centroid distances between communities");
  add_common(comm_cmd);
  comm_cmd->add_option("--vectors", comm.vectors, "user vectors file")->required();
  comm_cmd->add_option("--communities", comm.communities, "community specs JSON")->required();
  comm_cmd->add_option("--out", comm.out, "output path (default stdout)");
  comm_cmd->callback([&] { std::exit(run_communities(comm)); });

  TopTweetsArgs tt;
  auto* tt_cmd = app.add_subcommand("top-tweets", "top scoring posts of a user under a classifier");
  add_common(tt_cmd);
  tt_cmd->add_option("--classifier", tt.classifier, "classifier JSON")->required();
  tt_cmd->add_option("--corpus", tt.corpus, "corpus JSONL")->required();
  tt_cmd->add_option("--user", tt.user, "user id")->required();
  tt_cmd->add_option("--vocab", tt.vocab, "vocabulary TSV")->required();
  tt_cmd->add_option("--matrix", tt.matrix, "embedding matrix")->required();
  tt_cmd->add_option("--k", tt.k, "posts to return")->capture_default_str();
  tt_cmd->add_option("--out", tt.out, "output path (default stdout)");
  tt_cmd->callback([&] { std::exit(run_top_tweets(tt)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
