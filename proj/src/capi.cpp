#include "commrec.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"

#include "commrec/analysis.hpp"
#include "commrec/classifier.hpp"
#include "commrec/corpus.hpp"
#include "commrec/embedding.hpp"
#include "commrec/error.hpp"
#include "commrec/eval.hpp"
#include "commrec/index.hpp"
#include "commrec/reid.hpp"
#include "commrec/synth.hpp"
#include "commrec/vocab.hpp"

using nlohmann::json;

struct commrec_corpus {
  commrec::Corpus value;
};
struct commrec_vocab {
  commrec::Vocabulary value;
};
struct commrec_matrix {
  commrec::EmbeddingMatrix value;
};
struct commrec_vectors {
  commrec::EmbeddingSet value;
};
struct commrec_index {
  commrec::RetrievalIndex value;
};
struct commrec_classifier {
  commrec::CommunityClassifier value;
};

namespace {

thread_local std::string g_last_error;

commrec_status map_errc(commrec::Errc code) {
  using commrec::Errc;
  switch (code) {
    case Errc::io_error: return COMMREC_ERR_IO;
    case Errc::malformed_line: return COMMREC_ERR_MALFORMED_LINE;
    case Errc::duplicate_user: return COMMREC_ERR_DUPLICATE_USER;
    case Errc::empty_corpus: return COMMREC_ERR_EMPTY_CORPUS;
    case Errc::zero_embedding: return COMMREC_ERR_ZERO_EMBEDDING;
    case Errc::insufficient_corpus: return COMMREC_ERR_INSUFFICIENT_CORPUS;
    case Errc::init_mismatch: return COMMREC_ERR_INIT_MISMATCH;
    case Errc::degenerate_labels: return COMMREC_ERR_DEGENERATE_LABELS;
    case Errc::dimension_mismatch: return COMMREC_ERR_DIMENSION_MISMATCH;
    case Errc::empty_index: return COMMREC_ERR_EMPTY_INDEX;
    case Errc::corrupt_index: return COMMREC_ERR_CORRUPT_INDEX;
    case Errc::matrix_mismatch: return COMMREC_ERR_MATRIX_MISMATCH;
    case Errc::invalid_cluster_count: return COMMREC_ERR_INVALID_CLUSTER_COUNT;
    case Errc::member_missing: return COMMREC_ERR_MEMBER_MISSING;
    case Errc::empty_input: return COMMREC_ERR_EMPTY_INPUT;
    case Errc::config_invalid: return COMMREC_ERR_CONFIG_INVALID;
  }
  return COMMREC_ERR_INTERNAL;
}

template <typename Fn>
commrec_status guarded(Fn&& fn) {
  try {
    fn();
    return COMMREC_OK;
  } catch (const commrec::Error& e) {
    g_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return COMMREC_ERR_INTERNAL;
  }
}

commrec_status invalid_argument(const char* what) {
  g_last_error = std::string("invalid argument: ") + what;
  return COMMREC_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<commrec::Split> parse_split_filter(const char* split) {
  if (split == nullptr || std::strcmp(split, "all") == 0) return std::nullopt;
  return commrec::parse_split(split);
}

commrec::CommunitySpec parse_community(const char* community_json) {
  json obj = json::parse(community_json, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object() || !obj.contains("name") ||
      !obj.contains("members") || !obj["members"].is_array()) {
    commrec::fail(commrec::Errc::malformed_line,
                  "community JSON needs \"name\" and \"members\"");
  }
  commrec::CommunitySpec spec;
  spec.name = obj["name"].get<std::string>();
  for (const auto& m : obj["members"]) spec.members.push_back(m.get<std::string>());
  return spec;
}

// Pool of split users minus the community members, in corpus order.
commrec::EmbeddingSet pool_minus_members(const commrec::Corpus& corpus,
                                         const commrec::EmbeddingSet& vectors,
                                         commrec::Split split,
                                         const std::vector<std::string>& members) {
  std::unordered_set<std::string> member_set(members.begin(), members.end());
  std::unordered_map<std::string, const commrec::UserEmbedding*> by_id;
  for (const auto& e : vectors) by_id.emplace(e.user_id, &e);
  commrec::EmbeddingSet pool;
  for (const auto& user : corpus.users()) {
    if (user.split != split || member_set.count(user.user_id)) continue;
    auto it = by_id.find(user.user_id);
    if (it != by_id.end()) pool.push_back(*it->second);
  }
  return pool;
}

commrec::TrainConfig parse_train_config(const char* config_json) {
  commrec::TrainConfig cfg;
  if (config_json == nullptr || *config_json == '\0') return cfg;
  json obj = json::parse(config_json, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    commrec::fail(commrec::Errc::config_invalid, "train config is not a JSON object");
  }
  if (obj.contains("dim")) cfg.dim = obj["dim"].get<size_t>();
  if (obj.contains("sample_size")) cfg.sample_size = obj["sample_size"].get<size_t>();
  if (obj.contains("steps")) cfg.steps = obj["steps"].get<size_t>();
  if (obj.contains("batch")) cfg.batch = obj["batch"].get<size_t>();
  if (obj.contains("learning_rate")) cfg.learning_rate = obj["learning_rate"].get<double>();
  if (obj.contains("seed")) cfg.seed = obj["seed"].get<uint64_t>();
  if (obj.contains("report_intervals")) {
    cfg.report_intervals = obj["report_intervals"].get<size_t>();
  }
  std::string init = obj.value("init", "random");
  if (init == "random") {
    cfg.init = commrec::InitSpec::random();
  } else if (init == "pretrained") {
    if (!obj.contains("pretrained_path")) {
      commrec::fail(commrec::Errc::config_invalid,
                    "init \"pretrained\" requires \"pretrained_path\"");
    }
    cfg.init = commrec::InitSpec::pretrained(obj["pretrained_path"].get<std::string>());
  } else {
    commrec::fail(commrec::Errc::config_invalid, "init must be \"random\" or \"pretrained\"");
  }
  return cfg;
}

commrec::Linkage parse_linkage(const char* linkage) {
  if (linkage == nullptr || std::strcmp(linkage, "average") == 0) {
    return commrec::Linkage::average;
  }
  if (std::strcmp(linkage, "single") == 0) return commrec::Linkage::single;
  if (std::strcmp(linkage, "complete") == 0) return commrec::Linkage::complete;
  commrec::fail(commrec::Errc::config_invalid,
                "linkage must be \"average\", \"single\", or \"complete\"");
}

}  // namespace

extern "C" {

const char* commrec_version(void) { return "1.0.0"; }

const char* commrec_status_name(commrec_status status) {
  switch (status) {
    case COMMREC_OK: return "Ok";
    case COMMREC_ERR_IO: return "IoError";
    case COMMREC_ERR_MALFORMED_LINE: return "MalformedLine";
    case COMMREC_ERR_DUPLICATE_USER: return "DuplicateUser";
    case COMMREC_ERR_EMPTY_CORPUS: return "EmptyCorpus";
    case COMMREC_ERR_ZERO_EMBEDDING: return "ZeroEmbedding";
    case COMMREC_ERR_INSUFFICIENT_CORPUS: return "InsufficientCorpus";
    case COMMREC_ERR_INIT_MISMATCH: return "InitMismatch";
    case COMMREC_ERR_DEGENERATE_LABELS: return "DegenerateLabels";
    case COMMREC_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case COMMREC_ERR_EMPTY_INDEX: return "EmptyIndex";
    case COMMREC_ERR_CORRUPT_INDEX: return "CorruptIndex";
    case COMMREC_ERR_MATRIX_MISMATCH: return "MatrixMismatch";
    case COMMREC_ERR_INVALID_CLUSTER_COUNT: return "InvalidClusterCount";
    case COMMREC_ERR_MEMBER_MISSING: return "MemberMissing";
    case COMMREC_ERR_EMPTY_INPUT: return "EmptyInput";
    case COMMREC_ERR_CONFIG_INVALID: return "ConfigInvalid";
    case COMMREC_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case COMMREC_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* commrec_last_error(void) { return g_last_error.c_str(); }

void commrec_string_free(char* s) { std::free(s); }

/* ---- corpus ------------------------------------------------------------ */

commrec_status commrec_corpus_load(const char* path, commrec_corpus** out) {
  if (!path || !out) return invalid_argument("corpus_load");
  return guarded([&] { *out = new commrec_corpus{commrec::load_corpus(path)}; });
}

commrec_status commrec_corpus_save(const commrec_corpus* corpus, const char* path) {
  if (!corpus || !path) return invalid_argument("corpus_save");
  return guarded([&] { commrec::save_corpus(corpus->value, path); });
}

size_t commrec_corpus_user_count(const commrec_corpus* corpus) {
  return corpus ? corpus->value.size() : 0;
}

void commrec_corpus_free(commrec_corpus* corpus) { delete corpus; }

/* ---- synthetic corpora ------------------------------------------------- */

commrec_status commrec_synth_generate(const char* config_json, commrec_corpus** out_corpus,
                                      char** out_communities_json) {
  if (!config_json || !out_corpus) return invalid_argument("synth_generate");
  return guarded([&] {
    auto cfg = commrec::SynthConfig::from_json(config_json);
    auto [corpus, specs] = commrec::generate(cfg);
    *out_corpus = new commrec_corpus{std::move(corpus)};
    if (out_communities_json) {
      json arr = json::array();
      for (const auto& spec : specs) {
        json obj;
        obj["name"] = spec.name;
        obj["members"] = spec.members;
        arr.push_back(std::move(obj));
      }
      *out_communities_json = dup_string(arr.dump(2));
    }
  });
}

/* ---- vocabulary --------------------------------------------------------- */

commrec_status commrec_vocab_build(const commrec_corpus* corpus, int64_t min_count,
                                   int64_t max_size, int64_t delta, double theta,
                                   commrec_vocab** out) {
  if (!corpus || !out) return invalid_argument("vocab_build");
  return guarded([&] {
    commrec::VocabConfig cfg;
    cfg.min_count = min_count;
    cfg.max_size = max_size;
    cfg.delta = delta;
    cfg.theta = theta;
    *out = new commrec_vocab{commrec::Vocabulary::build(corpus->value, cfg)};
  });
}

commrec_status commrec_vocab_save(const commrec_vocab* vocab, const char* path) {
  if (!vocab || !path) return invalid_argument("vocab_save");
  return guarded([&] { vocab->value.save(path); });
}

commrec_status commrec_vocab_load(const char* path, commrec_vocab** out) {
  if (!path || !out) return invalid_argument("vocab_load");
  return guarded([&] { *out = new commrec_vocab{commrec::Vocabulary::load(path)}; });
}

size_t commrec_vocab_size(const commrec_vocab* vocab) {
  return vocab ? vocab->value.size() : 0;
}

void commrec_vocab_free(commrec_vocab* vocab) { delete vocab; }

/* ---- embedding matrix --------------------------------------------------- */

commrec_status commrec_train_reid(const commrec_corpus* corpus, const commrec_vocab* vocab,
                                  const char* train_config_json, commrec_matrix** out,
                                  char** out_report_json) {
  if (!corpus || !vocab || !out) return invalid_argument("train_reid");
  return guarded([&] {
    auto cfg = parse_train_config(train_config_json);
    auto [matrix, report] = commrec::train_reid(corpus->value, vocab->value, cfg);
    *out = new commrec_matrix{std::move(matrix)};
    if (out_report_json) {
      json obj;
      obj["mean_cost"] = report.mean_cost;
      obj["active_fraction"] = report.active_fraction;
      obj["wall_seconds"] = report.wall_seconds;
      *out_report_json = dup_string(obj.dump(2));
    }
  });
}

commrec_status commrec_matrix_random(const commrec_vocab* vocab, size_t dim, uint64_t seed,
                                     commrec_matrix** out) {
  if (!vocab || !out) return invalid_argument("matrix_random");
  return guarded([&] {
    commrec::Rng rng(seed);
    *out = new commrec_matrix{commrec::EmbeddingMatrix::random_init(vocab->value, dim, rng)};
  });
}

commrec_status commrec_matrix_save(const commrec_matrix* matrix, const char* path) {
  if (!matrix || !path) return invalid_argument("matrix_save");
  return guarded([&] { matrix->value.save(path); });
}

commrec_status commrec_matrix_load(const char* path, commrec_matrix** out) {
  if (!path || !out) return invalid_argument("matrix_load");
  return guarded([&] { *out = new commrec_matrix{commrec::EmbeddingMatrix::load(path)}; });
}

size_t commrec_matrix_dim(const commrec_matrix* matrix) {
  return matrix ? matrix->value.dim() : 0;
}

size_t commrec_matrix_rows(const commrec_matrix* matrix) {
  return matrix ? matrix->value.vocab_size() : 0;
}

void commrec_matrix_free(commrec_matrix* matrix) { delete matrix; }

/* ---- user vectors -------------------------------------------------------- */

commrec_status commrec_embed_users(const commrec_corpus* corpus, const commrec_vocab* vocab,
                                   const commrec_matrix* matrix, const char* split,
                                   commrec_vectors** out, size_t* out_skipped) {
  if (!corpus || !vocab || !matrix || !out) return invalid_argument("embed_users");
  return guarded([&] {
    if (vocab->value.hash() != matrix->value.vocab_hash() ||
        vocab->value.size() != matrix->value.vocab_size()) {
      commrec::fail(commrec::Errc::matrix_mismatch,
                    "matrix was built from a different vocabulary");
    }
    auto filter = parse_split_filter(split);
    commrec::EmbeddingSet set;
    size_t skipped = 0;
    for (const auto& user : corpus->value.users()) {
      if (filter && user.split != *filter) continue;
      commrec::SparseWeights bag = commrec::user_bag(user, vocab->value);
      if (bag.empty()) {
        ++skipped;
        continue;
      }
      set.push_back(commrec::embed(bag, matrix->value));
    }
    if (out_skipped) *out_skipped = skipped;
    *out = new commrec_vectors{std::move(set)};
  });
}

commrec_status commrec_vectors_save(const commrec_vectors* vectors, const char* path) {
  if (!vectors || !path) return invalid_argument("vectors_save");
  return guarded([&] { commrec::save_embeddings(vectors->value, path); });
}

commrec_status commrec_vectors_load(const char* path, commrec_vectors** out) {
  if (!path || !out) return invalid_argument("vectors_load");
  return guarded([&] { *out = new commrec_vectors{commrec::load_embeddings(path)}; });
}

size_t commrec_vectors_count(const commrec_vectors* vectors) {
  return vectors ? vectors->value.size() : 0;
}

void commrec_vectors_free(commrec_vectors* vectors) { delete vectors; }

/* ---- retrieval index ------------------------------------------------------ */

commrec_status commrec_index_build(const commrec_vectors* vectors, uint32_t lsh_tables,
                                   uint32_t lsh_bits, uint64_t lsh_seed, commrec_index** out) {
  if (!vectors || !out) return invalid_argument("index_build");
  return guarded([&] {
    std::optional<commrec::LshConfig> lsh;
    if (lsh_tables > 0) lsh = commrec::LshConfig{lsh_tables, lsh_bits, lsh_seed};
    *out = new commrec_index{commrec::RetrievalIndex::build(vectors->value, lsh)};
  });
}

commrec_status commrec_index_save(const commrec_index* index, const char* path) {
  if (!index || !path) return invalid_argument("index_save");
  return guarded([&] { index->value.save(path); });
}

commrec_status commrec_index_load(const char* path, commrec_index** out) {
  if (!path || !out) return invalid_argument("index_load");
  return guarded([&] { *out = new commrec_index{commrec::RetrievalIndex::load(path)}; });
}

size_t commrec_index_size(const commrec_index* index) {
  return index ? index->value.size() : 0;
}

commrec_status commrec_index_query(const commrec_index* index, const double* w, size_t dim,
                                   size_t k_out, commrec_query_mode mode, char** out_json) {
  if (!index || !w || !out_json) return invalid_argument("index_query");
  return guarded([&] {
    auto result = index->value.query_topk(
        std::span<const double>(w, dim), k_out,
        mode == COMMREC_QUERY_APPROX ? commrec::QueryMode::approx : commrec::QueryMode::exact);
    json arr = json::array();
    for (const auto& [id, s] : result.ranked) {
      json item;
      item["user_id"] = id;
      item["score"] = s;
      arr.push_back(std::move(item));
    }
    json obj;
    obj["results"] = std::move(arr);
    *out_json = dup_string(obj.dump(2));
  });
}

void commrec_index_free(commrec_index* index) { delete index; }

/* ---- community classifier -------------------------------------------------- */

commrec_status commrec_fit(const commrec_corpus* corpus, const commrec_vectors* vectors,
                           const char* community_json, const char* neg_split, double lambda,
                           commrec_classifier** out) {
  if (!corpus || !vectors || !community_json || !out) return invalid_argument("fit");
  return guarded([&] {
    auto spec = parse_community(community_json);
    commrec::Split split = neg_split ? commrec::parse_split(neg_split)
                                     : commrec::Split::classifier_train;

    std::unordered_map<std::string, const commrec::UserEmbedding*> by_id;
    for (const auto& e : vectors->value) by_id.emplace(e.user_id, &e);

    std::vector<commrec::LabeledEmbedding> train;
    for (const auto& id : spec.members) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        commrec::fail(commrec::Errc::member_missing,
                      "no embedding for member '" + id + "' of '" + spec.name + "'");
      }
      train.push_back({*it->second, 1});
    }
    for (const auto& e :
         pool_minus_members(corpus->value, vectors->value, split, spec.members)) {
      train.push_back({e, 0});
    }
    *out = new commrec_classifier{commrec::train_logreg(train, lambda)};
  });
}

commrec_status commrec_classifier_save(const commrec_classifier* clf, const char* path) {
  if (!clf || !path) return invalid_argument("classifier_save");
  return guarded([&] { clf->value.save(path); });
}

commrec_status commrec_classifier_load(const char* path, commrec_classifier** out) {
  if (!path || !out) return invalid_argument("classifier_load");
  return guarded([&] {
    *out = new commrec_classifier{commrec::CommunityClassifier::load(path)};
  });
}

size_t commrec_classifier_dim(const commrec_classifier* clf) {
  return clf ? clf->value.w.size() : 0;
}

commrec_status commrec_classifier_weights(const commrec_classifier* clf, double* out_w) {
  if (!clf || !out_w) return invalid_argument("classifier_weights");
  std::memcpy(out_w, clf->value.w.data(), clf->value.w.size() * sizeof(double));
  return COMMREC_OK;
}

double commrec_classifier_bias(const commrec_classifier* clf) {
  return clf ? clf->value.b : 0.0;
}

void commrec_classifier_free(commrec_classifier* clf) { delete clf; }

/* ---- evaluation ------------------------------------------------------------- */

commrec_status commrec_evaluate(const commrec_corpus* corpus, const commrec_vectors* vectors,
                                const char* community_json, const char* neg_split,
                                const char* test_split, double lambda,
                                char** out_report_json) {
  if (!corpus || !vectors || !community_json || !out_report_json) {
    return invalid_argument("evaluate");
  }
  return guarded([&] {
    auto spec = parse_community(community_json);
    commrec::Split neg = neg_split ? commrec::parse_split(neg_split)
                                   : commrec::Split::classifier_train;
    commrec::Split test = test_split ? commrec::parse_split(test_split) : commrec::Split::test;
    auto neg_pool = pool_minus_members(corpus->value, vectors->value, neg, spec.members);
    auto test_pool = pool_minus_members(corpus->value, vectors->value, test, spec.members);
    auto report = commrec::leave_one_out(spec, vectors->value, neg_pool, test_pool, lambda);
    *out_report_json = dup_string(report.to_json());
  });
}

/* ---- analyses ------------------------------------------------------------------ */

commrec_status commrec_analyze_drift(const commrec_matrix* final_matrix,
                                     const commrec_matrix* init_matrix,
                                     const commrec_vocab* vocab, size_t top_n,
                                     size_t n_clusters, const char* linkage, char** out_json) {
  if (!final_matrix || !init_matrix || !vocab || !out_json) {
    return invalid_argument("analyze_drift");
  }
  return guarded([&] {
    auto entries = commrec::embedding_drift(final_matrix->value, init_matrix->value,
                                            vocab->value, top_n);
    json obj;
    json drift = json::array();
    for (const auto& e : entries) {
      json item;
      item["token"] = e.token;
      item["distance"] = e.distance;
      drift.push_back(std::move(item));
    }
    obj["drift"] = std::move(drift);

    if (n_clusters > 0) {
      std::vector<std::pair<std::string, std::vector<double>>> rows;
      rows.reserve(entries.size());
      for (const auto& e : entries) {
        auto id = vocab->value.id_of(e.token);
        auto row = final_matrix->value.row(static_cast<size_t>(*id));
        rows.emplace_back(e.token, std::vector<double>(row.begin(), row.end()));
      }
      auto clusters =
          commrec::cluster_words(rows, n_clusters, parse_linkage(linkage));
      json cl = json::array();
      for (const auto& c : clusters) {
        json item;
        item["tokens"] = c.tokens;
        item["medoid"] = c.medoid;
        cl.push_back(std::move(item));
      }
      obj["clusters"] = std::move(cl);
    }
    *out_json = dup_string(obj.dump(2));
  });
}

commrec_status commrec_analyze_communities(const commrec_vectors* vectors,
                                           const char* communities_json, char** out_json) {
  if (!vectors || !communities_json || !out_json) {
    return invalid_argument("analyze_communities");
  }
  return guarded([&] {
    json arr = json::parse(communities_json, nullptr, /*allow_exceptions=*/false);
    if (arr.is_discarded()) {
      commrec::fail(commrec::Errc::malformed_line, "communities JSON is invalid");
    }
    if (arr.is_object()) arr = json::array({arr});
    if (!arr.is_array()) {
      commrec::fail(commrec::Errc::malformed_line, "communities JSON must be an array");
    }

    std::unordered_map<std::string, const commrec::UserEmbedding*> by_id;
    for (const auto& e : vectors->value) by_id.emplace(e.user_id, &e);

    std::vector<std::pair<std::string, commrec::EmbeddingSet>> communities;
    for (const auto& item : arr) {
      if (!item.is_object() || !item.contains("name") || !item.contains("members")) {
        commrec::fail(commrec::Errc::malformed_line,
                      "community entries need \"name\" and \"members\"");
      }
      std::string name = item["name"].get<std::string>();
      commrec::EmbeddingSet members;
      for (const auto& m : item["members"]) {
        auto id = m.get<std::string>();
        auto it = by_id.find(id);
        if (it == by_id.end()) {
          commrec::fail(commrec::Errc::member_missing,
                        "no embedding for member '" + id + "' of '" + name + "'");
        }
        members.push_back(*it->second);
      }
      communities.emplace_back(std::move(name), std::move(members));
    }

    auto sim = commrec::community_similarity(communities);
    json obj;
    obj["names"] = sim.names;
    obj["distance"] = sim.distance;
    json nearest = json::object();
    for (size_t i = 0; i < sim.names.size(); ++i) nearest[sim.names[i]] = sim.nearest[i];
    obj["nearest"] = std::move(nearest);
    *out_json = dup_string(obj.dump(2));
  });
}

commrec_status commrec_top_tweets(const commrec_classifier* clf, const commrec_corpus* corpus,
                                  const char* user_id, const commrec_vocab* vocab,
                                  const commrec_matrix* matrix, size_t k_out, char** out_json) {
  if (!clf || !corpus || !user_id || !vocab || !matrix || !out_json) {
    return invalid_argument("top_tweets");
  }
  return guarded([&] {
    const commrec::UserDocument* doc = corpus->value.find(user_id);
    if (!doc) {
      commrec::fail(commrec::Errc::member_missing,
                    std::string("user '") + user_id + "' not in corpus");
    }
    auto ranked = commrec::top_tweets(clf->value, *doc, matrix->value, vocab->value, k_out);
    json arr = json::array();
    for (const auto& [post, s] : ranked) {
      json item;
      item["post"] = post;
      item["score"] = s;
      arr.push_back(std::move(item));
    }
    json obj;
    obj["user_id"] = user_id;
    obj["posts"] = std::move(arr);
    *out_json = dup_string(obj.dump(2));
  });
}

} /* extern "C" */
