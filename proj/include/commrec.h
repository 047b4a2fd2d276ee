/* commrec: text-based community member retrieval.
 *
 * C interface to the commrec core. All objects are opaque handles created
 * and destroyed through this API; every fallible call returns a
 * commrec_status and leaves a human-readable message retrievable with
 * commrec_last_error() on failure. Strings returned through char** out
 * parameters are heap-allocated and must be released with
 * commrec_string_free().
 */

#ifndef COMMREC_H_
#define COMMREC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  COMMREC_OK = 0,
  COMMREC_ERR_IO = 1,
  COMMREC_ERR_MALFORMED_LINE = 2,
  COMMREC_ERR_DUPLICATE_USER = 3,
  COMMREC_ERR_EMPTY_CORPUS = 4,
  COMMREC_ERR_ZERO_EMBEDDING = 5,
  COMMREC_ERR_INSUFFICIENT_CORPUS = 6,
  COMMREC_ERR_INIT_MISMATCH = 7,
  COMMREC_ERR_DEGENERATE_LABELS = 8,
  COMMREC_ERR_DIMENSION_MISMATCH = 9,
  COMMREC_ERR_EMPTY_INDEX = 10,
  COMMREC_ERR_CORRUPT_INDEX = 11,
  COMMREC_ERR_MATRIX_MISMATCH = 12,
  COMMREC_ERR_INVALID_CLUSTER_COUNT = 13,
  COMMREC_ERR_MEMBER_MISSING = 14,
  COMMREC_ERR_EMPTY_INPUT = 15,
  COMMREC_ERR_CONFIG_INVALID = 16,
  COMMREC_ERR_INVALID_ARGUMENT = 17,
  COMMREC_ERR_INTERNAL = 18
} commrec_status;

typedef enum { COMMREC_QUERY_EXACT = 0, COMMREC_QUERY_APPROX = 1 } commrec_query_mode;

typedef struct commrec_corpus commrec_corpus;
typedef struct commrec_vocab commrec_vocab;
typedef struct commrec_matrix commrec_matrix;     /* word embedding matrix  */
typedef struct commrec_vectors commrec_vectors;   /* per-user embeddings    */
typedef struct commrec_index commrec_index;
typedef struct commrec_classifier commrec_classifier;

const char* commrec_version(void);
const char* commrec_status_name(commrec_status status);
/* Message for the most recent failure on this thread. */
const char* commrec_last_error(void);
void commrec_string_free(char* s);

/* ---- corpus ------------------------------------------------------------ */

commrec_status commrec_corpus_load(const char* path, commrec_corpus** out);
commrec_status commrec_corpus_save(const commrec_corpus* corpus, const char* path);
size_t commrec_corpus_user_count(const commrec_corpus* corpus);
void commrec_corpus_free(commrec_corpus* corpus);

/* ---- synthetic corpora ------------------------------------------------- */

/* config_json: see the synth config schema in the README. The generated
 * community specs are returned as a JSON array. */
commrec_status commrec_synth_generate(const char* config_json, commrec_corpus** out_corpus,
                                      char** out_communities_json);

/* ---- vocabulary --------------------------------------------------------- */

commrec_status commrec_vocab_build(const commrec_corpus* corpus, int64_t min_count,
                                   int64_t max_size, int64_t delta, double theta,
                                   commrec_vocab** out);
commrec_status commrec_vocab_save(const commrec_vocab* vocab, const char* path);
commrec_status commrec_vocab_load(const char* path, commrec_vocab** out);
size_t commrec_vocab_size(const commrec_vocab* vocab);
void commrec_vocab_free(commrec_vocab* vocab);

/* ---- embedding matrix --------------------------------------------------- */

/* train_config_json keys (all optional): dim, sample_size, steps, batch,
 * learning_rate, seed, report_intervals, init ("random" | "pretrained"),
 * pretrained_path. The training report (costs per interval, active triplet
 * fractions, wall seconds) is returned as JSON when out_report_json is
 * non-NULL. */
commrec_status commrec_train_reid(const commrec_corpus* corpus, const commrec_vocab* vocab,
                                  const char* train_config_json, commrec_matrix** out,
                                  char** out_report_json);
commrec_status commrec_matrix_random(const commrec_vocab* vocab, size_t dim, uint64_t seed,
                                     commrec_matrix** out);
commrec_status commrec_matrix_save(const commrec_matrix* matrix, const char* path);
commrec_status commrec_matrix_load(const char* path, commrec_matrix** out);
size_t commrec_matrix_dim(const commrec_matrix* matrix);
size_t commrec_matrix_rows(const commrec_matrix* matrix);
void commrec_matrix_free(commrec_matrix* matrix);

/* ---- user vectors -------------------------------------------------------- */

/* split: NULL or "all" for every user, otherwise one of "embed-train",
 * "classifier-train", "test". Users whose bag of words is empty are skipped;
 * their count lands in *out_skipped when non-NULL. */
commrec_status commrec_embed_users(const commrec_corpus* corpus, const commrec_vocab* vocab,
                                   const commrec_matrix* matrix, const char* split,
                                   commrec_vectors** out, size_t* out_skipped);
commrec_status commrec_vectors_save(const commrec_vectors* vectors, const char* path);
commrec_status commrec_vectors_load(const char* path, commrec_vectors** out);
size_t commrec_vectors_count(const commrec_vectors* vectors);
void commrec_vectors_free(commrec_vectors* vectors);

/* ---- retrieval index ------------------------------------------------------ */

/* lsh_tables == 0 builds a brute-force-only index. */
commrec_status commrec_index_build(const commrec_vectors* vectors, uint32_t lsh_tables,
                                   uint32_t lsh_bits, uint64_t lsh_seed, commrec_index** out);
commrec_status commrec_index_save(const commrec_index* index, const char* path);
commrec_status commrec_index_load(const char* path, commrec_index** out);
size_t commrec_index_size(const commrec_index* index);
/* Result: {"results": [{"user_id": ..., "score": ...}, ...]} */
commrec_status commrec_index_query(const commrec_index* index, const double* w, size_t dim,
                                   size_t k_out, commrec_query_mode mode, char** out_json);
void commrec_index_free(commrec_index* index);

/* ---- community classifier -------------------------------------------------- */

/* Fits a classifier for the community named in community_json
 * ({"name","members"}): positives are the members' vectors, negatives every
 * user of neg_split in the corpus minus the members. */
commrec_status commrec_fit(const commrec_corpus* corpus, const commrec_vectors* vectors,
                           const char* community_json, const char* neg_split, double lambda,
                           commrec_classifier** out);
commrec_status commrec_classifier_save(const commrec_classifier* clf, const char* path);
commrec_status commrec_classifier_load(const char* path, commrec_classifier** out);
size_t commrec_classifier_dim(const commrec_classifier* clf);
commrec_status commrec_classifier_weights(const commrec_classifier* clf, double* out_w);
double commrec_classifier_bias(const commrec_classifier* clf);
void commrec_classifier_free(commrec_classifier* clf);

/* ---- evaluation ------------------------------------------------------------- */

/* Leave-one-out over the community members: negatives come from neg_split
 * users, the ranking pool from test_split users, both minus community
 * members. Returns the report as JSON. */
commrec_status commrec_evaluate(const commrec_corpus* corpus, const commrec_vectors* vectors,
                                const char* community_json, const char* neg_split,
                                const char* test_split, double lambda, char** out_report_json);

/* ---- analyses ------------------------------------------------------------------ */

/* Tokens whose embedding rows moved farthest from initialization. When
 * n_clusters > 0 the top tokens are also clustered (linkage: "average",
 * "single", or "complete"; NULL means average). */
commrec_status commrec_analyze_drift(const commrec_matrix* final_matrix,
                                     const commrec_matrix* init_matrix,
                                     const commrec_vocab* vocab, size_t top_n,
                                     size_t n_clusters, const char* linkage, char** out_json);

/* communities_json: array of {"name","members"}. Produces the pairwise
 * centroid cosine-distance table and each community's nearest neighbor. */
commrec_status commrec_analyze_communities(const commrec_vectors* vectors,
                                           const char* communities_json, char** out_json);

/* Top scoring posts of one user under a fitted classifier. */
commrec_status commrec_top_tweets(const commrec_classifier* clf, const commrec_corpus* corpus,
                                  const char* user_id, const commrec_vocab* vocab,
                                  const commrec_matrix* matrix, size_t k_out, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COMMREC_H_ */
