#ifndef COMMREC_EMBEDDING_HPP_
#define COMMREC_EMBEDDING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commrec/corpus.hpp"
#include "commrec/rng.hpp"
#include "commrec/vocab.hpp"

namespace commrec {

// Log-scaled bag-of-words over a subset of a user's posts. token ids strictly
// increasing, weights = log(count + 1) > 0.
struct SparseWeights {
  std::vector<std::pair<int64_t, double>> pairs;
  std::string owner_id;
  std::string subset;  // which posts the bag covers, e.g. "all" or "anchor"

  bool empty() const { return pairs.empty(); }
};

inline double log_weight(double count) { return std::log(count + 1.0); }

// Counts tokens over the supplied (bigram-joined) post token lists; OOV
// tokens are dropped silently.
SparseWeights bag_of_words(std::span<const std::vector<std::string>> posts,
                           const Vocabulary& vocab);

// Applies the vocabulary's bigrams to every post of the user, then counts.
SparseWeights user_bag(const UserDocument& user, const Vocabulary& vocab);

// Same, restricted to the given post indices.
SparseWeights subset_bag(const UserDocument& user, std::span<const size_t> post_indices,
                         const Vocabulary& vocab, std::string subset_label);

class EmbeddingMatrix {
 public:
  EmbeddingMatrix(size_t vocab_size, size_t dim, uint64_t vocab_hash);

  // i.i.d. Gaussian entries, mean 0, std 1/sqrt(dim).
  static EmbeddingMatrix random_init(const Vocabulary& vocab, size_t dim, Rng& rng);

  size_t vocab_size() const { return vocab_size_; }
  size_t dim() const { return dim_; }
  uint64_t vocab_hash() const { return vocab_hash_; }

  std::span<double> row(size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;

  // Binary: magic "UEMB", version, |V|, dim, vocab hash, f32 rows.
  void save(const std::string& path) const;
  static EmbeddingMatrix load(const std::string& path);

 private:
  size_t vocab_size_;
  size_t dim_;
  uint64_t vocab_hash_;
  std::vector<double> data_;  // row-major, kept in f64 in memory
};

struct UserEmbedding {
  std::string user_id;
  std::vector<double> vec;  // unit norm
};

// u = normalize(w^T E). Throws Errc::zero_embedding when the bag is empty or
// the projection norm is below 1e-12.
UserEmbedding embed(const SparseWeights& weights, const EmbeddingMatrix& matrix);

using EmbeddingSet = std::vector<UserEmbedding>;

// Binary user-vector file: magic "UVEC", version, n, dim, then per user a
// length-prefixed id and f32 components.
void save_embeddings(const EmbeddingSet& set, const std::string& path);
EmbeddingSet load_embeddings(const std::string& path);

}  // namespace commrec

#endif  // COMMREC_EMBEDDING_HPP_
