#ifndef COMMREC_REID_HPP_
#define COMMREC_REID_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commrec/corpus.hpp"
#include "commrec/embedding.hpp"
#include "commrec/rng.hpp"

namespace commrec {

// anchor and positive come from disjoint post subsets of one user, the
// negative from a different user.
struct Triplet {
  SparseWeights anchor;
  SparseWeights positive;
  SparseWeights negative;
};

struct InitSpec {
  enum class Kind { random, pretrained };
  Kind kind = Kind::random;
  std::string path;  // pretrained vector file when kind == pretrained

  static InitSpec random() { return {}; }
  static InitSpec pretrained(std::string p) { return {Kind::pretrained, std::move(p)}; }
};

struct TrainConfig {
  size_t dim = 128;
  size_t sample_size = 50;    // posts per subset
  size_t steps = 200000;      // total triplets
  size_t batch = 32;
  double learning_rate = 0.05;
  uint64_t seed = 0;
  InitSpec init;
  size_t report_intervals = 10;
};

struct TrainingReport {
  std::vector<double> mean_cost;        // per reporting interval
  std::vector<double> active_fraction;  // share of triplets with nonzero cost
  double wall_seconds = 0.0;
};

double cosine_distance(std::span<const double> u, std::span<const double> v);
inline double cosine_distance(const UserEmbedding& u, const UserEmbedding& v) {
  return cosine_distance(std::span<const double>(u.vec), std::span<const double>(v.vec));
}

// Hinge (1 + d(a,p) - d(a,n))^+ with the margin fixed at 1.
double triplet_cost(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative);
inline double triplet_cost(const UserEmbedding& a, const UserEmbedding& p,
                           const UserEmbedding& n) {
  return triplet_cost(std::span<const double>(a.vec), std::span<const double>(p.vec),
                      std::span<const double>(n.vec));
}

// Subgradient of triplet_cost w.r.t. the matrix rows, nonzero only on rows
// whose tokens appear in the triplet. Ordered by row for deterministic
// application.
struct SparseGrad {
  std::map<size_t, std::vector<double>> rows;
};

SparseGrad triplet_gradient(const Triplet& triplet, const EmbeddingMatrix& matrix);

// Precomputes per-post joined token ids so bags can be assembled quickly.
// Eligible users have at least 4 posts (and match the split filter if set).
class TripletSampler {
 public:
  TripletSampler(const Corpus& corpus, const Vocabulary& vocab, size_t sample_size,
                 std::optional<Split> filter = std::nullopt);

  size_t eligible_count() const { return eligible_.size(); }

  // Throws Errc::insufficient_corpus when fewer than 2 users are eligible.
  Triplet sample(Rng& rng) const;

 private:
  struct PreparedUser {
    const UserDocument* doc;
    std::vector<std::vector<int64_t>> post_ids;  // joined token ids per post
  };
  std::vector<PreparedUser> eligible_;
  size_t sample_size_;

  SparseWeights make_bag(const PreparedUser& user, std::span<const size_t> posts,
                         const char* label) const;
};

Triplet sample_triplet(const Corpus& corpus, const Vocabulary& vocab, size_t sample_size,
                       Rng& rng);

// Text vector file: header "<rows> <dim>", then "token v1 ... vk" rows.
// Tokens absent from the vocabulary are ignored; vocabulary tokens absent
// from the file keep their random initialization.
EmbeddingMatrix load_pretrained(const std::string& path, const Vocabulary& vocab,
                                size_t dim, Rng& rng);

// Mini-batch SGD on the triplet objective over embed-train users.
std::pair<EmbeddingMatrix, TrainingReport> train_reid(const Corpus& corpus,
                                                      const Vocabulary& vocab,
                                                      const TrainConfig& cfg);

}  // namespace commrec

#endif  // COMMREC_REID_HPP_
