#ifndef COMMREC_ANALYSIS_HPP_
#define COMMREC_ANALYSIS_HPP_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commrec/classifier.hpp"
#include "commrec/embedding.hpp"
#include "commrec/vocab.hpp"

namespace commrec {

struct DriftEntry {
  std::string token;
  double distance = 0.0;  // Euclidean between final and initial row
};

// Tokens whose rows moved farthest from initialization, descending with a
// lexicographic tie-break. Matrices must share dim and vocabulary hash.
std::vector<DriftEntry> embedding_drift(const EmbeddingMatrix& final_matrix,
                                        const EmbeddingMatrix& init_matrix,
                                        const Vocabulary& vocab, size_t top_n);

enum class Linkage { average, single, complete };

struct WordCluster {
  std::vector<std::string> tokens;
  std::string medoid;
};

// Agglomerative clustering under cosine distance. Merge ties break on the
// smallest cluster-index pair, so repeated runs agree exactly.
std::vector<WordCluster> cluster_words(
    std::span<const std::pair<std::string, std::vector<double>>> rows, size_t n_clusters,
    Linkage linkage = Linkage::average);

struct CommunitySimilarity {
  std::vector<std::string> names;
  std::vector<std::vector<double>> distance;       // symmetric, zero diagonal
  std::vector<std::string> nearest;                // per community, excludes self
};

// Centroid = renormalized mean of member embeddings; distances are cosine.
CommunitySimilarity community_similarity(
    std::span<const std::pair<std::string, EmbeddingSet>> communities);

// Each post embedded alone and scored by the classifier; all-OOV posts are
// skipped. Returns up to k_out (post text, score) pairs, best first.
std::vector<std::pair<std::string, double>> top_tweets(const CommunityClassifier& c,
                                                       const UserDocument& doc,
                                                       const EmbeddingMatrix& matrix,
                                                       const Vocabulary& vocab,
                                                       size_t k_out);

}  // namespace commrec

#endif  // COMMREC_ANALYSIS_HPP_
