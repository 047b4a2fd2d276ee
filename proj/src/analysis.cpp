#include "commrec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "commrec/error.hpp"

namespace commrec {

namespace {

double cosine_distance_raw(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    dot += a[j] * b[j];
    na += a[j] * a[j];
    nb += b[j] * b[j];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < 1e-12 || nb < 1e-12) {
    fail(Errc::zero_embedding, "cosine distance undefined for a zero vector");
  }
  return 1.0 - dot / (na * nb);
}

}  // namespace

std::vector<DriftEntry> embedding_drift(const EmbeddingMatrix& final_matrix,
                                        const EmbeddingMatrix& init_matrix,
                                        const Vocabulary& vocab, size_t top_n) {
  if (final_matrix.dim() != init_matrix.dim() ||
      final_matrix.vocab_size() != init_matrix.vocab_size() ||
      final_matrix.vocab_hash() != init_matrix.vocab_hash()) {
    fail(Errc::matrix_mismatch, "matrices differ in dimension or vocabulary binding");
  }
  if (vocab.size() != final_matrix.vocab_size() || vocab.hash() != final_matrix.vocab_hash()) {
    fail(Errc::matrix_mismatch, "vocabulary does not match the matrices");
  }

  std::vector<DriftEntry> entries;
  entries.reserve(vocab.size());
  for (size_t i = 0; i < vocab.size(); ++i) {
    auto f = final_matrix.row(i);
    auto g = init_matrix.row(i);
    double d_sq = 0.0;
    for (size_t j = 0; j < f.size(); ++j) {
      double d = f[j] - g[j];
      d_sq += d * d;
    }
    entries.push_back({vocab.entry(static_cast<int64_t>(i)).token, std::sqrt(d_sq)});
  }
  std::sort(entries.begin(), entries.end(), [](const DriftEntry& a, const DriftEntry& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return a.token < b.token;
  });
  if (entries.size() > top_n) entries.resize(top_n);
  return entries;
}

std::vector<WordCluster> cluster_words(
    std::span<const std::pair<std::string, std::vector<double>>> rows, size_t n_clusters,
    Linkage linkage) {
  const size_t n = rows.size();
  if (n_clusters < 1 || n_clusters > n) {
    fail(Errc::invalid_cluster_count, "n_clusters must be in [1, " + std::to_string(n) + "]");
  }

  // Pairwise cosine distances, kept for the medoid computation.
  std::vector<std::vector<double>> base(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double d = cosine_distance_raw(rows[i].second, rows[j].second);
      base[i][j] = d;
      base[j][i] = d;
    }
  }

  std::vector<std::vector<double>> dist = base;  // Lance-Williams working copy
  std::vector<bool> active(n, true);
  std::vector<size_t> sizes(n, 1);
  std::vector<std::vector<size_t>> members(n);
  for (size_t i = 0; i < n; ++i) members[i] = {i};

  size_t remaining = n;
  while (remaining > n_clusters) {
    // Global minimum with the smallest (i, j) pair on ties.
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0;
    size_t bj = 0;
    bool found = false;
    for (size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (dist[i][j] < best) {
          best = dist[i][j];
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) break;

    // Merge bj into bi.
    for (size_t x = 0; x < n; ++x) {
      if (!active[x] || x == bi || x == bj) continue;
      double d;
      switch (linkage) {
        case Linkage::average:
          d = (static_cast<double>(sizes[bi]) * dist[bi][x] +
               static_cast<double>(sizes[bj]) * dist[bj][x]) /
              static_cast<double>(sizes[bi] + sizes[bj]);
          break;
        case Linkage::single:
          d = std::min(dist[bi][x], dist[bj][x]);
          break;
        case Linkage::complete:
          d = std::max(dist[bi][x], dist[bj][x]);
          break;
        default:
          d = dist[bi][x];
      }
      dist[bi][x] = d;
      dist[x][bi] = d;
    }
    sizes[bi] += sizes[bj];
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    members[bj].clear();
    active[bj] = false;
    --remaining;
  }

  std::vector<WordCluster> clusters;
  for (size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    WordCluster cluster;
    for (size_t idx : members[i]) cluster.tokens.push_back(rows[idx].first);
    std::sort(cluster.tokens.begin(), cluster.tokens.end());
    // Medoid: member minimizing total cosine distance to the others.
    double best_sum = std::numeric_limits<double>::infinity();
    std::string best_token;
    for (size_t a : members[i]) {
      double sum = 0.0;
      for (size_t b : members[i]) sum += base[a][b];
      if (sum < best_sum || (sum == best_sum && rows[a].first < best_token)) {
        best_sum = sum;
        best_token = rows[a].first;
      }
    }
    cluster.medoid = std::move(best_token);
    clusters.push_back(std::move(cluster));
  }
  std::sort(clusters.begin(), clusters.end(), [](const WordCluster& a, const WordCluster& b) {
    if (a.tokens.size() != b.tokens.size()) return a.tokens.size() > b.tokens.size();
    return a.tokens.front() < b.tokens.front();
  });
  return clusters;
}

CommunitySimilarity community_similarity(
    std::span<const std::pair<std::string, EmbeddingSet>> communities) {
  if (communities.empty()) fail(Errc::empty_input, "no communities given");
  const size_t n = communities.size();

  std::vector<std::vector<double>> centroids;
  centroids.reserve(n);
  CommunitySimilarity out;
  for (const auto& [name, members] : communities) {
    if (members.empty()) {
      fail(Errc::config_invalid, "community '" + name + "' has no member embeddings");
    }
    const size_t dim = members.front().vec.size();
    std::vector<double> c(dim, 0.0);
    for (const auto& m : members) {
      if (m.vec.size() != dim) {
        fail(Errc::dimension_mismatch, "embedding dimension mismatch in '" + name + "'");
      }
      for (size_t j = 0; j < dim; ++j) c[j] += m.vec[j];
    }
    for (double& v : c) v /= static_cast<double>(members.size());
    double norm_sq = 0.0;
    for (double v : c) norm_sq += v * v;
    double norm = std::sqrt(norm_sq);
    if (!(norm >= 1e-12)) {
      fail(Errc::zero_embedding, "centroid of '" + name + "' has norm below 1e-12");
    }
    for (double& v : c) v /= norm;
    centroids.push_back(std::move(c));
    out.names.push_back(name);
  }

  out.distance.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (size_t x = 0; x < centroids[i].size(); ++x) dot += centroids[i][x] * centroids[j][x];
      double d = 1.0 - dot;
      out.distance[i][j] = d;
      out.distance[j][i] = d;
    }
  }

  out.nearest.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::string best_name;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (out.distance[i][j] < best ||
          (out.distance[i][j] == best && out.names[j] < best_name)) {
        best = out.distance[i][j];
        best_name = out.names[j];
      }
    }
    out.nearest[i] = best_name;  // empty when there is a single community
  }
  return out;
}

std::vector<std::pair<std::string, double>> top_tweets(const CommunityClassifier& c,
                                                       const UserDocument& doc,
                                                       const EmbeddingMatrix& matrix,
                                                       const Vocabulary& vocab,
                                                       size_t k_out) {
  struct Scored {
    size_t post_idx;
    double s;
  };
  std::vector<Scored> scored;
  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    std::vector<std::vector<std::string>> one = {apply_bigrams(doc.tokens[i], vocab.accepted_bigrams())};
    SparseWeights bag = bag_of_words(one, vocab);
    if (bag.empty()) continue;  // all tokens OOV
    bag.owner_id = doc.user_id;
    UserEmbedding u;
    try {
      u = embed(bag, matrix);
    } catch (const Error& e) {
      if (e.code() == Errc::zero_embedding) continue;
      throw;
    }
    scored.push_back({i, score(c, u)});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.s != b.s) return a.s > b.s;
    return a.post_idx < b.post_idx;
  });
  if (scored.size() > k_out) scored.resize(k_out);

  std::vector<std::pair<std::string, double>> out;
  out.reserve(scored.size());
  for (const auto& sc : scored) out.emplace_back(doc.posts[sc.post_idx], sc.s);
  return out;
}

}  // namespace commrec
