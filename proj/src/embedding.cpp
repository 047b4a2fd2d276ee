#include "commrec/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "binio.hpp"
#include "commrec/error.hpp"

namespace commrec {

namespace {

constexpr uint32_t kMatrixVersion = 1;
constexpr uint32_t kVectorsVersion = 1;

SparseWeights weights_from_counts(std::unordered_map<int64_t, int64_t>&& counts) {
  SparseWeights w;
  w.pairs.reserve(counts.size());
  for (const auto& [id, count] : counts) {
    w.pairs.emplace_back(id, log_weight(static_cast<double>(count)));
  }
  std::sort(w.pairs.begin(), w.pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return w;
}

}  // namespace

SparseWeights bag_of_words(std::span<const std::vector<std::string>> posts,
                           const Vocabulary& vocab) {
  std::unordered_map<int64_t, int64_t> counts;
  for (const auto& post : posts) {
    for (const auto& tok : post) {
      if (auto id = vocab.id_of(tok)) ++counts[*id];
    }
  }
  return weights_from_counts(std::move(counts));
}

SparseWeights user_bag(const UserDocument& user, const Vocabulary& vocab) {
  std::unordered_map<int64_t, int64_t> counts;
  for (const auto& post : user.tokens) {
    for (const auto& tok : apply_bigrams(post, vocab.accepted_bigrams())) {
      if (auto id = vocab.id_of(tok)) ++counts[*id];
    }
  }
  SparseWeights w = weights_from_counts(std::move(counts));
  w.owner_id = user.user_id;
  w.subset = "all";
  return w;
}

SparseWeights subset_bag(const UserDocument& user, std::span<const size_t> post_indices,
                         const Vocabulary& vocab, std::string subset_label) {
  std::unordered_map<int64_t, int64_t> counts;
  for (size_t idx : post_indices) {
    for (const auto& tok : apply_bigrams(user.tokens.at(idx), vocab.accepted_bigrams())) {
      if (auto id = vocab.id_of(tok)) ++counts[*id];
    }
  }
  SparseWeights w = weights_from_counts(std::move(counts));
  w.owner_id = user.user_id;
  w.subset = std::move(subset_label);
  return w;
}

EmbeddingMatrix::EmbeddingMatrix(size_t vocab_size, size_t dim, uint64_t vocab_hash)
    : vocab_size_(vocab_size), dim_(dim), vocab_hash_(vocab_hash), data_(vocab_size * dim, 0.0) {}

EmbeddingMatrix EmbeddingMatrix::random_init(const Vocabulary& vocab, size_t dim, Rng& rng) {
  EmbeddingMatrix m(vocab.size(), dim, vocab.hash());
  const double std_dev = 1.0 / std::sqrt(static_cast<double>(dim));
  for (auto& v : m.data_) v = rng.gaussian() * std_dev;
  return m;
}

bool EmbeddingMatrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void EmbeddingMatrix::save(const std::string& path) const {
  std::string buf;
  buf.reserve(24 + data_.size() * sizeof(float));
  buf.append("UEMB");
  binio::put<uint32_t>(buf, kMatrixVersion);
  binio::put<uint64_t>(buf, static_cast<uint64_t>(vocab_size_));
  binio::put<uint32_t>(buf, static_cast<uint32_t>(dim_));
  binio::put<uint64_t>(buf, vocab_hash_);
  for (double v : data_) binio::put<float>(buf, static_cast<float>(v));
  binio::write_file(path, buf);
}

EmbeddingMatrix EmbeddingMatrix::load(const std::string& path) {
  binio::Reader r(binio::read_file(path), Errc::io_error, path);
  r.expect_magic("UEMB");
  auto version = r.get<uint32_t>();
  if (version != kMatrixVersion) {
    fail(Errc::io_error, path + ": unsupported matrix version " + std::to_string(version) +
                             " (expected " + std::to_string(kMatrixVersion) + ")");
  }
  auto rows = r.get<uint64_t>();
  auto dim = r.get<uint32_t>();
  auto hash = r.get<uint64_t>();
  EmbeddingMatrix m(static_cast<size_t>(rows), dim, hash);
  for (auto& v : m.data_) v = static_cast<double>(r.get<float>());
  if (!r.at_end()) fail(Errc::io_error, path + ": trailing bytes after matrix payload");
  return m;
}

UserEmbedding embed(const SparseWeights& weights, const EmbeddingMatrix& matrix) {
  if (weights.empty()) {
    fail(Errc::zero_embedding, "empty bag of words for user '" + weights.owner_id + "'");
  }
  const size_t dim = matrix.dim();
  std::vector<double> s(dim, 0.0);
  for (const auto& [id, w] : weights.pairs) {
    if (id < 0 || static_cast<size_t>(id) >= matrix.vocab_size()) {
      fail(Errc::dimension_mismatch,
           "token id " + std::to_string(id) + " out of range for matrix with " +
               std::to_string(matrix.vocab_size()) + " rows");
    }
    auto row = matrix.row(static_cast<size_t>(id));
    for (size_t j = 0; j < dim; ++j) s[j] += w * row[j];
  }
  double norm_sq = 0.0;
  for (double v : s) norm_sq += v * v;
  double norm = std::sqrt(norm_sq);
  if (!(norm >= 1e-12)) {
    fail(Errc::zero_embedding, "projection norm below 1e-12 for user '" + weights.owner_id + "'");
  }
  for (double& v : s) v /= norm;
  return {weights.owner_id, std::move(s)};
}

void save_embeddings(const EmbeddingSet& set, const std::string& path) {
  size_t dim = set.empty() ? 0 : set.front().vec.size();
  std::string buf;
  buf.append("UVEC");
  binio::put<uint32_t>(buf, kVectorsVersion);
  binio::put<uint64_t>(buf, static_cast<uint64_t>(set.size()));
  binio::put<uint32_t>(buf, static_cast<uint32_t>(dim));
  for (const auto& e : set) {
    if (e.vec.size() != dim) {
      fail(Errc::dimension_mismatch, "inconsistent embedding dimension for '" + e.user_id + "'");
    }
    binio::put_string(buf, e.user_id);
    for (double v : e.vec) binio::put<float>(buf, static_cast<float>(v));
  }
  binio::write_file(path, buf);
}

EmbeddingSet load_embeddings(const std::string& path) {
  binio::Reader r(binio::read_file(path), Errc::io_error, path);
  r.expect_magic("UVEC");
  auto version = r.get<uint32_t>();
  if (version != kVectorsVersion) {
    fail(Errc::io_error, path + ": unsupported vector file version " + std::to_string(version));
  }
  auto n = r.get<uint64_t>();
  auto dim = r.get<uint32_t>();
  EmbeddingSet set;
  set.reserve(static_cast<size_t>(n));
  for (uint64_t i = 0; i < n; ++i) {
    UserEmbedding e;
    e.user_id = r.get_string();
    e.vec.resize(dim);
    for (auto& v : e.vec) v = static_cast<double>(r.get<float>());
    set.push_back(std::move(e));
  }
  if (!r.at_end()) fail(Errc::io_error, path + ": trailing bytes after vector payload");
  return set;
}

}  // namespace commrec
