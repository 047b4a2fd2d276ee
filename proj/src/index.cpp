#include "commrec/index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "binio.hpp"
#include "commrec/error.hpp"
#include "commrec/rng.hpp"

namespace commrec {

namespace {

constexpr uint32_t kIndexVersion = 1;

}  // namespace

RetrievalIndex RetrievalIndex::build(const EmbeddingSet& embeddings,
                                     std::optional<LshConfig> lsh) {
  if (embeddings.empty()) fail(Errc::empty_index, "cannot build an index from zero embeddings");
  RetrievalIndex index;
  index.dim_ = embeddings.front().vec.size();
  index.ids_.reserve(embeddings.size());
  index.vectors_.reserve(embeddings.size() * index.dim_);
  std::unordered_set<std::string> seen;
  for (const auto& e : embeddings) {
    if (e.vec.size() != index.dim_) {
      fail(Errc::dimension_mismatch, "embedding dimension mismatch for '" + e.user_id + "'");
    }
    if (!seen.insert(e.user_id).second) {
      fail(Errc::duplicate_user, "duplicate user_id '" + e.user_id + "' in index input");
    }
    index.ids_.push_back(e.user_id);
    // Snap to f32 now so in-memory state equals the serialized state and a
    // save/load round trip cannot move any vector across a hyperplane.
    for (double v : e.vec) index.vectors_.push_back(static_cast<float>(v));
  }

  if (lsh) {
    if (lsh->bits > 62) fail(Errc::config_invalid, "lsh bits must be <= 62");
    if (lsh->tables == 0) fail(Errc::config_invalid, "lsh tables must be >= 1");
    Lsh state;
    state.cfg = *lsh;
    size_t n_planes = static_cast<size_t>(lsh->tables) * lsh->bits * index.dim_;
    state.hyperplanes.reserve(n_planes);
    Rng rng(lsh->seed);
    for (size_t i = 0; i < n_planes; ++i) {
      state.hyperplanes.push_back(static_cast<float>(rng.gaussian()));
    }
    index.lsh_ = std::move(state);
    index.build_buckets();
  }
  return index;
}

uint64_t RetrievalIndex::signature(std::span<const double> v, uint32_t table) const {
  const Lsh& lsh = *lsh_;
  uint64_t sig = 0;
  const size_t stride = static_cast<size_t>(lsh.cfg.bits) * dim_;
  const float* planes = lsh.hyperplanes.data() + static_cast<size_t>(table) * stride;
  for (uint32_t bit = 0; bit < lsh.cfg.bits; ++bit) {
    const float* h = planes + static_cast<size_t>(bit) * dim_;
    double d = 0.0;
    for (size_t j = 0; j < dim_; ++j) d += static_cast<double>(h[j]) * v[j];
    sig = (sig << 1) | (d >= 0.0 ? 1u : 0u);
  }
  return sig;
}

void RetrievalIndex::build_buckets() {
  Lsh& lsh = *lsh_;
  lsh.buckets.assign(lsh.cfg.tables, {});
  std::vector<double> v(dim_);
  for (size_t i = 0; i < ids_.size(); ++i) {
    const float* row = vectors_.data() + i * dim_;
    for (size_t j = 0; j < dim_; ++j) v[j] = static_cast<double>(row[j]);
    for (uint32_t t = 0; t < lsh.cfg.tables; ++t) {
      lsh.buckets[t][signature(v, t)].push_back(static_cast<uint32_t>(i));
    }
  }
}

QueryResult RetrievalIndex::query_topk(std::span<const double> w, size_t k_out,
                                       QueryMode mode) const {
  if (ids_.empty()) fail(Errc::empty_index, "query on an empty index");
  if (w.size() != dim_) {
    fail(Errc::dimension_mismatch, "query dimension " + std::to_string(w.size()) +
                                       " != index dimension " + std::to_string(dim_));
  }
  if (k_out < 1) fail(Errc::config_invalid, "k_out must be >= 1");

  std::vector<uint32_t> candidates;
  if (mode == QueryMode::approx && lsh_) {
    // Union of matching buckets across tables, visited in index order so the
    // result does not depend on hash-map iteration.
    std::vector<bool> flagged(ids_.size(), false);
    for (uint32_t t = 0; t < lsh_->cfg.tables; ++t) {
      uint64_t sig = signature(w, t);
      auto it = lsh_->buckets[t].find(sig);
      if (it == lsh_->buckets[t].end()) continue;
      for (uint32_t idx : it->second) flagged[idx] = true;
    }
    for (uint32_t i = 0; i < flagged.size(); ++i) {
      if (flagged[i]) candidates.push_back(i);
    }
  } else {
    candidates.resize(ids_.size());
    for (uint32_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
  }

  // Candidates are always re-ranked by the exact score.
  std::vector<std::pair<double, uint32_t>> scored;
  scored.reserve(candidates.size());
  for (uint32_t i : candidates) {
    const float* row = vectors_.data() + static_cast<size_t>(i) * dim_;
    double s = 0.0;
    for (size_t j = 0; j < dim_; ++j) s += w[j] * static_cast<double>(row[j]);
    scored.emplace_back(s, i);
  }
  std::sort(scored.begin(), scored.end(), [this](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return ids_[a.second] < ids_[b.second];
  });
  if (scored.size() > k_out) scored.resize(k_out);

  QueryResult result;
  result.ranked.reserve(scored.size());
  for (const auto& [s, i] : scored) result.ranked.emplace_back(ids_[i], s);
  return result;
}

void RetrievalIndex::save(const std::string& path) const {
  std::string buf;
  buf.append("RIDX");
  binio::put<uint32_t>(buf, kIndexVersion);
  binio::put<uint64_t>(buf, static_cast<uint64_t>(ids_.size()));
  binio::put<uint32_t>(buf, static_cast<uint32_t>(dim_));
  binio::put<uint32_t>(buf, lsh_ ? lsh_->cfg.tables : 0);
  binio::put<uint32_t>(buf, lsh_ ? lsh_->cfg.bits : 0);
  binio::put<uint64_t>(buf, lsh_ ? lsh_->cfg.seed : 0);
  for (float v : vectors_) binio::put<float>(buf, v);
  for (const auto& id : ids_) binio::put_string(buf, id);
  if (lsh_) {
    for (float v : lsh_->hyperplanes) binio::put<float>(buf, v);
  }
  binio::put<uint64_t>(buf, binio::crc64(buf.data(), buf.size()));
  binio::write_file(path, buf);
}

RetrievalIndex RetrievalIndex::load(const std::string& path) {
  std::string data = binio::read_file(path);
  if (data.size() < sizeof(uint64_t)) fail(Errc::corrupt_index, path + ": truncated file");
  {
    uint64_t stored;
    std::memcpy(&stored, data.data() + data.size() - sizeof(uint64_t), sizeof(uint64_t));
    uint64_t actual = binio::crc64(data.data(), data.size() - sizeof(uint64_t));
    if (stored != actual) fail(Errc::corrupt_index, path + ": checksum mismatch");
  }
  binio::Reader r(std::move(data), Errc::corrupt_index, path);
  r.expect_magic("RIDX");
  auto version = r.get<uint32_t>();
  if (version != kIndexVersion) {
    fail(Errc::corrupt_index, path + ": unsupported index version " + std::to_string(version) +
                                  " (expected " + std::to_string(kIndexVersion) + ")");
  }
  auto n = r.get<uint64_t>();
  auto dim = r.get<uint32_t>();
  auto tables = r.get<uint32_t>();
  auto bits = r.get<uint32_t>();
  auto seed = r.get<uint64_t>();

  RetrievalIndex index;
  index.dim_ = dim;
  index.vectors_.resize(static_cast<size_t>(n) * dim);
  for (auto& v : index.vectors_) v = r.get<float>();
  index.ids_.reserve(static_cast<size_t>(n));
  for (uint64_t i = 0; i < n; ++i) index.ids_.push_back(r.get_string());
  if (tables > 0) {
    Lsh lsh;
    lsh.cfg = {tables, bits, seed};
    lsh.hyperplanes.resize(static_cast<size_t>(tables) * bits * dim);
    for (auto& v : lsh.hyperplanes) v = r.get<float>();
    index.lsh_ = std::move(lsh);
  }
  r.get<uint64_t>();  // checksum, already verified
  if (!r.at_end()) fail(Errc::corrupt_index, path + ": trailing bytes after payload");
  if (index.lsh_) index.build_buckets();
  return index;
}

}  // namespace commrec
