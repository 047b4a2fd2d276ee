#ifndef COMMREC_INDEX_HPP_
#define COMMREC_INDEX_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "commrec/embedding.hpp"

namespace commrec {

struct LshConfig {
  uint32_t tables = 32;
  uint32_t bits = 12;  // hyperplanes per table, <= 62
  uint64_t seed = 0;
};

enum class QueryMode { exact, approx };

struct QueryResult {
  std::vector<std::pair<std::string, double>> ranked;  // score non-increasing
};

// Stores unit user vectors and retrieves top-k by linear score, either brute
// force or through random-hyperplane LSH buckets re-ranked exactly. Vectors
// and hyperplanes are snapped to f32 so save/load round-trips bit-exactly.
class RetrievalIndex {
 public:
  static RetrievalIndex build(const EmbeddingSet& embeddings,
                              std::optional<LshConfig> lsh = std::nullopt);

  size_t size() const { return ids_.size(); }
  size_t dim() const { return dim_; }
  bool has_lsh() const { return lsh_.has_value(); }
  const std::vector<std::string>& ids() const { return ids_; }

  QueryResult query_topk(std::span<const double> w, size_t k_out, QueryMode mode) const;

  // Binary: magic "RIDX", version, header, f32 payload, trailing CRC64.
  void save(const std::string& path) const;
  static RetrievalIndex load(const std::string& path);

 private:
  struct Lsh {
    LshConfig cfg;
    std::vector<float> hyperplanes;  // tables x bits x dim
    std::vector<std::unordered_map<uint64_t, std::vector<uint32_t>>> buckets;
  };

  std::vector<std::string> ids_;
  size_t dim_ = 0;
  std::vector<float> vectors_;  // n x dim
  std::optional<Lsh> lsh_;

  uint64_t signature(std::span<const double> v, uint32_t table) const;
  void build_buckets();
};

}  // namespace commrec

#endif  // COMMREC_INDEX_HPP_
