#ifndef COMMREC_VOCAB_HPP_
#define COMMREC_VOCAB_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "commrec/corpus.hpp"

namespace commrec {

struct VocabConfig {
  int64_t min_count = 20;
  int64_t max_size = 200000;
  int64_t delta = 5;      // discount in the collocation score
  double theta = 10.0;    // acceptance threshold, strict >
};

// Scaled-PMI collocation score: (count_ab - delta) * N / (count_a * count_b).
double score_bigram(int64_t count_ab, int64_t count_a, int64_t count_b,
                    int64_t total_tokens, int64_t delta);

class Vocabulary {
 public:
  struct Entry {
    std::string token;
    int64_t count = 0;
  };

  // Unigram pass, bigram scoring over adjacent in-post pairs, re-count with
  // accepted bigrams applied, then min_count / max_size filtering. Ids are
  // assigned by descending count with lexicographic tie-break.
  static Vocabulary build(const Corpus& corpus, const VocabConfig& cfg);

  size_t size() const { return entries_.size(); }
  int64_t total_tokens() const { return total_tokens_; }

  // Dense id in [0, size()), or nullopt for OOV.
  std::optional<int64_t> id_of(std::string_view token) const;
  const Entry& entry(int64_t id) const { return entries_[static_cast<size_t>(id)]; }
  const std::vector<Entry>& entries() const { return entries_; }

  const std::unordered_set<std::string>& accepted_bigrams() const { return accepted_bigrams_; }

  // FNV-1a over total_tokens and the (token, id, count) rows; binds embedding
  // matrices to the vocabulary they were trained with.
  uint64_t hash() const;

  // TSV with a "#total_tokens=<N>" header; rows are token<TAB>id<TAB>count.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::vector<Entry> entries_;  // position == id
  std::unordered_map<std::string, int64_t> ids_;
  std::unordered_set<std::string> accepted_bigrams_;
  int64_t total_tokens_ = 0;

  void finalize(std::vector<Entry> entries, int64_t total);
};

}  // namespace commrec

#endif  // COMMREC_VOCAB_HPP_
