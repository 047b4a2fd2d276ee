#ifndef COMMREC_SYNTH_HPP_
#define COMMREC_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "commrec/corpus.hpp"
#include "commrec/eval.hpp"

namespace commrec {

struct CommunityPlan {
  std::string name;
  size_t size = 2;
  size_t topic_word_count = 20;
  double topic_mix = 0.3;  // probability a member token is drawn from the topic set
};

struct SynthConfig {
  size_t vocab_size = 2000;
  size_t background_users = 500;
  std::vector<CommunityPlan> communities;
  size_t posts_per_user = 40;
  size_t tokens_per_post = 10;
  double zipf_exponent = 1.1;
  double embed_train_fraction = 0.6;       // background split shares
  double classifier_train_fraction = 0.2;  // remainder goes to the test split
  uint64_t seed = 0;

  std::string to_json() const;
  static SynthConfig from_json(const std::string& text);
};

// Background users draw from a shared Zipfian distribution over the whole
// vocabulary; each community owns a disjoint topic-word block from the tail
// and members mix topic words in with probability topic_mix. Members are
// tagged with the test split. Deterministic under seed via per-user
// substreams.
std::pair<Corpus, std::vector<CommunitySpec>> generate(const SynthConfig& cfg);

}  // namespace commrec

#endif  // COMMREC_SYNTH_HPP_
