#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "doctest.h"

#include "commrec/error.hpp"
#include "commrec/synth.hpp"
#include "testutil.hpp"

using namespace commrec;

namespace {

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.vocab_size = 300;
  cfg.background_users = 40;
  cfg.posts_per_user = 20;
  cfg.tokens_per_post = 8;
  cfg.communities = {{"reds", 5, 15, 0.3}, {"blues", 4, 15, 0.3}};
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST_CASE("generation is deterministic under a fixed seed") {
  SynthConfig cfg = small_config();
  auto [c1, s1] = generate(cfg);
  auto [c2, s2] = generate(cfg);
  REQUIRE(c1.size() == c2.size());
  for (size_t i = 0; i < c1.size(); ++i) {
    CHECK(c1.users()[i].user_id == c2.users()[i].user_id);
    CHECK(c1.users()[i].posts == c2.users()[i].posts);
    CHECK(c1.users()[i].split == c2.users()[i].split);
  }
  REQUIRE(s1.size() == s2.size());
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].name == s2[i].name);
    CHECK(s1[i].members == s2[i].members);
  }

  SynthConfig other = cfg;
  other.seed = 10;
  auto [c3, s3] = generate(other);
  bool any_diff = false;
  for (size_t i = 0; i < c1.size() && !any_diff; ++i) {
    any_diff = c1.users()[i].posts != c3.users()[i].posts;
  }
  CHECK(any_diff);
}

TEST_CASE("community sizes and splits match the config") {
  SynthConfig cfg = small_config();
  auto [corpus, specs] = generate(cfg);
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].members.size() == 5);
  CHECK(specs[1].members.size() == 4);
  CHECK(corpus.size() == 40 + 5 + 4);

  size_t embed = 0;
  size_t clf = 0;
  size_t test = 0;
  for (const auto& user : corpus.users()) {
    if (user.user_id.rfind("user", 0) == 0) {
      if (user.split == Split::embed_train) ++embed;
      if (user.split == Split::classifier_train) ++clf;
      if (user.split == Split::test) ++test;
    }
  }
  CHECK(embed == 24);  // floor(0.6 * 40)
  CHECK(clf == 8);     // floor(0.2 * 40)
  CHECK(test == 8);

  for (const auto& spec : specs) {
    for (const auto& id : spec.members) {
      const UserDocument* doc = corpus.find(id);
      REQUIRE(doc != nullptr);
      CHECK(doc->split == Split::test);
      CHECK(doc->posts.size() == cfg.posts_per_user);
    }
  }
}

TEST_CASE("zero topic mix is statistically indistinguishable from background") {
  SynthConfig cfg;
  cfg.vocab_size = 400;
  cfg.background_users = 60;
  cfg.posts_per_user = 30;
  cfg.tokens_per_post = 10;
  cfg.communities = {{"nulls", 20, 20, 0.0}};
  cfg.seed = 4242;
  auto [corpus, specs] = generate(cfg);

  // Topic words live in the vocabulary tail: the last 20 types.
  std::unordered_set<std::string> topic;
  for (size_t i = 380; i < 400; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "w%03zu", i);
    topic.insert(buf);
  }

  // Expected counts under the background Zipf law.
  double zipf_norm = 0.0;
  for (size_t i = 1; i <= 400; ++i) zipf_norm += std::pow(static_cast<double>(i), -1.1);
  std::unordered_map<std::string, size_t> member_counts;
  size_t member_total = 0;
  std::unordered_set<std::string> member_ids(specs[0].members.begin(), specs[0].members.end());
  for (const auto& user : corpus.users()) {
    if (!member_ids.count(user.user_id)) continue;
    for (const auto& post : user.tokens) {
      for (const auto& tok : post) {
        ++member_total;
        if (topic.count(tok)) ++member_counts[tok];
      }
    }
  }

  // Chi-square over the 20 topic-word bins plus the everything-else bin.
  double stat = 0.0;
  double expected_rest = static_cast<double>(member_total);
  size_t observed_rest = member_total;
  size_t rank = 381;
  for (size_t i = 380; i < 400; ++i, ++rank) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "w%03zu", i);
    double p = std::pow(static_cast<double>(rank), -1.1) / zipf_norm;
    double expected = p * static_cast<double>(member_total);
    double observed = static_cast<double>(member_counts[buf]);
    stat += (observed - expected) * (observed - expected) / expected;
    expected_rest -= expected;
    observed_rest -= member_counts[buf];
  }
  stat += (static_cast<double>(observed_rest) - expected_rest) *
          (static_cast<double>(observed_rest) - expected_rest) / expected_rest;

  double p_value = testutil::gammq(20.0 / 2.0, stat / 2.0);
  MESSAGE("chi-square statistic ", stat, ", p = ", p_value);
  CHECK(p_value > 0.01);
}

TEST_CASE("members overuse their topic words when the mix is substantial") {
  SynthConfig cfg = small_config();
  auto [corpus, specs] = generate(cfg);

  // Recompute the share ratio independently for the first community, whose
  // topic block is the final 15 vocabulary types.
  std::unordered_set<std::string> topic;
  for (size_t i = 285; i < 300; ++i) topic.insert("w" + std::to_string(i));

  auto topic_share = [&](const std::vector<const UserDocument*>& docs) {
    size_t hits = 0;
    size_t total = 0;
    for (const auto* doc : docs) {
      for (const auto& post : doc->tokens) {
        for (const auto& tok : post) {
          ++total;
          if (topic.count(tok)) ++hits;
        }
      }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
  };

  std::vector<const UserDocument*> members;
  for (const auto& id : specs[0].members) members.push_back(corpus.find(id));
  std::vector<const UserDocument*> background;
  for (const auto& user : corpus.users()) {
    if (user.user_id.rfind("user", 0) == 0) background.push_back(&user);
  }
  double member_share = topic_share(members);
  double bg_share = topic_share(background);
  CHECK(member_share >= 2.0 * bg_share);
  CHECK(member_share > 0.2);  // mix 0.3 plus occasional background hits
}

TEST_CASE("invalid configs are rejected") {
  SynthConfig cfg = small_config();
  cfg.communities[0].topic_mix = 1.0;
  CHECK_THROWS_AS(generate(cfg), Error);

  cfg = small_config();
  cfg.communities[0].size = 1;
  CHECK_THROWS_AS(generate(cfg), Error);

  cfg = small_config();
  cfg.communities[0].topic_word_count = 400;  // more than half the vocabulary
  CHECK_THROWS_AS(generate(cfg), Error);

  cfg = small_config();
  cfg.embed_train_fraction = 0.9;
  cfg.classifier_train_fraction = 0.3;
  CHECK_THROWS_AS(generate(cfg), Error);

  cfg = small_config();
  cfg.communities[1].name = cfg.communities[0].name;
  CHECK_THROWS_AS(generate(cfg), Error);

  cfg = small_config();
  cfg.tokens_per_post = 0;
  try {
    generate(cfg);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_invalid);
  }
}

TEST_CASE("synth config JSON round trip") {
  SynthConfig cfg = small_config();
  std::string text = cfg.to_json();
  SynthConfig back = SynthConfig::from_json(text);
  CHECK(back.vocab_size == cfg.vocab_size);
  CHECK(back.background_users == cfg.background_users);
  CHECK(back.seed == cfg.seed);
  REQUIRE(back.communities.size() == cfg.communities.size());
  CHECK(back.communities[1].name == cfg.communities[1].name);
  CHECK(back.communities[1].topic_mix == cfg.communities[1].topic_mix);

  CHECK_THROWS_AS(SynthConfig::from_json("not json"), Error);
  CHECK_THROWS_AS(SynthConfig::from_json("[1,2]"), Error);
}
