#include "commrec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "json.hpp"

#include "commrec/error.hpp"
#include "commrec/rng.hpp"

namespace commrec {

namespace {

using nlohmann::json;

std::string padded(const std::string& prefix, size_t i, size_t width) {
  std::string digits = std::to_string(i);
  std::string out = prefix;
  if (digits.size() < width) out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

size_t width_for(size_t n) {
  size_t width = 1;
  size_t x = n > 0 ? n - 1 : 0;
  while (x >= 10) {
    x /= 10;
    ++width;
  }
  return width;
}

void validate(const SynthConfig& cfg) {
  if (cfg.vocab_size < 2) fail(Errc::config_invalid, "vocab_size must be >= 2");
  if (cfg.posts_per_user < 1) fail(Errc::config_invalid, "posts_per_user must be >= 1");
  if (cfg.tokens_per_post < 1) fail(Errc::config_invalid, "tokens_per_post must be >= 1");
  if (cfg.zipf_exponent <= 0.0) fail(Errc::config_invalid, "zipf_exponent must be > 0");
  if (cfg.embed_train_fraction < 0.0 || cfg.classifier_train_fraction < 0.0 ||
      cfg.embed_train_fraction + cfg.classifier_train_fraction > 1.0) {
    fail(Errc::config_invalid, "split fractions must be non-negative and sum to <= 1");
  }
  size_t topic_total = 0;
  std::unordered_set<std::string> names;
  for (const auto& plan : cfg.communities) {
    if (plan.name.empty()) fail(Errc::config_invalid, "community name must be non-empty");
    if (!names.insert(plan.name).second) {
      fail(Errc::config_invalid, "duplicate community name '" + plan.name + "'");
    }
    if (plan.size < 2) fail(Errc::config_invalid, "community sizes must be >= 2");
    if (plan.topic_word_count < 1) {
      fail(Errc::config_invalid, "topic_word_count must be >= 1");
    }
    if (plan.topic_mix < 0.0 || plan.topic_mix >= 1.0) {
      fail(Errc::config_invalid, "topic_mix must be in [0, 1)");
    }
    topic_total += plan.topic_word_count;
  }
  if (topic_total > cfg.vocab_size / 2) {
    fail(Errc::config_invalid, "topic words must not exceed half the vocabulary");
  }
}

}  // namespace

std::pair<Corpus, std::vector<CommunitySpec>> generate(const SynthConfig& cfg) {
  validate(cfg);

  const size_t word_width = width_for(cfg.vocab_size);
  std::vector<std::string> words(cfg.vocab_size);
  for (size_t i = 0; i < cfg.vocab_size; ++i) words[i] = padded("w", i, word_width);

  // Zipfian CDF over ranks 1..V.
  std::vector<double> cdf(cfg.vocab_size);
  double acc = 0.0;
  for (size_t i = 0; i < cfg.vocab_size; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -cfg.zipf_exponent);
    cdf[i] = acc;
  }

  // Topic blocks carved from the tail of the vocabulary, one disjoint block
  // per community.
  size_t next_topic = cfg.vocab_size;
  std::vector<std::pair<size_t, size_t>> topic_ranges;  // [begin, end)
  for (const auto& plan : cfg.communities) {
    next_topic -= plan.topic_word_count;
    topic_ranges.emplace_back(next_topic, next_topic + plan.topic_word_count);
  }

  Rng root(cfg.seed);
  auto draw_zipf = [&](Rng& rng) {
    double u = rng.uniform_real() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    size_t idx = static_cast<size_t>(it - cdf.begin());
    return std::min(idx, cfg.vocab_size - 1);
  };

  Corpus corpus;
  size_t user_stream = 0;

  auto make_posts = [&](Rng& rng, const std::pair<size_t, size_t>* topic, double mix) {
    std::vector<std::string> posts(cfg.posts_per_user);
    for (auto& post : posts) {
      for (size_t t = 0; t < cfg.tokens_per_post; ++t) {
        size_t word_idx;
        if (topic && rng.uniform_real() < mix) {
          word_idx = topic->first + static_cast<size_t>(rng.uniform(topic->second - topic->first));
        } else {
          word_idx = draw_zipf(rng);
        }
        if (t > 0) post.push_back(' ');
        post += words[word_idx];
      }
    }
    return posts;
  };

  const size_t bg_width = width_for(std::max<size_t>(cfg.background_users, 1));
  const size_t n_embed = static_cast<size_t>(
      std::floor(cfg.embed_train_fraction * static_cast<double>(cfg.background_users)));
  const size_t n_clf = static_cast<size_t>(
      std::floor(cfg.classifier_train_fraction * static_cast<double>(cfg.background_users)));

  for (size_t i = 0; i < cfg.background_users; ++i) {
    Rng rng = root.fork(user_stream++);
    UserDocument doc;
    doc.user_id = padded("user", i, bg_width);
    doc.posts = make_posts(rng, nullptr, 0.0);
    doc.split = i < n_embed                ? Split::embed_train
                : i < n_embed + n_clf      ? Split::classifier_train
                                           : Split::test;
    corpus.add_user(std::move(doc));
  }

  std::vector<CommunitySpec> specs;
  specs.reserve(cfg.communities.size());
  for (size_t c = 0; c < cfg.communities.size(); ++c) {
    const CommunityPlan& plan = cfg.communities[c];
    CommunitySpec spec;
    spec.name = plan.name;
    const size_t member_width = width_for(plan.size);
    for (size_t m = 0; m < plan.size; ++m) {
      Rng rng = root.fork(user_stream++);
      UserDocument doc;
      doc.user_id = padded(plan.name + "_m", m, member_width);
      doc.posts = make_posts(rng, &topic_ranges[c], plan.topic_mix);
      doc.split = Split::test;
      spec.members.push_back(doc.user_id);
      corpus.add_user(std::move(doc));
    }
    specs.push_back(std::move(spec));
  }

  // Planted structure must be visible: member topic-word share at least twice
  // the background share whenever the mix is substantial.
  for (size_t c = 0; c < cfg.communities.size(); ++c) {
    const CommunityPlan& plan = cfg.communities[c];
    if (plan.topic_mix < 0.2) continue;
    std::unordered_set<std::string> topic_words;
    for (size_t i = topic_ranges[c].first; i < topic_ranges[c].second; ++i) {
      topic_words.insert(words[i]);
    }
    auto share = [&](const UserDocument& doc) {
      size_t topic_count = 0;
      size_t total = 0;
      for (const auto& post : doc.tokens) {
        for (const auto& tok : post) {
          ++total;
          if (topic_words.count(tok)) ++topic_count;
        }
      }
      return std::pair<size_t, size_t>(topic_count, total);
    };
    size_t member_topic = 0;
    size_t member_total = 0;
    size_t bg_topic = 0;
    size_t bg_total = 0;
    for (const auto& user : corpus.users()) {
      auto [tc, tt] = share(user);
      bool is_member = std::find(specs[c].members.begin(), specs[c].members.end(),
                                 user.user_id) != specs[c].members.end();
      if (is_member) {
        member_topic += tc;
        member_total += tt;
      } else if (user.user_id.rfind("user", 0) == 0) {
        bg_topic += tc;
        bg_total += tt;
      }
    }
    double member_share = member_total ? static_cast<double>(member_topic) / member_total : 0.0;
    double bg_share = bg_total ? static_cast<double>(bg_topic) / bg_total : 0.0;
    if (bg_share > 0.0 && member_share < 2.0 * bg_share) {
      fail(Errc::config_invalid,
           "community '" + plan.name + "' topic share " + std::to_string(member_share) +
               " is not at least twice the background share " + std::to_string(bg_share));
    }
  }

  return {std::move(corpus), std::move(specs)};
}

std::string SynthConfig::to_json() const {
  json obj;
  obj["vocab_size"] = vocab_size;
  obj["background_users"] = background_users;
  obj["posts_per_user"] = posts_per_user;
  obj["tokens_per_post"] = tokens_per_post;
  obj["zipf_exponent"] = zipf_exponent;
  obj["embed_train_fraction"] = embed_train_fraction;
  obj["classifier_train_fraction"] = classifier_train_fraction;
  obj["seed"] = seed;
  json comms = json::array();
  for (const auto& plan : communities) {
    json p;
    p["name"] = plan.name;
    p["size"] = plan.size;
    p["topic_words"] = plan.topic_word_count;
    p["topic_mix"] = plan.topic_mix;
    comms.push_back(std::move(p));
  }
  obj["communities"] = std::move(comms);
  return obj.dump(2);
}

SynthConfig SynthConfig::from_json(const std::string& text) {
  json obj = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    fail(Errc::config_invalid, "synth config is not a JSON object");
  }
  SynthConfig cfg;
  auto get = [&](const char* key, auto& out_val) {
    if (obj.contains(key)) {
      try {
        out_val = obj[key].template get<std::decay_t<decltype(out_val)>>();
      } catch (const json::exception&) {
        fail(Errc::config_invalid, std::string("synth config: bad value for \"") + key + "\"");
      }
    }
  };
  get("vocab_size", cfg.vocab_size);
  get("background_users", cfg.background_users);
  get("posts_per_user", cfg.posts_per_user);
  get("tokens_per_post", cfg.tokens_per_post);
  get("zipf_exponent", cfg.zipf_exponent);
  get("embed_train_fraction", cfg.embed_train_fraction);
  get("classifier_train_fraction", cfg.classifier_train_fraction);
  get("seed", cfg.seed);
  if (obj.contains("communities")) {
    if (!obj["communities"].is_array()) {
      fail(Errc::config_invalid, "synth config: \"communities\" must be an array");
    }
    for (const auto& p : obj["communities"]) {
      CommunityPlan plan;
      if (!p.is_object() || !p.contains("name")) {
        fail(Errc::config_invalid, "synth config: community entries need a \"name\"");
      }
      plan.name = p["name"].get<std::string>();
      if (p.contains("size")) plan.size = p["size"].get<size_t>();
      if (p.contains("topic_words")) plan.topic_word_count = p["topic_words"].get<size_t>();
      if (p.contains("topic_mix")) plan.topic_mix = p["topic_mix"].get<double>();
      cfg.communities.push_back(std::move(plan));
    }
  }
  return cfg;
}

}  // namespace commrec
