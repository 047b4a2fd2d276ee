#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "commrec/embedding.hpp"
#include "commrec/error.hpp"
#include "commrec/rng.hpp"
#include "commrec/vocab.hpp"
#include "testutil.hpp"

using namespace commrec;

namespace {

// Minimal vocabulary with tokens tok0..tokN-1, all count `count`.
Vocabulary toy_vocab(size_t n, int64_t count = 100) {
  Corpus corpus;
  UserDocument doc;
  doc.user_id = "seed";
  std::string post;
  for (size_t i = 0; i < n; ++i) {
    for (int64_t c = 0; c < count; ++c) {
      post += "tok" + std::to_string(i) + " ";
    }
  }
  doc.posts = {post};
  corpus.add_user(std::move(doc));
  VocabConfig cfg;
  cfg.min_count = 1;
  cfg.theta = 1e18;
  return Vocabulary::build(corpus, cfg);
}

}  // namespace

TEST_CASE("bag_of_words log-scales counts and drops OOV") {
  Vocabulary vocab = toy_vocab(3);
  std::vector<std::vector<std::string>> posts = {
      {"tok0", "tok1", "tok1"},
      {"tok1", "unknown"},
  };
  SparseWeights bag = bag_of_words(posts, vocab);
  REQUIRE(bag.pairs.size() == 2);
  // ids strictly increasing
  CHECK(bag.pairs[0].first < bag.pairs[1].first);
  for (const auto& [id, w] : bag.pairs) {
    if (vocab.entry(id).token == "tok0") CHECK(w == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    if (vocab.entry(id).token == "tok1") CHECK(w == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(w > 0.0);
  }
}

TEST_CASE("log_weight hits 1 at count e-1 and 0 at count 0") {
  CHECK(log_weight(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(log_weight(0.0) == 0.0);
}

TEST_CASE("embed normalizes the projection") {
  // 2x2 identity matrix, weights (3, 4) -> (0.6, 0.8).
  EmbeddingMatrix m(2, 2, 0);
  m.row(0)[0] = 1.0;
  m.row(1)[1] = 1.0;
  SparseWeights w;
  w.pairs = {{0, 3.0}, {1, 4.0}};
  w.owner_id = "u";
  UserEmbedding u = embed(w, m);
  CHECK(u.vec[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(u.vec[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(u.user_id == "u");
}

TEST_CASE("embed rejects empty and degenerate bags") {
  EmbeddingMatrix m(2, 2, 0);  // all zeros
  SparseWeights empty;
  try {
    embed(empty, m);
    FAIL("expected ZeroEmbedding");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_embedding);
  }
  SparseWeights w;
  w.pairs = {{0, 1.0}};
  CHECK_THROWS_AS(embed(w, m), Error);  // zero matrix -> zero projection
}

TEST_CASE("embed validates token ids against the matrix") {
  EmbeddingMatrix m(2, 2, 0);
  m.row(0)[0] = 1.0;
  SparseWeights w;
  w.pairs = {{5, 1.0}};
  try {
    embed(w, m);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("embeddings are unit norm on random sparse inputs") {
  Rng rng(11);
  Vocabulary vocab = toy_vocab(20);
  EmbeddingMatrix m = EmbeddingMatrix::random_init(vocab, 8, rng);
  for (int trial = 0; trial < 1000; ++trial) {
    SparseWeights w;
    for (int64_t id = 0; id < 20; ++id) {
      if (rng.uniform_real() < 0.4) {
        w.pairs.emplace_back(id, log_weight(static_cast<double>(rng.uniform(9)) + 1.0));
      }
    }
    if (w.pairs.empty()) continue;
    UserEmbedding u = embed(w, m);
    double norm = 0.0;
    for (double v : u.vec) norm += v * v;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-6);
  }
}

TEST_CASE("post order does not change the embedding bitwise") {
  Rng rng(5);
  Vocabulary vocab = toy_vocab(10);
  EmbeddingMatrix m = EmbeddingMatrix::random_init(vocab, 6, rng);

  UserDocument doc;
  doc.user_id = "u";
  doc.posts = {"tok0 tok1 tok2", "tok3 tok1", "tok4 tok4 tok5", "tok0"};
  for (const auto& p : doc.posts) doc.tokens.push_back(tokenize(p));

  UserDocument shuffled = doc;
  std::reverse(shuffled.posts.begin(), shuffled.posts.end());
  std::reverse(shuffled.tokens.begin(), shuffled.tokens.end());

  UserEmbedding a = embed(user_bag(doc, vocab), m);
  UserEmbedding b = embed(user_bag(shuffled, vocab), m);
  REQUIRE(a.vec.size() == b.vec.size());
  for (size_t j = 0; j < a.vec.size(); ++j) CHECK(a.vec[j] == b.vec[j]);
}

TEST_CASE("positive scaling of the weight vector leaves u unchanged") {
  Rng rng(9);
  Vocabulary vocab = toy_vocab(12);
  EmbeddingMatrix m = EmbeddingMatrix::random_init(vocab, 5, rng);
  for (double alpha : {0.25, 1.0 / std::log(10.0), 3.0, 1000.0}) {
    SparseWeights w;
    for (int64_t id = 0; id < 12; id += 2) {
      w.pairs.emplace_back(id, log_weight(static_cast<double>(id) + 1.0));
    }
    SparseWeights scaled = w;
    for (auto& [id, weight] : scaled.pairs) weight *= alpha;
    UserEmbedding a = embed(w, m);
    UserEmbedding b = embed(scaled, m);
    for (size_t j = 0; j < a.vec.size(); ++j) {
      CHECK(a.vec[j] == doctest::Approx(b.vec[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("matrix file round trip preserves f32 payload and binding") {
  Rng rng(2);
  Vocabulary vocab = toy_vocab(7);
  EmbeddingMatrix m = EmbeddingMatrix::random_init(vocab, 3, rng);
  testutil::TempDir dir("matrix");
  auto path = dir.file("e.uemb");
  m.save(path);
  EmbeddingMatrix back = EmbeddingMatrix::load(path);
  CHECK(back.vocab_size() == m.vocab_size());
  CHECK(back.dim() == m.dim());
  CHECK(back.vocab_hash() == m.vocab_hash());
  for (size_t i = 0; i < m.vocab_size(); ++i) {
    for (size_t j = 0; j < m.dim(); ++j) {
      CHECK(back.row(i)[j] == static_cast<double>(static_cast<float>(m.row(i)[j])));
    }
  }

  SUBCASE("bad magic") {
    testutil::write_text(path, "NOPExxxxxxxxxxxxxxxxxxxxxxxx");
    CHECK_THROWS_AS(EmbeddingMatrix::load(path), Error);
  }
  SUBCASE("truncated") {
    auto bytes = testutil::read_bytes(path);
    testutil::write_text(path, bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(EmbeddingMatrix::load(path), Error);
  }
}

TEST_CASE("user vector file round trip") {
  EmbeddingSet set;
  Rng rng(4);
  for (int i = 0; i < 5; ++i) {
    UserEmbedding e;
    e.user_id = "user" + std::to_string(i);
    double norm = 0.0;
    for (int j = 0; j < 4; ++j) {
      e.vec.push_back(rng.gaussian());
      norm += e.vec.back() * e.vec.back();
    }
    for (auto& v : e.vec) v /= std::sqrt(norm);
    set.push_back(std::move(e));
  }
  testutil::TempDir dir("uvec");
  auto path = dir.file("u.uvec");
  save_embeddings(set, path);
  EmbeddingSet back = load_embeddings(path);
  REQUIRE(back.size() == set.size());
  for (size_t i = 0; i < set.size(); ++i) {
    CHECK(back[i].user_id == set[i].user_id);
    for (size_t j = 0; j < set[i].vec.size(); ++j) {
      CHECK(back[i].vec[j] == static_cast<double>(static_cast<float>(set[i].vec[j])));
    }
  }
}
