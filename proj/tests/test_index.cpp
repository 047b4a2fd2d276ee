#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "binio.hpp"  // internal, for crafting corrupt files
#include "commrec/embedding.hpp"
#include "commrec/error.hpp"
#include "commrec/index.hpp"
#include "commrec/rng.hpp"
#include "testutil.hpp"

using namespace commrec;

namespace {

UserEmbedding ue(const std::string& id, std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return {id, std::move(v)};
}

EmbeddingSet random_unit_set(Rng& rng, size_t n, size_t dim, const std::string& prefix) {
  EmbeddingSet set;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.gaussian();
    set.push_back(ue(prefix + std::to_string(i), std::move(v)));
  }
  return set;
}

// Independent brute-force scorer: f32-snapped vectors, double accumulation,
// sort by (score desc, id asc). Mirrors the file contract, not the index code.
std::vector<std::pair<std::string, double>> naive_topk(const EmbeddingSet& set,
                                                       const std::vector<double>& w,
                                                       size_t k_out) {
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& e : set) {
    double s = 0.0;
    for (size_t j = 0; j < w.size(); ++j) {
      s += w[j] * static_cast<double>(static_cast<float>(e.vec[j]));
    }
    scored.emplace_back(e.user_id, s);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k_out) scored.resize(k_out);
  return scored;
}

}  // namespace

TEST_CASE("exact query ranks by dot product") {
  EmbeddingSet set = {ue("u1", {1.0, 0.0}), ue("u2", {0.0, 1.0}), ue("u3", {-1.0, 0.0})};
  RetrievalIndex index = RetrievalIndex::build(set);
  CHECK(index.size() == 3);
  std::vector<double> w = {1.0, 0.0};
  QueryResult r = index.query_topk(w, 3, QueryMode::exact);
  REQUIRE(r.ranked.size() == 3);
  CHECK(r.ranked[0].first == "u1");
  CHECK(r.ranked[0].second == 1.0);
  CHECK(r.ranked[1].first == "u2");
  CHECK(r.ranked[1].second == 0.0);
  CHECK(r.ranked[2].first == "u3");
  CHECK(r.ranked[2].second == -1.0);

  SUBCASE("k_out larger than n returns everything") {
    CHECK(index.query_topk(w, 10, QueryMode::exact).ranked.size() == 3);
  }
  SUBCASE("score ties break by ascending user_id") {
    EmbeddingSet tied = {ue("zz", {0.0, 1.0}), ue("aa", {0.0, 1.0}), ue("mm", {0.0, 1.0})};
    RetrievalIndex t = RetrievalIndex::build(tied);
    QueryResult tr = t.query_topk(w, 3, QueryMode::exact);
    CHECK(tr.ranked[0].first == "aa");
    CHECK(tr.ranked[1].first == "mm");
    CHECK(tr.ranked[2].first == "zz");
  }
}

TEST_CASE("build rejects bad inputs") {
  try {
    RetrievalIndex::build({});
    FAIL("expected EmptyIndex");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_index);
  }

  EmbeddingSet dup = {ue("x", {1.0, 0.0}), ue("x", {0.0, 1.0})};
  try {
    RetrievalIndex::build(dup);
    FAIL("expected DuplicateUser");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::duplicate_user);
  }

  EmbeddingSet mixed = {ue("a", {1.0, 0.0}), ue("b", {1.0, 0.0, 0.0})};
  try {
    RetrievalIndex::build(mixed);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("query validates arguments") {
  EmbeddingSet set = {ue("u1", {1.0, 0.0})};
  RetrievalIndex index = RetrievalIndex::build(set);
  std::vector<double> w3 = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(index.query_topk(w3, 1, QueryMode::exact), Error);
  std::vector<double> w = {1.0, 0.0};
  CHECK_THROWS_AS(index.query_topk(w, 0, QueryMode::exact), Error);
}

TEST_CASE("exact mode equals the naive scorer on random indexes") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.uniform(50);
    size_t dim = 1 + rng.uniform(8);
    EmbeddingSet set = random_unit_set(rng, n, dim, "u");
    RetrievalIndex index = RetrievalIndex::build(set);
    std::vector<double> w(dim);
    for (auto& x : w) x = rng.gaussian();
    size_t k_out = 1 + rng.uniform(n);
    QueryResult got = index.query_topk(w, k_out, QueryMode::exact);
    auto expected = naive_topk(set, w, k_out);
    REQUIRE(got.ranked.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
      CHECK(got.ranked[i].first == expected[i].first);
      CHECK(got.ranked[i].second == expected[i].second);
    }
  }
}

TEST_CASE("degenerate LSH config puts everything in one bucket") {
  Rng rng(42);
  EmbeddingSet set = random_unit_set(rng, 40, 4, "u");
  LshConfig cfg;
  cfg.tables = 1;
  cfg.bits = 0;
  cfg.seed = 7;
  RetrievalIndex approx = RetrievalIndex::build(set, cfg);
  RetrievalIndex exact = RetrievalIndex::build(set);
  std::vector<double> w = {0.3, -0.2, 0.9, 0.1};
  QueryResult a = approx.query_topk(w, 10, QueryMode::approx);
  QueryResult b = exact.query_topk(w, 10, QueryMode::exact);
  REQUIRE(a.ranked.size() == b.ranked.size());
  for (size_t i = 0; i < a.ranked.size(); ++i) {
    CHECK(a.ranked[i].first == b.ranked[i].first);
    CHECK(a.ranked[i].second == b.ranked[i].second);
  }
}

TEST_CASE("approx results are a re-ranked subset of the exact ranking") {
  Rng rng(43);
  EmbeddingSet set = random_unit_set(rng, 500, 8, "u");
  LshConfig cfg;
  cfg.tables = 8;
  cfg.bits = 6;
  cfg.seed = 3;
  RetrievalIndex index = RetrievalIndex::build(set, cfg);
  for (int q = 0; q < 20; ++q) {
    std::vector<double> w(8);
    for (auto& x : w) x = rng.gaussian();
    QueryResult approx = index.query_topk(w, 10, QueryMode::approx);
    auto full = naive_topk(set, w, set.size());
    for (size_t i = 1; i < approx.ranked.size(); ++i) {
      CHECK(approx.ranked[i - 1].second >= approx.ranked[i].second);
    }
    // Every returned pair carries its exact score.
    for (const auto& [id, s] : approx.ranked) {
      auto it = std::find_if(full.begin(), full.end(),
                             [&](const auto& p) { return p.first == id; });
      REQUIRE(it != full.end());
      CHECK(it->second == s);
    }
  }
}

TEST_CASE("identical seed and input give identical index files") {
  Rng rng(44);
  EmbeddingSet set = random_unit_set(rng, 30, 4, "u");
  LshConfig cfg;
  cfg.tables = 4;
  cfg.bits = 8;
  cfg.seed = 11;
  testutil::TempDir dir("index_det");
  auto p1 = dir.file("a.ridx");
  auto p2 = dir.file("b.ridx");
  RetrievalIndex::build(set, cfg).save(p1);
  RetrievalIndex::build(set, cfg).save(p2);
  CHECK(testutil::read_bytes(p1) == testutil::read_bytes(p2));
}

TEST_CASE("save/load round trip preserves query results bitwise") {
  Rng rng(45);
  EmbeddingSet set = random_unit_set(rng, 200, 6, "u");
  LshConfig cfg;
  cfg.tables = 6;
  cfg.bits = 5;
  cfg.seed = 9;
  RetrievalIndex index = RetrievalIndex::build(set, cfg);
  testutil::TempDir dir("index_rt");
  auto path = dir.file("i.ridx");
  index.save(path);
  RetrievalIndex back = RetrievalIndex::load(path);
  CHECK(back.size() == index.size());
  CHECK(back.has_lsh());

  std::vector<double> w(6);
  for (auto& x : w) x = rng.gaussian();
  for (QueryMode mode : {QueryMode::exact, QueryMode::approx}) {
    QueryResult a = index.query_topk(w, 25, mode);
    QueryResult b = back.query_topk(w, 25, mode);
    REQUIRE(a.ranked.size() == b.ranked.size());
    for (size_t i = 0; i < a.ranked.size(); ++i) {
      CHECK(a.ranked[i].first == b.ranked[i].first);
      CHECK(a.ranked[i].second == b.ranked[i].second);
    }
  }
}

TEST_CASE("corrupt index files are rejected") {
  Rng rng(46);
  EmbeddingSet set = random_unit_set(rng, 10, 3, "u");
  RetrievalIndex index = RetrievalIndex::build(set);
  testutil::TempDir dir("index_bad");
  auto path = dir.file("i.ridx");
  index.save(path);
  std::string bytes = testutil::read_bytes(path);

  SUBCASE("truncated") {
    testutil::write_text(path, bytes.substr(0, bytes.size() - 9));
    try {
      RetrievalIndex::load(path);
      FAIL("expected CorruptIndex");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::corrupt_index);
    }
  }
  SUBCASE("flipped payload byte fails the checksum") {
    std::string bad = bytes;
    bad[20] = static_cast<char>(bad[20] ^ 0x40);
    testutil::write_text(path, bad);
    try {
      RetrievalIndex::load(path);
      FAIL("expected CorruptIndex");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::corrupt_index);
      CHECK(std::string(e.what()).find("checksum") != std::string::npos);
    }
  }
  SUBCASE("bad magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    testutil::write_text(path, bad);
    CHECK_THROWS_AS(RetrievalIndex::load(path), Error);
  }
}

TEST_CASE("version mismatch names both versions") {
  // Craft a version-2 file with a valid checksum.
  Rng rng(47);
  EmbeddingSet set = random_unit_set(rng, 5, 2, "u");
  RetrievalIndex index = RetrievalIndex::build(set);
  testutil::TempDir dir("index_ver");
  auto path = dir.file("i.ridx");
  index.save(path);
  std::string bytes = testutil::read_bytes(path);
  bytes[4] = 2;  // version field follows the magic
  uint64_t crc = commrec::binio::crc64(bytes.data(), bytes.size() - 8);
  for (int i = 0; i < 8; ++i) {
    bytes[bytes.size() - 8 + static_cast<size_t>(i)] =
        static_cast<char>((crc >> (8 * i)) & 0xFF);
  }
  testutil::write_text(path, bytes);
  try {
    RetrievalIndex::load(path);
    FAIL("expected CorruptIndex");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::corrupt_index);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}
