// Smoke tests for the CLI binary. The path arrives via the COMMREC_CLI
// environment variable set by CTest.

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"

#include "testutil.hpp"

namespace {

std::string cli() {
  const char* path = std::getenv("COMMREC_CLI");
  REQUIRE_MESSAGE(path != nullptr, "COMMREC_CLI must point at the CLI binary");
  return path;
}

int run(const std::string& args) {
  std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("help exits zero, usage errors exit two, module errors exit one") {
  CHECK(run("--help") == 0);
  CHECK(run("synth --help") == 0);
  CHECK(run("definitely-not-a-command") == 2);
  CHECK(run("build-vocab") == 2);  // missing required flags
  CHECK(run("build-vocab --corpus /nonexistent.jsonl --out /tmp/v.tsv") == 1);
}

TEST_CASE("pipeline runs end to end") {
  testutil::TempDir dir("cli_pipe");
  auto f = [&](const std::string& name) { return dir.file(name); };

  CHECK(run("synth --vocab-size 200 --background-users 24 --communities 2 --community-size 4"
            " --topic-words 10 --topic-mix 0.4 --posts-per-user 12 --tokens-per-post 6"
            " --seed 5 --out-corpus " + f("c.jsonl") + " --out-communities " + f("comm.json")) ==
        0);
  CHECK(run("build-vocab --corpus " + f("c.jsonl") + " --min-count 1 --theta 1e18 --out " +
            f("v.tsv")) == 0);
  CHECK(run("train-embeddings --corpus " + f("c.jsonl") + " --vocab " + f("v.tsv") +
            " --dim 8 --sample-size 4 --steps 400 --batch 16 --learning-rate 0.1 --seed 1" +
            " --out " + f("m.uemb")) == 0);
  CHECK(run("embed-users --corpus " + f("c.jsonl") + " --vocab " + f("v.tsv") + " --matrix " +
            f("m.uemb") + " --out " + f("u.uvec")) == 0);
  CHECK(run("build-index --vectors " + f("u.uvec") + " --lsh-tables 4 --lsh-bits 5 --seed 2" +
            " --out " + f("i.ridx")) == 0);
  CHECK(run("fit --corpus " + f("c.jsonl") + " --vectors " + f("u.uvec") + " --community " +
            f("comm.json") + " --name community0 --lambda 1.0 --out " + f("clf.json")) == 0);
  CHECK(run("retrieve --index " + f("i.ridx") + " --classifier " + f("clf.json") +
            " --k 5 --mode exact --out " + f("hits.json")) == 0);
  CHECK(run("retrieve --index " + f("i.ridx") + " --classifier " + f("clf.json") +
            " --k 5 --mode approx --out " + f("hits2.json")) == 0);
  CHECK(run("evaluate --corpus " + f("c.jsonl") + " --vectors " + f("u.uvec") + " --community " +
            f("comm.json") + " --lambda 1.0 --out " + f("eval.json")) == 0);
  CHECK(run("analyze-drift --matrix " + f("m.uemb") + " --init " + f("m.uemb") + " --vocab " +
            f("v.tsv") + " --top 10 --format tsv --out " + f("drift.tsv")) == 0);
  CHECK(run("analyze-communities --vectors " + f("u.uvec") + " --communities " + f("comm.json") +
            " --out " + f("sim.json")) == 0);

  // Need a community member id for top-tweets; synth names them
  // community0_m0, community0_m1, ...
  CHECK(run("top-tweets --classifier " + f("clf.json") + " --corpus " + f("c.jsonl") +
            " --user community0_m0 --vocab " + f("v.tsv") + " --matrix " + f("m.uemb") +
            " --k 3 --out " + f("tops.json")) == 0);

  for (const char* name : {"c.jsonl", "comm.json", "v.tsv", "m.uemb", "u.uvec", "i.ridx",
                           "clf.json", "hits.json", "hits2.json", "eval.json", "drift.tsv",
                           "sim.json", "tops.json"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir.file(name)), name);
    CHECK_MESSAGE(std::filesystem::file_size(dir.file(name)) > 0, name);
  }
}

TEST_CASE("json config files supply flags that the command line overrides") {
  testutil::TempDir dir("cli_cfg");
  // Config asks for 300 vocabulary types; the command line overrides the seed.
  testutil::write_text(dir.file("synth.cfg.json"),
                       R"({"vocab-size": 150, "background-users": 10, "communities": 0,)"
                       R"( "posts-per-user": 6, "tokens-per-post": 4, "seed": 99})");
  CHECK(run("synth --config " + dir.file("synth.cfg.json") + " --seed 5 --out-corpus " +
            dir.file("a.jsonl")) == 0);
  CHECK(run("synth --vocab-size 150 --background-users 10 --communities 0 --posts-per-user 6"
            " --tokens-per-post 4 --seed 5 --out-corpus " + dir.file("b.jsonl")) == 0);
  CHECK(testutil::read_bytes(dir.file("a.jsonl")) == testutil::read_bytes(dir.file("b.jsonl")));
}
