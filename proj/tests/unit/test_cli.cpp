#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "snmine/cli.hpp"
#include "support/tempdir.hpp"

using namespace snmine::testing;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "snmine");
  std::ostringstream out, err;
  const int code = snmine::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = SNMINE_TEST_DATA_DIR;
const std::string kFix5 = kData + "/fix5";
const std::string kActors = kData + "/fix5_actors.json";
const std::string kFixture = std::string(SNMINE_FIXTURE_DIR) + "/web_hit_counts.json";

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cli index") {
  auto r = run({"index", kFix5});
  CHECK(r.code == 0);
  CHECK(has(r.out, "indexed 5 documents"));

  TempDir dir;
  std::filesystem::create_directory(dir / "empty");
  r = run({"index", (dir / "empty").string()});
  CHECK(r.code == 0);
  CHECK(has(r.out, "indexed 0 documents"));

  r = run({"index", (dir / "missing").string()});
  CHECK(r.code == 1);
  CHECK(has(r.err, "error:"));
}

TEST_CASE("cli index snapshot answers like the corpus") {
  TempDir dir;
  const auto snap = (dir / "fix5.idx").string();
  REQUIRE(run({"--out", snap, "index", kFix5}).code == 0);
  const auto from_corpus = run({"--corpus", kFix5, "query", "alice", "bob"});
  const auto from_index = run({"--index", snap, "query", "alice", "bob"});
  CHECK(from_corpus.code == 0);
  CHECK(from_corpus.out == from_index.out);
}

TEST_CASE("cli query") {
  auto r = run({"--corpus", kFix5, "query", "alice"});
  CHECK(r.code == 0);
  CHECK(r.out == "query=\"alice\" count=3 probability=0.600000\n");

  r = run({"--corpus", kFix5, "--mode", "conjunctive", "query", "bob", "alice"});
  CHECK(r.out == "query=alice AND bob count=2 probability=0.400000\n");

  r = run({"--source", "fixture", "--fixture", kFixture, "query", "shahrul azman noah"});
  CHECK(r.code == 0);
  CHECK(r.out == "query=\"shahrul azman noah\" count=2680\n");

  r = run({"--source", "fixture", "--fixture", kFixture, "query", "nobody"});
  CHECK(r.code == 1);

  r = run({"--corpus", kFix5, "query", "a", "b", "c"});
  CHECK(r.code == 2);

  r = run({"--corpus", kFix5, "--format", "json", "query", "alice"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("count") == 3);
  CHECK(j.at("probability") == doctest::Approx(0.6));
}

TEST_CASE("cli usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"query", "alice"}).code == 2);  // no corpus
  CHECK(run({"--source", "fixture", "query", "alice"}).code == 2);
  CHECK(run({"--corpus", kFix5, "--format", "dot", "query", "alice"}).code == 2);
}

TEST_CASE("cli network") {
  auto r = run({"--corpus", kFix5, "network", kActors});
  CHECK(r.code == 0);
  CHECK(has(r.err, "vertices=3 edges=3 measure=jaccard threshold=0.000000"));
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("edges").size() == 3);

  r = run({"--corpus", kFix5, "--threshold", "0.55", "network", kActors});
  CHECK(has(r.err, "vertices=3 edges=0"));

  TempDir dir;
  const auto dot = (dir / "g.dot").string();
  r = run({"--corpus", kFix5, "--format", "dot", "--out", dot, "network", kActors});
  CHECK(r.code == 0);
  CHECK(has(r.out, "edges=3"));
  CHECK(has(slurp(dot), "graph SN {"));

  CHECK(run({"--corpus", kFix5, "network", kData + "/fix5_actors_dup.json"}).code == 1);
  CHECK(run({"--corpus", kFix5, "--measure", "pmi", "network", kActors}).code != 0);
}

TEST_CASE("cli network output is deterministic") {
  const auto a = run({"--corpus", kFix5, "network", kActors});
  const auto b = run({"--corpus", kFix5, "network", kActors});
  CHECK(a.out == b.out);
}

TEST_CASE("cli behavior") {
  auto r = run({"--corpus", kFix5, "behavior", "alice", "bob"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "jaccard  0.500000"));

  r = run({"--corpus", kFix5, "behavior", "alice", "--candidate", "bob", "--candidate", "carol"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "cardinality  3"));
  CHECK(has(r.out, "cooccurs     bob 2"));

  r = run({"--corpus", kFix5, "behavior", "zebra"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "cardinality  0"));

  r = run({"--source", "fixture", "--fixture", kFixture, "--format", "json", "behavior",
           "--contrast", "shahrul azman noah"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("conjunctive_count") == 20000);
  CHECK(j.at("phrase_count") == 2680);
}

TEST_CASE("cli rules") {
  auto r = run({"--corpus", kFix5, "rules", kData + "/fix5_attributes.json"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "{alice} => {bob}"));
  CHECK(has(r.out, "0.400000"));
  CHECK(has(r.out, "0.666667"));

  r = run({"--corpus", kFix5, "rules", "--minsup", "2", kData + "/fix5_attributes.json"});
  CHECK(r.code == 2);
}
