#include <random>

#include "doctest.h"
#include "snmine/corpus.hpp"
#include "snmine/error.hpp"
#include "support/tempdir.hpp"

using namespace snmine;
using snmine::testing::TempDir;

namespace {

std::vector<std::pair<std::string, std::uint32_t>> pairs(std::string_view text) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  for (auto& t : tokenize(text)) out.emplace_back(t.text, t.position);
  return out;
}

using Pairs = std::vector<std::pair<std::string, std::uint32_t>>;

}  // namespace

TEST_CASE("tokenize splits on whitespace and punctuation and lowercases") {
  CHECK(pairs("Alice works with Bob.") ==
        Pairs{{"alice", 0}, {"works", 1}, {"with", 2}, {"bob", 3}});
  CHECK(pairs("").empty());
  CHECK(pairs("Shahrul  Azman—Noah") == Pairs{{"shahrul", 0}, {"azman", 1}, {"noah", 2}});
}

TEST_CASE("tokenize keeps digits and joins nothing across separators") {
  CHECK(tokenize_words("ICIBA-2016, page 86/91") ==
        std::vector<std::string>{"iciba", "2016", "page", "86", "91"});
  CHECK(tokenize_words("  \t\n ...!? ").empty());
}

TEST_CASE("tokenize normalizes to NFC and lowercases non-ASCII letters") {
  // "e" + combining acute composes to U+00E9.
  CHECK(tokenize_words("Caf\x65\xCC\x81") == std::vector<std::string>{"caf\xC3\xA9"});
  CHECK(tokenize_words("\xC3\x89" "COLE") == std::vector<std::string>{"\xC3\xA9" "cole"});
  CHECK(tokenize_words("\xCE\x9F\xCE\x94\xCE\x9F\xCE\xA3") ==
        tokenize_words("\xCE\xBF\xCE\xB4\xCE\xBF\xCF\x82"));
}

TEST_CASE("invalid UTF-8 is rejected") {
  CHECK_THROWS_AS(tokenize("ok \xff bad"), InvalidUtf8Error);
  try {
    Document::from_text("page-7", "abc \xc3");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(std::string(e.what()).find("page-7") != std::string::npos);
  }
}

TEST_CASE("tokenizing the joined tokens reproduces the tokens") {
  const std::vector<std::string> fragments = {
      "Alice", "BOB", " ", "  ", ".", ",", "—", "-", "42", "x9",
      "\xC3\x89t\xC3\xA9", "e\xCC\x81", "\xC4\xB0stanbul", "\xCE\xA3\xCE\xB9", "!?", "\t", "_"};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, fragments.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int round = 0; round < 500; ++round) {
    std::string text;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) text += fragments[pick(rng)];
    const auto words = tokenize_words(text);
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    CHECK_MESSAGE(tokenize_words(joined) == words, "text: " << text);

    const auto toks = tokenize(text);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      CHECK(toks[i].position == i);
      CHECK(!toks[i].text.empty());
    }
  }
}

TEST_CASE("no tokens iff no letter or digit runs") {
  const std::string separators = " .,;:!?-_()[]{}\"'/\\\t\n";
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, separators.size() - 1);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    for (int i = 0; i < 10; ++i) text += separators[pick(rng)];
    CHECK(tokenize(text).empty());
    text.insert(text.size() / 2, round % 2 ? "q" : "7");
    CHECK(tokenize(text).size() == 1);
  }
}

TEST_CASE("corpus sorts by doc_id and rejects duplicates") {
  auto c = Corpus::from_texts({{"b", "two"}, {"a", "one"}});
  REQUIRE(c.size() == 2);
  CHECK(c.documents()[0].doc_id == "a");
  CHECK_THROWS_AS(Corpus::from_texts({{"a", "x"}, {"a", "y"}}), DuplicateIdError);
}

TEST_CASE("ingest_directory") {
  SUBCASE("one document per txt file, ordered by stem") {
    TempDir dir;
    for (int i = 5; i >= 1; --i) dir.write("d" + std::to_string(i) + ".txt", "doc number " + std::to_string(i));
    dir.write("notes.md", "ignored");
    const Corpus c = ingest_directory(dir.path());
    REQUIRE(c.size() == 5);
    CHECK(c.documents().front().doc_id == "d1");
    CHECK(c.documents().back().doc_id == "d5");
    CHECK(c.documents()[2].tokens.size() == 3);
    CHECK(ingest_directory(dir.path()) == c);
  }
  SUBCASE("empty directory gives an empty corpus") {
    TempDir dir;
    CHECK(ingest_directory(dir.path()).empty());
  }
  SUBCASE("non-UTF-8 file is named in the error") {
    TempDir dir;
    dir.write("good.txt", "fine");
    dir.write("broken.txt", "bad \xfe\xff bytes");
    try {
      ingest_directory(dir.path());
      FAIL("expected IngestError");
    } catch (const IngestError& e) {
      CHECK(std::string(e.what()).find("broken.txt") != std::string::npos);
    }
  }
  SUBCASE("missing directory") {
    CHECK_THROWS_AS(ingest_directory("/nonexistent/snmine/dir"), IngestError);
  }
}

TEST_CASE("ingest_jsonl") {
  TempDir dir;
  SUBCASE("well-formed lines") {
    auto p = dir.write("c.jsonl",
                       "{\"id\": \"c\", \"text\": \"three\"}\n"
                       "{\"id\": \"a\", \"text\": \"one\"}\n\n"
                       "{\"id\": \"b\", \"text\": \"two two\"}\n");
    const Corpus c = ingest_jsonl(p);
    REQUIRE(c.size() == 3);
    CHECK(c.documents()[0].doc_id == "a");
    CHECK(c.documents()[1].tokens.size() == 2);
  }
  SUBCASE("missing text reports the line") {
    auto p = dir.write("c.jsonl", "{\"id\": \"a\", \"text\": \"x\"}\n{\"id\": \"b\"}\n");
    try {
      ingest_jsonl(p);
      FAIL("expected IngestError");
    } catch (const IngestError& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON reports the line") {
    auto p = dir.write("c.jsonl", "{\"id\": \"a\", \"text\": \"x\"}\n{oops\n");
    CHECK_THROWS_WITH_AS(ingest_jsonl(p), doctest::Contains(":2:"), IngestError);
  }
  SUBCASE("duplicate ids are rejected by name") {
    auto p = dir.write("c.jsonl", "{\"id\": \"a\", \"text\": \"x\"}\n{\"id\": \"a\", \"text\": \"y\"}\n");
    CHECK_THROWS_WITH_AS(ingest_jsonl(p), doctest::Contains("duplicate document id: a"),
                         IngestError);
  }
}
