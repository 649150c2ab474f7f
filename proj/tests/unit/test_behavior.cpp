#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "snmine/behavior.hpp"
#include "snmine/error.hpp"
#include "support/fix5.hpp"
#include "support/oracle.hpp"

using namespace snmine;
using namespace snmine::testing;

namespace {

std::filesystem::path fixture_file() {
  return std::filesystem::path(SNMINE_FIXTURE_DIR) / "web_hit_counts.json";
}

std::vector<Term> phrases(std::initializer_list<const char*> names) {
  std::vector<Term> out;
  for (auto n : names) out.push_back(phrase(n));
  return out;
}

}  // namespace

TEST_CASE("cluster behavior on the five-document corpus") {
  const auto space = fix5_space();
  const auto cands = phrases({"bob", "carol", "unrelated"});
  const auto b = cluster_behavior(space, phrase("alice"), cands);
  CHECK(b.cardinality == 3);
  REQUIRE(b.probability);
  CHECK(*b.probability == doctest::Approx(0.6));
  CHECK(b.quoted_count == 3);
  CHECK(b.conjunctive_count == 3);
  REQUIRE(b.top_cooccurring.size() == 2);
  CHECK(b.top_cooccurring[0].first == phrase("bob"));
  CHECK(b.top_cooccurring[0].second == 2);
  CHECK(b.top_cooccurring[1].first == phrase("carol"));
  CHECK(b.top_cooccurring[1].second == 2);

  const auto none = cluster_behavior(space, phrase("zebra"), cands);
  CHECK(none.cardinality == 0);
  CHECK(none.top_cooccurring.empty());
  CHECK_FALSE(none.quoted_ratio);

  const auto lonely = cluster_behavior(space, phrase("alice"), std::span<const Term>{});
  CHECK(lonely.top_cooccurring.empty());
}

TEST_CASE("cluster behavior separates phrase and conjunctive counts") {
  const auto space = fix5_space();
  const auto b = cluster_behavior(space, conj("alice bob"), std::span<const Term>{});
  CHECK(b.cardinality == 2);
  CHECK(b.conjunctive_count == 2);
  CHECK(b.quoted_count == 1);
  REQUIRE(b.quoted_ratio);
  CHECK(*b.quoted_ratio == doctest::Approx(0.5));
}

TEST_CASE("cluster behavior rejects an empty space") {
  const auto empty = build_index(Corpus({}, "empty"));
  CHECK_THROWS_AS(cluster_behavior(empty, phrase("alice"), std::span<const Term>{}),
                  EmptySpaceError);
}

TEST_CASE("pair behavior on the five-document corpus") {
  const auto space = fix5_space();
  const auto b = pair_behavior(space, phrase("bob"), phrase("alice"));
  CHECK(b.first == phrase("alice"));
  CHECK(b.second == phrase("bob"));
  CHECK(b.counts.n_x == 3);
  CHECK(b.counts.n_y == 3);
  CHECK(b.counts.n_xy == 2);
  CHECK(b.counts.total == std::optional<std::uint64_t>(5));
  CHECK(b.jaccard == doctest::Approx(0.5));
  CHECK(b.dice == doctest::Approx(2.0 / 3.0));
  CHECK(b.overlap == doctest::Approx(2.0 / 3.0));
  CHECK(b.cosine == doctest::Approx(2.0 / 3.0));
  REQUIRE(b.pmi);
  CHECK(*b.pmi == doctest::Approx(std::log2(10.0 / 9.0)));

  const auto swapped = pair_behavior(space, phrase("alice"), phrase("bob"));
  CHECK(to_json(swapped) == to_json(b));

  const auto disjoint = pair_behavior(space, phrase("alice"), phrase("unrelated"));
  CHECK(disjoint.counts.n_xy == 0);
  CHECK(disjoint.jaccard == 0.0);
  CHECK_FALSE(disjoint.pmi);

  CHECK_THROWS_AS(pair_behavior(space, phrase("alice"), phrase("alice")), DegeneratePairError);
}

TEST_CASE("pair behavior over the recorded fixture") {
  auto src = FixtureSource::from_file(fixture_file());
  const auto b = pair_behavior(src, conj("shahrul azman noah"), conj("opim salim sitompul"));
  CHECK(b.counts.n_x == 3000);
  CHECK(b.counts.n_y == 20000);
  CHECK(b.counts.n_xy == 218);
  CHECK(b.jaccard == doctest::Approx(218.0 / 22782.0).epsilon(1e-12));
  CHECK_FALSE(b.pmi);

  const auto q = pair_behavior(src, phrase("shahrul azman noah"), phrase("opim salim sitompul"));
  CHECK(q.counts.n_xy == 61);
  CHECK(q.jaccard == doctest::Approx(61.0 / (5650.0 + 2680.0 - 61.0)));
}

TEST_CASE("mode contrast") {
  auto src = FixtureSource::from_file(fixture_file());
  const auto noah = mode_contrast(src, {"shahrul", "azman", "noah"});
  CHECK(noah.conjunctive_count == 20000);
  CHECK(noah.phrase_count == 2680);
  REQUIRE(noah.ratio);
  CHECK(*noah.ratio == doctest::Approx(0.134));

  const auto opim = mode_contrast(src, {"opim", "salim", "sitompul"});
  CHECK(opim.conjunctive_count == 3000);
  CHECK(opim.phrase_count == 5650);
  CHECK(*opim.ratio == doctest::Approx(5650.0 / 3000.0));

  CHECK_THROWS_AS(mode_contrast(src, {"nobody"}), MissingFixtureError);

  LocalSource local(fix5_space());
  const auto a = mode_contrast(local, {"alice", "works"});
  CHECK(a.conjunctive_count == 1);
  CHECK(a.phrase_count == 1);
  CHECK(*a.ratio == 1.0);
}

TEST_CASE("transactions from the five-document corpus") {
  const auto space = fix5_space();
  const auto attrs = phrases({"carol", "alice", "bob"});
  const auto tx = transactions_from_corpus(space, attrs);
  REQUIRE(tx.size() == 5);
  CHECK(tx[0] == Transaction{"d1", {"alice", "bob"}});
  CHECK(tx[1] == Transaction{"d2", {"alice", "carol"}});
  CHECK(tx[2] == Transaction{"d3", {"bob", "carol"}});
  CHECK(tx[3] == Transaction{"d4", {"alice", "bob", "carol"}});
  CHECK(tx[4] == Transaction{"d5", {}});

  const std::vector<Term> dup{phrase("alice"), conj("alice")};
  CHECK_THROWS_AS(transactions_from_corpus(space, dup), ConfigError);
}

TEST_CASE("association rules on the five-document corpus") {
  const auto space = fix5_space();
  const auto tx = transactions_from_corpus(space, phrases({"alice", "bob", "carol"}));
  const auto rules = mine_rules(tx);
  const AssociationRule* ab = nullptr;
  for (const auto& r : rules) {
    if (r.antecedent == std::vector<std::string>{"alice"} &&
        r.consequent == std::vector<std::string>{"bob"}) {
      ab = &r;
    }
  }
  REQUIRE(ab);
  CHECK(ab->support == doctest::Approx(0.4));
  CHECK(ab->confidence == doctest::Approx(2.0 / 3.0));
  CHECK(ab->holds);

  for (std::size_t i = 1; i < rules.size(); ++i) {
    CHECK(rules[i - 1].confidence >= rules[i].confidence);
  }

  const auto loose = mine_rules(tx, {0.0, 0.0, 2});
  for (const auto& r : loose) CHECK(r.holds);

  const auto text = to_text(rules);
  CHECK(text.find("{alice} => {bob}") != std::string::npos);
  CHECK(text.find("0.400000") != std::string::npos);
  CHECK(text.find("0.666667") != std::string::npos);
}

TEST_CASE("association rules reject bad input") {
  CHECK_THROWS_AS(mine_rules(std::span<const Transaction>{}), ConfigError);
  const std::vector<Transaction> one{{"t", {"a"}}};
  CHECK_THROWS_AS(mine_rules(one, {1.5, 0.5, 2}), ConfigError);
  CHECK_THROWS_AS(mine_rules(one, {0.5, -0.1, 2}), ConfigError);
  CHECK(mine_rules(one).empty());
}

TEST_CASE("association rules agree with exhaustive enumeration") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> ntx(1, 32);
  std::uniform_int_distribution<int> nitems(1, 6);
  std::uniform_real_distribution<double> thr(0.0, 1.0);
  for (int round = 0; round < 100; ++round) {
    const int m = nitems(rng);
    const int n = ntx(rng);
    std::bernoulli_distribution has(0.5);
    std::vector<Transaction> tx;
    std::vector<std::vector<std::string>> raw;
    for (int t = 0; t < n; ++t) {
      std::vector<std::string> items;
      for (int i = 0; i < m; ++i) {
        if (has(rng)) items.push_back(std::string(1, static_cast<char>('a' + i)));
      }
      raw.push_back(items);
      tx.push_back({"t" + std::to_string(t), items});
    }
    const RuleOptions opt{thr(rng), thr(rng), static_cast<std::size_t>(1 + round % 3)};
    const auto got = mine_rules(tx, opt);
    const auto want = oracle_rules(raw, opt.minsup, opt.minconf, opt.max_itemset_size);
    REQUIRE(got.size() == want.size());
    std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> keys;
    for (const auto& w : want) {
      auto it = std::find_if(got.begin(), got.end(), [&](const AssociationRule& r) {
        return r.antecedent == w.antecedent && r.consequent == w.consequent;
      });
      REQUIRE(it != got.end());
      CHECK(it->support == doctest::Approx(w.support));
      CHECK(it->confidence == doctest::Approx(w.confidence));
      CHECK(it->holds == w.holds);
    }
  }
}

TEST_CASE("report serializations are deterministic") {
  const auto space = fix5_space();
  const auto cands = phrases({"bob", "carol"});
  const auto a = to_json(cluster_behavior(space, phrase("alice"), cands));
  const auto b = to_json(cluster_behavior(space, phrase("alice"), cands));
  CHECK(a == b);
  const auto j = nlohmann::json::parse(a);
  CHECK(j.at("cardinality") == 3);
  CHECK(to_text(pair_behavior(space, phrase("alice"), phrase("bob"))).find("0.500000") !=
        std::string::npos);
}
