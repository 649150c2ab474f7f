#include "snmine/behavior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snmine/error.hpp"

namespace snmine {
namespace {

using nlohmann::json;

std::shared_ptr<const EventSpace> borrow(const EventSpace& space) {
  return {&space, [](const EventSpace*) {}};
}

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fixed6(const std::optional<double>& v) {
  return v ? fixed6(*v) : std::string("undefined");
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string braces(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + "}";
}

// Bitset over transactions, one per item.
using Cover = std::vector<std::uint64_t>;

std::uint64_t popcount(const Cover& c) {
  std::uint64_t n = 0;
  for (auto w : c) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

Cover cover_of(const std::vector<std::size_t>& itemset, const std::vector<Cover>& items,
               std::size_t words) {
  Cover c(words, ~std::uint64_t{0});
  for (auto i : itemset) {
    for (std::size_t w = 0; w < words; ++w) c[w] &= items[i][w];
  }
  return c;
}

void combinations(std::size_t n, std::size_t k, std::size_t start,
                  std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ClusterBehavior cluster_behavior(const EventSpace& space, const Term& term,
                                 std::span<const Term> candidates) {
  if (space.total_docs() == 0) {
    throw EmptySpaceError("cluster behavior needs a non-empty event space");
  }
  LocalSource local(borrow(space));
  return cluster_behavior(local, term, candidates);
}

ClusterBehavior cluster_behavior(HitSource& source, const Term& term,
                                 std::span<const Term> candidates) {
  ClusterBehavior b{term, term.mode(), source.count(term), std::nullopt, 0, 0, std::nullopt, {}};
  if (auto total = source.total(); total && *total > 0) {
    b.probability = static_cast<double>(b.cardinality) / static_cast<double>(*total);
  }
  b.quoted_count = source.count(term.with_mode(MatchMode::phrase));
  b.conjunctive_count = source.count(term.with_mode(MatchMode::conjunctive));
  b.quoted_ratio = ratio(b.quoted_count, b.conjunctive_count);

  std::set<Term> seen;
  for (const auto& cand : candidates) {
    if (cand == term || !seen.insert(cand).second) continue;
    const std::uint64_t n = source.count(term, cand);
    if (n > 0) b.top_cooccurring.emplace_back(cand, n);
  }
  std::sort(b.top_cooccurring.begin(), b.top_cooccurring.end(),
            [](const auto& a, const auto& c) {
              if (a.second != c.second) return a.second > c.second;
              if (a.first.text() != c.first.text()) return a.first.text() < c.first.text();
              return a.first < c.first;
            });
  return b;
}

PairBehavior pair_behavior(const EventSpace& space, const Term& a_k, const Term& a_l) {
  LocalSource local(borrow(space));
  return pair_behavior(local, a_k, a_l);
}

PairBehavior pair_behavior(HitSource& source, const Term& a_k, const Term& a_l) {
  const Query q = Query::pair(a_k, a_l);
  const Term& first = q.terms[0];
  const Term& second = q.terms[1];
  CountTriple c{source.count(first), source.count(second), source.count(q), source.total()};
  PairBehavior b{first, second, c, jaccard(c), dice(c), overlap(c), cosine(c), std::nullopt};
  if (c.total && *c.total > 0) b.pmi = pmi(c);
  return b;
}

ModeContrast mode_contrast(HitSource& source, const std::vector<std::string>& name) {
  const Term conj(name, MatchMode::conjunctive);
  ModeContrast c;
  c.conjunctive_count = source.count(conj);
  c.phrase_count = source.count(conj.with_mode(MatchMode::phrase));
  c.ratio = ratio(c.phrase_count, c.conjunctive_count);
  return c;
}

std::vector<Transaction> transactions_from_corpus(const EventSpace& space,
                                                  std::span<const Term> attributes) {
  std::set<std::string> labels;
  for (const auto& a : attributes) {
    if (!labels.insert(a.text()).second) {
      throw ConfigError("duplicate attribute: " + a.text());
    }
  }
  std::vector<Transaction> out;
  for (const auto& id : space.doc_ids()) out.push_back({id, {}});
  for (const auto& a : attributes) {
    for (auto d : space.match(a)) out[d].items.push_back(a.text());
  }
  for (auto& t : out) std::sort(t.items.begin(), t.items.end());
  return out;
}

std::vector<AssociationRule> mine_rules(std::span<const Transaction> transactions,
                                        const RuleOptions& options) {
  if (transactions.empty()) throw ConfigError("rule mining needs at least one transaction");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(options.minsup) || !in_unit(options.minconf)) {
    throw ConfigError("minsup and minconf must lie in [0, 1]");
  }
  if (options.max_itemset_size == 0) throw ConfigError("max_itemset_size must be >= 1");

  std::vector<std::string> universe;
  for (const auto& t : transactions) universe.insert(universe.end(), t.items.begin(), t.items.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  const std::size_t m = transactions.size();
  const std::size_t words = (m + 63) / 64;
  std::vector<Cover> items(universe.size(), Cover(words, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& it : transactions[i].items) {
      auto pos = std::lower_bound(universe.begin(), universe.end(), it) - universe.begin();
      items[static_cast<std::size_t>(pos)][i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::vector<std::vector<std::size_t>> itemsets;
  const std::size_t cap = std::min(options.max_itemset_size, universe.size());
  for (std::size_t k = 1; k <= cap; ++k) {
    std::vector<std::size_t> cur;
    combinations(universe.size(), k, 0, cur, itemsets);
  }
  std::vector<Cover> covers;
  std::vector<std::uint64_t> supports;
  for (const auto& s : itemsets) {
    covers.push_back(cover_of(s, items, words));
    supports.push_back(popcount(covers.back()));
  }

  auto labels = [&](const std::vector<std::size_t>& s) {
    std::vector<std::string> out;
    for (auto i : s) out.push_back(universe[i]);
    return out;
  };
  auto disjoint = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    for (auto x : a) {
      if (std::find(b.begin(), b.end(), x) != b.end()) return false;
    }
    return true;
  };

  std::vector<AssociationRule> rules;
  for (std::size_t x = 0; x < itemsets.size(); ++x) {
    if (supports[x] == 0) continue;
    for (std::size_t y = 0; y < itemsets.size(); ++y) {
      if (!disjoint(itemsets[x], itemsets[y])) continue;
      std::uint64_t joint = 0;
      for (std::size_t w = 0; w < words; ++w) {
        joint += static_cast<std::uint64_t>(std::popcount(covers[x][w] & covers[y][w]));
      }
      AssociationRule r;
      r.antecedent = labels(itemsets[x]);
      r.consequent = labels(itemsets[y]);
      r.support = static_cast<double>(joint) / static_cast<double>(m);
      r.confidence = static_cast<double>(joint) / static_cast<double>(supports[x]);
      r.holds = r.support >= options.minsup && r.confidence >= options.minconf;
      rules.push_back(std::move(r));
    }
  }
  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

std::string to_json(const ClusterBehavior& b) {
  json top = json::array();
  for (const auto& [t, n] : b.top_cooccurring) {
    top.push_back({{"term", t.text()}, {"mode", std::string(to_string(t.mode()))}, {"n_xy", n}});
  }
  json j{{"term", b.term.text()},
         {"mode", std::string(to_string(b.mode))},
         {"cardinality", b.cardinality},
         {"probability", opt(b.probability)},
         {"quoted_count", b.quoted_count},
         {"conjunctive_count", b.conjunctive_count},
         {"quoted_ratio", opt(b.quoted_ratio)},
         {"top_cooccurring", top}};
  return j.dump(2) + "\n";
}

std::string to_json(const PairBehavior& b) {
  json j{{"first", b.first.text()},
         {"second", b.second.text()},
         {"counts",
          {{"n_x", b.counts.n_x},
           {"n_y", b.counts.n_y},
           {"n_xy", b.counts.n_xy},
           {"total", b.counts.total ? json(*b.counts.total) : json(nullptr)}}},
         {"jaccard", b.jaccard},
         {"dice", b.dice},
         {"overlap", b.overlap},
         {"cosine", b.cosine},
         {"pmi", opt(b.pmi)}};
  return j.dump(2) + "\n";
}

std::string to_json(const ModeContrast& c) {
  json j{{"conjunctive_count", c.conjunctive_count},
         {"phrase_count", c.phrase_count},
         {"ratio", opt(c.ratio)}};
  return j.dump(2) + "\n";
}

std::string to_json(std::span<const AssociationRule> rules) {
  json arr = json::array();
  for (const auto& r : rules) {
    arr.push_back({{"antecedent", r.antecedent},
                   {"consequent", r.consequent},
                   {"support", r.support},
                   {"confidence", r.confidence},
                   {"holds", r.holds}});
  }
  return arr.dump(2) + "\n";
}

std::string to_text(const ClusterBehavior& b) {
  std::ostringstream out;
  out << "term         " << b.term.text() << " (" << to_string(b.mode) << ")\n"
      << "cardinality  " << b.cardinality << '\n'
      << "probability  " << fixed6(b.probability) << '\n'
      << "quoted       " << b.quoted_count << '\n'
      << "conjunctive  " << b.conjunctive_count << '\n'
      << "quoted_ratio " << fixed6(b.quoted_ratio) << '\n';
  for (const auto& [t, n] : b.top_cooccurring) {
    out << "cooccurs     " << t.text() << ' ' << n << '\n';
  }
  return out.str();
}

std::string to_text(const PairBehavior& b) {
  std::ostringstream out;
  out << "pair     " << b.first.text() << " | " << b.second.text() << '\n'
      << "n_x      " << b.counts.n_x << '\n'
      << "n_y      " << b.counts.n_y << '\n'
      << "n_xy     " << b.counts.n_xy << '\n'
      << "total    " << (b.counts.total ? std::to_string(*b.counts.total) : "unknown") << '\n'
      << "jaccard  " << fixed6(b.jaccard) << '\n'
      << "dice     " << fixed6(b.dice) << '\n'
      << "overlap  " << fixed6(b.overlap) << '\n'
      << "cosine   " << fixed6(b.cosine) << '\n'
      << "pmi      " << fixed6(b.pmi) << '\n';
  return out.str();
}

std::string to_text(const ModeContrast& c) {
  std::ostringstream out;
  out << "conjunctive " << c.conjunctive_count << '\n'
      << "phrase      " << c.phrase_count << '\n'
      << "ratio       " << fixed6(c.ratio) << '\n';
  return out.str();
}

std::string to_text(std::span<const AssociationRule> rules, bool holding_only) {
  std::vector<std::string> names;
  std::size_t width = 4;
  for (const auto& r : rules) {
    if (holding_only && !r.holds) continue;
    names.push_back(braces(r.antecedent) + " => " + braces(r.consequent));
    width = std::max(width, names.back().size());
  }
  std::ostringstream out;
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  out << pad("rule") << "support   confidence  holds\n";
  std::size_t i = 0;
  for (const auto& r : rules) {
    if (holding_only && !r.holds) continue;
    out << pad(names[i++]) << fixed6(r.support) << "  " << fixed6(r.confidence) << "    "
        << (r.holds ? "yes" : "no") << '\n';
  }
  return out.str();
}

}  // namespace snmine
