#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "snmine/engine.hpp"
#include "snmine/hitsource.hpp"
#include "snmine/measures.hpp"

namespace snmine {

/// Statistics describing one term's cluster.
struct ClusterBehavior {
  Term term;
  MatchMode mode;
  std::uint64_t cardinality = 0;  // under `mode`
  std::optional<double> probability;
  std::uint64_t quoted_count = 0;
  std::uint64_t conjunctive_count = 0;
  std::optional<double> quoted_ratio;  // quoted / conjunctive
  /// Candidates that co-occur with the term at least once, by count
  /// descending then term text.
  std::vector<std::pair<Term, std::uint64_t>> top_cooccurring;
};

/// Throws EmptySpaceError on an empty space.
ClusterBehavior cluster_behavior(const EventSpace& space, const Term& term,
                                 std::span<const Term> candidates);
/// Same report over any hit source; probability is absent without |Ω|.
ClusterBehavior cluster_behavior(HitSource& source, const Term& term,
                                 std::span<const Term> candidates);

/// One consistent snapshot of a dyad: its counts and every measure on them.
struct PairBehavior {
  Term first;  // first <= second
  Term second;
  CountTriple counts;
  double jaccard = 0.0;
  double dice = 0.0;
  double overlap = 0.0;
  double cosine = 0.0;
  std::optional<double> pmi;  // absent when undefined or |Ω| unknown
};

/// Throws DegeneratePairError when a_k == a_l.
PairBehavior pair_behavior(const EventSpace& space, const Term& a_k, const Term& a_l);
PairBehavior pair_behavior(HitSource& source, const Term& a_k, const Term& a_l);

struct ModeContrast {
  std::uint64_t conjunctive_count = 0;
  std::uint64_t phrase_count = 0;
  std::optional<double> ratio;  // phrase / conjunctive
};

/// Counts a name both unquoted and quoted on the same source.
ModeContrast mode_contrast(HitSource& source, const std::vector<std::string>& name);

struct Transaction {
  std::string doc_id;
  std::vector<std::string> items;  // attribute labels (term text), sorted

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// One transaction per document holding the attributes relevant to it.
/// Throws ConfigError when two attributes share a label.
std::vector<Transaction> transactions_from_corpus(const EventSpace& space,
                                                  std::span<const Term> attributes);

struct AssociationRule {
  std::vector<std::string> antecedent;  // sorted, disjoint from consequent
  std::vector<std::string> consequent;
  double support = 0.0;     // |{i : X ∪ Y ⊆ M_i}| / |M|
  double confidence = 0.0;  // support(X ∪ Y) / support(X)
  bool holds = false;       // support >= minsup && confidence >= minconf

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct RuleOptions {
  double minsup = 0.1;
  double minconf = 0.5;
  std::size_t max_itemset_size = 2;  // per side
};

/// Every rule X => Y over the items seen in `transactions` with disjoint,
/// non-empty sides of at most max_itemset_size items and support(X) > 0,
/// ordered by confidence then support (descending), then antecedent and
/// consequent. Throws ConfigError on zero transactions or bad thresholds.
std::vector<AssociationRule> mine_rules(std::span<const Transaction> transactions,
                                        const RuleOptions& options = {});

std::string to_json(const ClusterBehavior& b);
std::string to_json(const PairBehavior& b);
std::string to_json(const ModeContrast& c);
std::string to_json(std::span<const AssociationRule> rules);

std::string to_text(const ClusterBehavior& b);
std::string to_text(const PairBehavior& b);
std::string to_text(const ModeContrast& c);
std::string to_text(std::span<const AssociationRule> rules, bool holding_only = true);

}  // namespace snmine
