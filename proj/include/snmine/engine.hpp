#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "snmine/corpus.hpp"

namespace snmine {

/// phrase: tokens must appear contiguously and in order (a quoted query).
/// conjunctive: every token must appear somewhere (an unquoted query).
enum class MatchMode { phrase, conjunctive };

std::string_view to_string(MatchMode mode);
/// Throws ConfigError for anything other than "phrase"/"conjunctive".
MatchMode parse_match_mode(std::string_view text);

/// A search term: a normalized token sequence plus its match mode.
/// Duplicate tokens are kept. Two terms are equal iff tokens and mode match.
class Term {
 public:
  /// Tokenizes `raw`. Throws InvalidTermError if no tokens remain.
  Term(std::string raw, MatchMode mode = MatchMode::phrase);
  Term(std::vector<std::string> tokens, MatchMode mode);

  const std::string& raw() const noexcept { return raw_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  MatchMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  /// Tokens joined by single spaces.
  std::string text() const;
  Term with_mode(MatchMode mode) const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.mode_ == b.mode_ && a.tokens_ == b.tokens_;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.tokens_ <=> b.tokens_; c != 0) return c;
    return a.mode_ <=> b.mode_;
  }

 private:
  std::string raw_;
  std::vector<std::string> tokens_;
  MatchMode mode_;
};

struct Posting {
  std::uint32_t doc = 0;  // index into EventSpace::doc_ids()
  std::vector<std::uint32_t> positions;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// The set of documents matching one term (singleton event) or two terms
/// (doubleton event). Terms are held in canonical (sorted) order.
struct EventSet {
  std::vector<Term> terms;
  std::vector<std::string> doc_ids;  // sorted

  std::size_t cardinality() const noexcept { return doc_ids.size(); }
  friend bool operator==(const EventSet&, const EventSet&) = default;
};

/// Positional inverted index over a corpus. Immutable once built.
class EventSpace {
 public:
  EventSpace() = default;

  std::uint64_t total_docs() const noexcept { return doc_ids_.size(); }
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  const std::map<std::string, std::vector<Posting>, std::less<>>& postings()
      const noexcept {
    return postings_;
  }
  /// Empty list for tokens outside the vocabulary.
  const std::vector<Posting>& postings(std::string_view token) const;
  std::vector<std::string> vocabulary() const;
  std::size_t vocabulary_size() const noexcept { return postings_.size(); }

  /// Sorted indices of documents matching `term`.
  std::vector<std::uint32_t> match(const Term& term) const;

  void save(const std::filesystem::path& path) const;
  static EventSpace load(const std::filesystem::path& path);
  std::string to_json() const;
  static EventSpace from_json(std::string_view json);

  friend bool operator==(const EventSpace&, const EventSpace&) = default;

 private:
  friend EventSpace build_index(const Corpus& corpus);

  std::vector<std::string> doc_ids_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

EventSpace build_index(const Corpus& corpus);

/// Per-document relevance by direct scan of the token stream.
bool relevance(const Document& doc, const Term& term);

EventSet singleton_event(const EventSpace& space, const Term& term);
/// Throws DegeneratePairError when the terms are equal.
EventSet doubleton_event(const EventSpace& space, const Term& tx, const Term& ty);

/// |Ω_x| / |Ω|. Throws EmptySpaceError when the space has no documents.
double probability_singleton(const EventSpace& space, const Term& term);
/// |Ω_x ∩ Ω_y| / |Ω|.
double probability_doubleton(const EventSpace& space, const Term& tx, const Term& ty);

/// True iff no document matches both terms.
bool clusters_disjoint(const EventSpace& space, const Term& tx, const Term& ty);

}  // namespace snmine
