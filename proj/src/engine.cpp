#include "snmine/engine.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "snmine/error.hpp"

namespace snmine {
namespace {

const std::vector<Posting> kNoPostings;

std::vector<std::uint32_t> intersect(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<std::uint32_t> docs_of(const std::vector<Posting>& list) {
  std::vector<std::uint32_t> docs;
  docs.reserve(list.size());
  for (const auto& p : list) docs.push_back(p.doc);
  return docs;
}

const Posting* find_posting(const std::vector<Posting>& list, std::uint32_t doc) {
  auto it = std::lower_bound(
      list.begin(), list.end(), doc,
      [](const Posting& p, std::uint32_t d) { return p.doc < d; });
  return it != list.end() && it->doc == doc ? &*it : nullptr;
}

bool has_position(const Posting& p, std::uint32_t pos) {
  return std::binary_search(p.positions.begin(), p.positions.end(), pos);
}

EventSet make_event(const EventSpace& space, std::vector<Term> terms,
                    const std::vector<std::uint32_t>& docs) {
  EventSet ev;
  std::sort(terms.begin(), terms.end());
  ev.terms = std::move(terms);
  ev.doc_ids.reserve(docs.size());
  for (auto d : docs) ev.doc_ids.push_back(space.doc_ids()[d]);
  return ev;
}

void require_distinct(const Term& tx, const Term& ty) {
  if (tx == ty) {
    throw DegeneratePairError("doubleton needs two distinct terms, got '" +
                              tx.text() + "' twice");
  }
}

}  // namespace

std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::phrase ? "phrase" : "conjunctive";
}

MatchMode parse_match_mode(std::string_view text) {
  if (text == "phrase" || text == "quoted") return MatchMode::phrase;
  if (text == "conjunctive" || text == "unquoted") return MatchMode::conjunctive;
  throw ConfigError("unknown query mode: " + std::string(text));
}

Term::Term(std::string raw, MatchMode mode)
    : raw_(std::move(raw)), tokens_(tokenize_words(raw_)), mode_(mode) {
  if (tokens_.empty()) {
    throw InvalidTermError("term has no tokens: '" + raw_ + "'");
  }
}

Term::Term(std::vector<std::string> tokens, MatchMode mode) : mode_(mode) {
  for (const auto& t : tokens) {
    for (auto& w : tokenize_words(t)) tokens_.push_back(std::move(w));
  }
  if (tokens_.empty()) throw InvalidTermError("term has no tokens");
  raw_ = text();
}

std::string Term::text() const {
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Term Term::with_mode(MatchMode mode) const {
  Term copy = *this;
  copy.mode_ = mode;
  return copy;
}

const std::vector<Posting>& EventSpace::postings(std::string_view token) const {
  auto it = postings_.find(token);
  return it == postings_.end() ? kNoPostings : it->second;
}

std::vector<std::string> EventSpace::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(postings_.size());
  for (const auto& [token, _] : postings_) out.push_back(token);
  return out;
}

std::vector<std::uint32_t> EventSpace::match(const Term& term) const {
  const auto& tokens = term.tokens();
  if (tokens.empty()) throw InvalidTermError("term has no tokens");

  // Rarest token first keeps the intersection small.
  std::vector<const std::vector<Posting>*> lists;
  for (const auto& t : tokens) lists.push_back(&postings(t));
  std::vector<const std::vector<Posting>*> by_size = lists;
  std::sort(by_size.begin(), by_size.end(),
            [](auto* a, auto* b) { return a->size() < b->size(); });
  std::vector<std::uint32_t> docs = docs_of(*by_size.front());
  for (std::size_t i = 1; i < by_size.size() && !docs.empty(); ++i) {
    docs = intersect(docs, docs_of(*by_size[i]));
  }
  if (term.mode() == MatchMode::conjunctive || tokens.size() == 1) return docs;

  std::vector<std::uint32_t> out;
  for (auto d : docs) {
    std::vector<const Posting*> per_token;
    per_token.reserve(lists.size());
    for (auto* l : lists) per_token.push_back(find_posting(*l, d));
    for (auto start : per_token.front()->positions) {
      bool ok = true;
      for (std::size_t k = 1; k < per_token.size() && ok; ++k) {
        ok = has_position(*per_token[k], start + static_cast<std::uint32_t>(k));
      }
      if (ok) {
        out.push_back(d);
        break;
      }
    }
  }
  return out;
}

EventSpace build_index(const Corpus& corpus) {
  EventSpace space;
  const auto& docs = corpus.documents();
  space.doc_ids_.reserve(docs.size());
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    space.doc_ids_.push_back(docs[d].doc_id);
    for (const auto& tok : docs[d].tokens) {
      auto& list = space.postings_[tok.text];
      if (list.empty() || list.back().doc != d) list.push_back({d, {}});
      list.back().positions.push_back(tok.position);
    }
  }
  return space;
}

bool relevance(const Document& doc, const Term& term) {
  const auto& want = term.tokens();
  const auto& have = doc.tokens;
  if (term.mode() == MatchMode::conjunctive) {
    return std::all_of(want.begin(), want.end(), [&](const std::string& w) {
      return std::any_of(have.begin(), have.end(),
                         [&](const Token& t) { return t.text == w; });
    });
  }
  if (want.size() > have.size()) return false;
  for (std::size_t i = 0; i + want.size() <= have.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < want.size() && ok; ++k) {
      ok = have[i + k].text == want[k];
    }
    if (ok) return true;
  }
  return false;
}

EventSet singleton_event(const EventSpace& space, const Term& term) {
  return make_event(space, {term}, space.match(term));
}

EventSet doubleton_event(const EventSpace& space, const Term& tx, const Term& ty) {
  require_distinct(tx, ty);
  return make_event(space, {tx, ty}, intersect(space.match(tx), space.match(ty)));
}

double probability_singleton(const EventSpace& space, const Term& term) {
  if (space.total_docs() == 0) {
    throw EmptySpaceError("probability undefined over an empty event space");
  }
  return static_cast<double>(space.match(term).size()) /
         static_cast<double>(space.total_docs());
}

double probability_doubleton(const EventSpace& space, const Term& tx, const Term& ty) {
  if (space.total_docs() == 0) {
    throw EmptySpaceError("probability undefined over an empty event space");
  }
  return static_cast<double>(doubleton_event(space, tx, ty).cardinality()) /
         static_cast<double>(space.total_docs());
}

bool clusters_disjoint(const EventSpace& space, const Term& tx, const Term& ty) {
  return doubleton_event(space, tx, ty).cardinality() == 0;
}

// Snapshot layout:
//   {"format": "snmine-index", "version": 1, "total_docs": N,
//    "doc_ids": [...], "postings": {token: [[doc_index, [pos, ...]], ...]}}
std::string EventSpace::to_json() const {
  nlohmann::json j;
  j["format"] = "snmine-index";
  j["version"] = 1;
  j["total_docs"] = total_docs();
  j["doc_ids"] = doc_ids_;
  auto& postings = j["postings"] = nlohmann::json::object();
  for (const auto& [token, list] : postings_) {
    auto arr = nlohmann::json::array();
    for (const auto& p : list) arr.push_back({p.doc, p.positions});
    postings[token] = std::move(arr);
  }
  return j.dump();
}

EventSpace EventSpace::from_json(std::string_view text) {
  EventSpace space;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "snmine-index") {
      throw FormatError("not an index snapshot");
    }
    space.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
    if (j.at("total_docs").get<std::uint64_t>() != space.doc_ids_.size()) {
      throw FormatError("snapshot total_docs does not match doc_ids");
    }
    if (!std::is_sorted(space.doc_ids_.begin(), space.doc_ids_.end()) ||
        std::adjacent_find(space.doc_ids_.begin(), space.doc_ids_.end()) !=
            space.doc_ids_.end()) {
      throw FormatError("snapshot doc_ids must be sorted and unique");
    }
    for (const auto& [token, arr] : j.at("postings").items()) {
      auto& list = space.postings_[token];
      for (const auto& entry : arr) {
        Posting p{entry.at(0).get<std::uint32_t>(),
                  entry.at(1).get<std::vector<std::uint32_t>>()};
        if (p.doc >= space.doc_ids_.size() ||
            (!list.empty() && list.back().doc >= p.doc) ||
            p.positions.empty() ||
            !std::is_sorted(p.positions.begin(), p.positions.end())) {
          throw FormatError("snapshot posting list for '" + token +
                            "' is out of order or out of range");
        }
        list.push_back(std::move(p));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed index snapshot: ") + e.what());
  }
  return space;
}

void EventSpace::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write snapshot: " + path.string());
  out << to_json() << '\n';
  if (!out) throw IoError("failed writing snapshot: " + path.string());
}

EventSpace EventSpace::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read snapshot: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace snmine
