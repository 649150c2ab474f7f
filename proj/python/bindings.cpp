#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "snmine/behavior.hpp"
#include "snmine/error.hpp"
#include "snmine/network.hpp"

namespace py = pybind11;
using namespace snmine;

namespace {

std::vector<std::pair<std::string, std::uint32_t>> py_tokenize(const std::string& text) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  for (auto& t : tokenize(text)) out.emplace_back(std::move(t.text), t.position);
  return out;
}

}  // namespace

PYBIND11_MODULE(_snmine, m) {
  m.doc() = "Co-occurrence statistics and social network extraction";

  auto base = py::register_exception<Error>(m, "SnmineError");
  py::register_exception<IngestError>(m, "IngestError", base);
  py::register_exception<InvalidUtf8Error>(m, "InvalidUtf8Error", base);
  py::register_exception<InvalidTermError>(m, "InvalidTermError", base);
  py::register_exception<DegeneratePairError>(m, "DegeneratePairError", base);
  py::register_exception<EmptySpaceError>(m, "EmptySpaceError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<DuplicateIdError>(m, "DuplicateIdError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<FormatError>(m, "FormatError", base);
  py::register_exception<IoError>(m, "IoError", base);
  // subclasses after their base: later registrations are tried first
  auto source = py::register_exception<SourceError>(m, "SourceError", base);
  py::register_exception<MissingFixtureError>(m, "MissingFixtureError", source);
  py::register_exception<RetryableError>(m, "RetryableError", source);
  py::register_exception<RateLimitError>(m, "RateLimitError", source);
  py::register_exception<ProtocolError>(m, "ProtocolError", source);

  py::enum_<MatchMode>(m, "MatchMode")
      .value("phrase", MatchMode::phrase)
      .value("conjunctive", MatchMode::conjunctive);
  py::enum_<MeasureKind>(m, "MeasureKind")
      .value("jaccard", MeasureKind::jaccard)
      .value("dice", MeasureKind::dice)
      .value("overlap", MeasureKind::overlap)
      .value("cosine", MeasureKind::cosine)
      .value("pmi", MeasureKind::pmi);

  m.def("tokenize", &py_tokenize, py::arg("text"));

  py::class_<Term>(m, "Term")
      .def(py::init<std::string, MatchMode>(), py::arg("raw"),
           py::arg("mode") = MatchMode::phrase)
      .def_property_readonly("raw", &Term::raw)
      .def_property_readonly("tokens", &Term::tokens)
      .def_property_readonly("mode", &Term::mode)
      .def_property_readonly("text", &Term::text)
      .def("__eq__", [](const Term& a, const Term& b) { return a == b; })
      .def("__repr__", [](const Term& t) {
        return "Term('" + t.text() + "', " + std::string(to_string(t.mode())) + ")";
      });

  py::class_<Corpus>(m, "Corpus")
      .def_static("from_texts", &Corpus::from_texts, py::arg("texts"),
                  py::arg("source") = "memory")
      .def("__len__", &Corpus::size)
      .def_property_readonly("doc_ids", [](const Corpus& c) {
        std::vector<std::string> ids;
        for (const auto& d : c.documents()) ids.push_back(d.doc_id);
        return ids;
      });
  m.def("ingest", &ingest, py::arg("path"));

  py::class_<EventSpace, std::shared_ptr<EventSpace>>(m, "EventSpace")
      .def_property_readonly("total_docs", &EventSpace::total_docs)
      .def_property_readonly("vocabulary", &EventSpace::vocabulary)
      .def("save", &EventSpace::save)
      .def_static("load", [](const std::filesystem::path& p) {
        return std::make_shared<EventSpace>(EventSpace::load(p));
      });
  m.def("build_index", [](const Corpus& c) { return std::make_shared<EventSpace>(build_index(c)); });
  m.def("singleton_event", [](const EventSpace& s, const Term& t) {
    return singleton_event(s, t).doc_ids;
  });
  m.def("doubleton_event", [](const EventSpace& s, const Term& x, const Term& y) {
    return doubleton_event(s, x, y).doc_ids;
  });
  m.def("probability_singleton", &probability_singleton);
  m.def("probability_doubleton", &probability_doubleton);
  m.def("clusters_disjoint", &clusters_disjoint);

  py::class_<CountTriple>(m, "CountTriple")
      .def(py::init([](std::uint64_t nx, std::uint64_t ny, std::uint64_t nxy,
                       std::optional<std::uint64_t> total) {
             return CountTriple{nx, ny, nxy, total};
           }),
           py::arg("n_x"), py::arg("n_y"), py::arg("n_xy"), py::arg("total") = py::none())
      .def_readonly("n_x", &CountTriple::n_x)
      .def_readonly("n_y", &CountTriple::n_y)
      .def_readonly("n_xy", &CountTriple::n_xy)
      .def_readonly("total", &CountTriple::total);
  m.def("jaccard", &jaccard);
  m.def("dice", &dice);
  m.def("overlap", &overlap);
  m.def("cosine", &cosine);
  m.def("pmi", &pmi);
  m.def("strength", &strength);

  m.def("canonical_query", [](const std::vector<Term>& terms) { return canonical_query(terms); });

  py::class_<HitSource, std::shared_ptr<HitSource>>(m, "HitSource")
      .def("count", [](HitSource& s, const Term& t) { return s.count(t); })
      .def("count", [](HitSource& s, const Term& x, const Term& y) { return s.count(x, y); })
      .def("total", &HitSource::total);
  py::class_<LocalSource, HitSource, std::shared_ptr<LocalSource>>(m, "LocalSource")
      .def(py::init([](std::shared_ptr<EventSpace> s) {
        return std::make_shared<LocalSource>(std::shared_ptr<const EventSpace>(std::move(s)));
      }));
  py::class_<FixtureSource, HitSource, std::shared_ptr<FixtureSource>>(m, "FixtureSource")
      .def_static("from_file", [](const std::filesystem::path& p) {
        return std::make_shared<FixtureSource>(FixtureSource::from_file(p));
      });

  py::class_<Actor>(m, "Actor")
      .def(py::init([](std::string id, const std::string& name,
                       const std::vector<std::string>& attributes) {
             Actor a{std::move(id), Term(name), {}};
             for (const auto& s : attributes) a.attributes.emplace_back(s);
             return a;
           }),
           py::arg("actor_id"), py::arg("name"), py::arg("attributes") = std::vector<std::string>{})
      .def_readonly("actor_id", &Actor::actor_id)
      .def_readonly("name", &Actor::name);

  py::class_<SocialNetwork>(m, "SocialNetwork")
      .def_property_readonly("vertices", [](const SocialNetwork& n) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : n.vertices) out.emplace_back(v.id, v.actor_id);
        return out;
      })
      .def_property_readonly("edges", [](const SocialNetwork& n) {
        std::vector<std::tuple<std::string, std::string, double>> out;
        for (const auto& e : n.edges) out.emplace_back(e.source, e.target, e.weight);
        return out;
      })
      .def_readonly("gamma1", &SocialNetwork::gamma1)
      .def("render", [](const SocialNetwork& n, const std::string& format) {
        return render_graph(n, parse_graph_format(format));
      }, py::arg("format") = "json");
  m.def("build_network",
        [](std::vector<Actor> actors, HitSource& source, MeasureKind measure, double threshold,
           MatchMode mode) {
          return build_network(std::move(actors), source, {measure, threshold, mode});
        },
        py::arg("actors"), py::arg("source"), py::arg("measure") = MeasureKind::jaccard,
        py::arg("threshold") = 0.0, py::arg("mode") = MatchMode::phrase);

  m.def("pair_behavior", [](HitSource& s, const Term& x, const Term& y) {
    return to_json(pair_behavior(s, x, y));
  });
  m.def("cluster_behavior", [](HitSource& s, const Term& t, const std::vector<Term>& cands) {
    return to_json(cluster_behavior(s, t, cands));
  }, py::arg("source"), py::arg("term"), py::arg("candidates") = std::vector<Term>{});
  m.def("mode_contrast", [](HitSource& s, const std::string& name) {
    auto c = mode_contrast(s, tokenize_words(name));
    return py::make_tuple(c.conjunctive_count, c.phrase_count, c.ratio);
  });

  py::class_<AssociationRule>(m, "AssociationRule")
      .def_readonly("antecedent", &AssociationRule::antecedent)
      .def_readonly("consequent", &AssociationRule::consequent)
      .def_readonly("support", &AssociationRule::support)
      .def_readonly("confidence", &AssociationRule::confidence)
      .def_readonly("holds", &AssociationRule::holds);
  m.def("transactions_from_corpus", [](const EventSpace& s, const std::vector<Term>& attrs) {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (auto& t : transactions_from_corpus(s, attrs)) out.emplace_back(t.doc_id, t.items);
    return out;
  });
  m.def("mine_rules",
        [](const std::vector<std::vector<std::string>>& transactions, double minsup,
           double minconf, std::size_t max_itemset_size) {
          std::vector<Transaction> ts;
          for (std::size_t i = 0; i < transactions.size(); ++i) {
            auto items = transactions[i];
            std::sort(items.begin(), items.end());
            items.erase(std::unique(items.begin(), items.end()), items.end());
            ts.push_back({std::to_string(i), std::move(items)});
          }
          return mine_rules(ts, {minsup, minconf, max_itemset_size});
        },
        py::arg("transactions"), py::arg("minsup") = 0.1, py::arg("minconf") = 0.5,
        py::arg("max_itemset_size") = 2);
}
