#include "snmine/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snmine/error.hpp"

namespace snmine {
namespace {

using nlohmann::json;

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string vertex_id(std::size_t index, std::size_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string digits = std::to_string(index);
  return "v" + std::string(width - digits.size(), '0') + digits;
}

// Co-occurrence of two terms; a term co-occurs with itself wherever it occurs.
std::uint64_t cooccurrence(HitSource& source, const Term& a, const Term& b) {
  return a == b ? source.count(a) : source.count(a, b);
}

Relation make_relation(const Actor& first, const Actor& second, CountTriple counts,
                       MeasureKind kind) {
  Relation rel;
  rel.pair = {first.actor_id, second.actor_id};
  counts.validate();
  rel.counts = counts;
  for (auto k : kAllMeasures) {
    if (k == MeasureKind::pmi && (!counts.total || *counts.total == 0)) {
      rel.strengths[k] = std::nullopt;
    } else {
      rel.strengths[k] = strength(k, counts);
    }
  }
  rel.r_p = rel.strengths.at(kind).value_or(0.0);
  return rel;
}

void require_edge_measure(MeasureKind kind) {
  if (!is_normalized(kind)) {
    throw ConfigError("pmi is unbounded and cannot weight edges; use "
                      "jaccard, dice, overlap or cosine");
  }
}

}  // namespace

std::vector<Actor> parse_actors(const std::string& text) {
  std::vector<Actor> actors;
  std::set<std::string> ids;
  try {
    const json j = json::parse(text);
    if (!j.is_array()) throw FormatError("actors file must be a JSON array");
    for (const auto& entry : j) {
      Actor a{entry.at("id").get<std::string>(),
              Term(entry.at("name").get<std::string>(), MatchMode::phrase),
              {}};
      if (auto it = entry.find("attributes"); it != entry.end()) {
        for (const auto& attr : *it) {
          a.attributes.emplace_back(attr.get<std::string>(), MatchMode::phrase);
        }
      }
      if (!ids.insert(a.actor_id).second) {
        throw DuplicateIdError("duplicate actor id: " + a.actor_id);
      }
      actors.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed actors file: ") + e.what());
  }
  return actors;
}

std::vector<Actor> load_actors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read actors file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_actors(buf.str());
}

const Vertex& SocialNetwork::vertex_of(const std::string& actor_id) const {
  const std::string& id = gamma1.at(actor_id);
  auto it = std::lower_bound(vertices.begin(), vertices.end(), id,
                             [](const Vertex& v, const std::string& k) { return v.id < k; });
  return *it;
}

Relation relation_strength(HitSource& source, const Actor& a_k, const Actor& a_l,
                           MeasureKind kind, MatchMode mode) {
  if (a_k.actor_id == a_l.actor_id) {
    throw DegeneratePairError("a dyad needs two distinct actors, got '" +
                              a_k.actor_id + "' twice");
  }
  require_edge_measure(kind);
  Actor first = a_k.actor_id < a_l.actor_id ? a_k : a_l;
  Actor second = a_k.actor_id < a_l.actor_id ? a_l : a_k;
  first.name = first.name.with_mode(mode);
  second.name = second.name.with_mode(mode);
  CountTriple counts{source.count(first.name), source.count(second.name),
                     cooccurrence(source, first.name, second.name), source.total()};
  Relation rel = make_relation(first, second, counts, kind);
  if (const EventSpace* space = source.event_space()) {
    rel.shared_attributes = shared_attributes(*space, first, second);
  }
  return rel;
}

std::vector<Term> shared_attributes(const EventSpace& space, const Actor& a_k,
                                    const Actor& a_l) {
  LocalSource local(std::shared_ptr<const EventSpace>(&space, [](const EventSpace*) {}));
  std::set<Term> theirs(a_l.attributes.begin(), a_l.attributes.end());
  std::set<Term> out;
  for (const auto& attr : a_k.attributes) {
    if (!theirs.contains(attr)) continue;
    if (cooccurrence(local, attr, a_k.name) > 0 &&
        cooccurrence(local, attr, a_l.name) > 0) {
      out.insert(attr);
    }
  }
  return {out.begin(), out.end()};
}

SocialNetwork build_network(std::vector<Actor> actors, HitSource& source,
                            const NetworkConfig& config) {
  if (actors.empty()) throw ConfigError("a network needs at least one actor");
  require_edge_measure(config.measure);
  if (!(config.threshold >= 0.0) || !std::isfinite(config.threshold)) {
    throw ConfigError("threshold must be a finite number >= 0");
  }
  std::sort(actors.begin(), actors.end(),
            [](const Actor& a, const Actor& b) { return a.actor_id < b.actor_id; });
  for (std::size_t i = 1; i < actors.size(); ++i) {
    if (actors[i].actor_id == actors[i - 1].actor_id) {
      throw DuplicateIdError("duplicate actor id: " + actors[i].actor_id);
    }
  }
  for (auto& a : actors) a.name = a.name.with_mode(config.mode);

  SocialNetwork net;
  net.config = config;
  const auto total = source.total();
  std::vector<std::uint64_t> hits;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    Vertex v{vertex_id(i, actors.size()), actors[i].actor_id, source.count(actors[i].name),
             std::nullopt};
    if (total && *total > 0) {
      v.probability = static_cast<double>(v.hit_count) / static_cast<double>(*total);
    }
    hits.push_back(v.hit_count);
    net.gamma1[v.actor_id] = v.id;
    net.vertices.push_back(std::move(v));
  }

  const EventSpace* space = source.event_space();
  for (std::size_t i = 0; i < actors.size(); ++i) {
    for (std::size_t j = i + 1; j < actors.size(); ++j) {
      CountTriple counts{hits[i], hits[j],
                         cooccurrence(source, actors[i].name, actors[j].name), total};
      Relation rel = make_relation(actors[i], actors[j], counts, config.measure);
      if (space) rel.shared_attributes = shared_attributes(*space, actors[i], actors[j]);
      if (rel.r_p > config.threshold) {
        net.gamma2[rel.pair] = net.edges.size();
        net.edges.push_back({net.vertices[i].id, net.vertices[j].id, rel.r_p, rel.counts});
      }
      net.relations.push_back(std::move(rel));
    }
  }
  return net;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "json") return GraphFormat::json;
  if (name == "graphml") return GraphFormat::graphml;
  if (name == "dot") return GraphFormat::dot;
  throw ConfigError("unknown graph format: " + std::string(name));
}

std::string render_graph(const SocialNetwork& net, GraphFormat format) {
  std::ostringstream out;
  switch (format) {
    case GraphFormat::json: {
      json j;
      j["config"] = {{"measure", std::string(to_string(net.config.measure))},
                     {"threshold", net.config.threshold},
                     {"mode", std::string(to_string(net.config.mode))}};
      auto& vs = j["vertices"] = json::array();
      for (const auto& v : net.vertices) {
        vs.push_back({{"id", v.id},
                      {"actor_id", v.actor_id},
                      {"hit_count", v.hit_count},
                      {"probability", v.probability ? json(*v.probability) : json(nullptr)}});
      }
      auto& es = j["edges"] = json::array();
      for (const auto& e : net.edges) {
        es.push_back({{"source", e.source},
                      {"target", e.target},
                      {"weight", e.weight},
                      {"counts",
                       {{"nx", e.counts.n_x}, {"ny", e.counts.n_y}, {"nxy", e.counts.n_xy}}}});
      }
      out << j.dump(2) << '\n';
      break;
    }
    case GraphFormat::graphml: {
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
             "  <key id=\"actor_id\" for=\"node\" attr.name=\"actor_id\" attr.type=\"string\"/>\n"
             "  <key id=\"hit_count\" for=\"node\" attr.name=\"hit_count\" attr.type=\"long\"/>\n"
             "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
             "  <graph id=\"SN\" edgedefault=\"undirected\">\n";
      for (const auto& v : net.vertices) {
        out << "    <node id=\"" << xml_escape(v.id) << "\">"
            << "<data key=\"actor_id\">" << xml_escape(v.actor_id) << "</data>"
            << "<data key=\"hit_count\">" << v.hit_count << "</data></node>\n";
      }
      for (const auto& e : net.edges) {
        out << "    <edge source=\"" << xml_escape(e.source) << "\" target=\""
            << xml_escape(e.target) << "\"><data key=\"weight\">" << shortest(e.weight)
            << "</data></edge>\n";
      }
      out << "  </graph>\n</graphml>\n";
      break;
    }
    case GraphFormat::dot: {
      out << "graph SN {\n";
      for (const auto& v : net.vertices) {
        out << "  " << dot_quote(v.id) << " [label=" << dot_quote(v.actor_id) << "];\n";
      }
      for (const auto& e : net.edges) {
        out << "  " << dot_quote(e.source) << " -- " << dot_quote(e.target)
            << " [label=\"" << fixed6(e.weight) << "\"];\n";
      }
      out << "}\n";
      break;
    }
  }
  return out.str();
}

void export_graph(const SocialNetwork& net, GraphFormat format,
                  const std::filesystem::path& path) {
  const std::string text = render_graph(net, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write graph file: " + path.string());
  out << text;
  if (!out.flush()) throw IoError("failed writing graph file: " + path.string());
}

SocialNetwork network_from_json(const std::string& text) {
  SocialNetwork net;
  try {
    const json j = json::parse(text);
    const auto& cfg = j.at("config");
    net.config.measure = parse_measure(cfg.at("measure").get<std::string>());
    net.config.threshold = cfg.at("threshold").get<double>();
    net.config.mode = parse_match_mode(cfg.at("mode").get<std::string>());
    std::map<std::string, std::string> actor_of;
    for (const auto& v : j.at("vertices")) {
      Vertex vx{v.at("id").get<std::string>(), v.at("actor_id").get<std::string>(),
                v.at("hit_count").get<std::uint64_t>(), std::nullopt};
      if (!v.at("probability").is_null()) vx.probability = v.at("probability").get<double>();
      if (!net.gamma1.emplace(vx.actor_id, vx.id).second) {
        throw DuplicateIdError("duplicate actor id: " + vx.actor_id);
      }
      actor_of[vx.id] = vx.actor_id;
      net.vertices.push_back(std::move(vx));
    }
    for (const auto& e : j.at("edges")) {
      const auto& c = e.at("counts");
      Edge edge{e.at("source").get<std::string>(), e.at("target").get<std::string>(),
                e.at("weight").get<double>(),
                CountTriple{c.at("nx").get<std::uint64_t>(), c.at("ny").get<std::uint64_t>(),
                            c.at("nxy").get<std::uint64_t>(), std::nullopt}};
      net.gamma2[{actor_of.at(edge.source), actor_of.at(edge.target)}] = net.edges.size();
      net.edges.push_back(std::move(edge));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed network JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("network JSON references an unknown vertex: ") + e.what());
  }
  return net;
}

}  // namespace snmine
