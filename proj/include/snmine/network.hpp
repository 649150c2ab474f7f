#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snmine/engine.hpp"
#include "snmine/hitsource.hpp"
#include "snmine/measures.hpp"

namespace snmine {

struct Actor {
  std::string actor_id;
  Term name;
  std::vector<Term> attributes;
};

/// Parses `[{"id": ..., "name": ..., "attributes": [...]}, ...]`. Names and
/// attributes become phrase-mode terms. Throws FormatError / DuplicateIdError.
std::vector<Actor> parse_actors(const std::string& json);
std::vector<Actor> load_actors(const std::filesystem::path& path);

/// A dyad and how strongly its two actors are tied.
struct Relation {
  std::pair<std::string, std::string> pair;  // actor ids, first < second
  CountTriple counts;                        // n_x belongs to pair.first
  std::map<MeasureKind, std::optional<double>> strengths;
  double r_p = 0.0;
  std::vector<Term> shared_attributes;
};

struct NetworkConfig {
  MeasureKind measure = MeasureKind::jaccard;
  double threshold = 0.0;
  MatchMode mode = MatchMode::phrase;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct Vertex {
  std::string id;
  std::string actor_id;
  std::uint64_t hit_count = 0;
  std::optional<double> probability;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  std::string source;  // vertex ids, source < target
  std::string target;
  double weight = 0.0;
  CountTriple counts;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.source == b.source && a.target == b.target && a.weight == b.weight &&
           a.counts.n_x == b.counts.n_x && a.counts.n_y == b.counts.n_y &&
           a.counts.n_xy == b.counts.n_xy;
  }
};

/// Vertices and edges plus the actor -> vertex bijection (gamma1) and the
/// relation -> edge map (gamma2). `relations` holds every dyad, including
/// those below the threshold; it is not part of the exported graph.
struct SocialNetwork {
  NetworkConfig config;
  std::vector<Vertex> vertices;  // sorted by id
  std::vector<Edge> edges;       // sorted by (source, target)
  std::map<std::string, std::string> gamma1;
  std::map<std::pair<std::string, std::string>, std::size_t> gamma2;
  std::vector<Relation> relations;

  const Vertex& vertex_of(const std::string& actor_id) const;

  /// Compares the exported graph: config, vertices, edges, gamma1, gamma2.
  friend bool operator==(const SocialNetwork& a, const SocialNetwork& b) {
    return a.config == b.config && a.vertices == b.vertices && a.edges == b.edges &&
           a.gamma1 == b.gamma1 && a.gamma2 == b.gamma2;
  }
};

/// Counts both names and their co-occurrence in `source` under `mode` and
/// evaluates every measure. r_p is the value of `kind`, which must be one of
/// the normalized measures. Argument order does not matter.
Relation relation_strength(HitSource& source, const Actor& a_k, const Actor& a_l,
                           MeasureKind kind, MatchMode mode);

/// Attributes held by both actors that co-occur with each actor's name in
/// at least one document.
std::vector<Term> shared_attributes(const EventSpace& space, const Actor& a_k,
                                    const Actor& a_l);

/// Builds the network over all C(n, 2) dyads; an edge exists iff
/// r_p > config.threshold.
SocialNetwork build_network(std::vector<Actor> actors, HitSource& source,
                            const NetworkConfig& config = {});

enum class GraphFormat { json, graphml, dot };
GraphFormat parse_graph_format(std::string_view name);

std::string render_graph(const SocialNetwork& net, GraphFormat format);
void export_graph(const SocialNetwork& net, GraphFormat format,
                  const std::filesystem::path& path);

/// Inverse of render_graph(net, GraphFormat::json).
SocialNetwork network_from_json(const std::string& json);

}  // namespace snmine
