#include "snmine/cli.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "snmine/behavior.hpp"
#include "snmine/error.hpp"
#include "snmine/hitsource.hpp"
#include "snmine/network.hpp"

namespace snmine::cli {
namespace {

struct RunConfig {
  std::string source_kind = "local";
  std::string corpus;
  std::string index;
  std::string fixture;
  std::string web_config;
  std::optional<std::uint64_t> total;
  std::string measure = "jaccard";
  double threshold = 0.0;
  std::string mode = "phrase";
  std::string format;
  std::string out;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + cfg.out);
  file << text;
  if (!file.flush()) throw IoError("failed writing " + cfg.out);
}

std::shared_ptr<const EventSpace> local_space(const RunConfig& cfg) {
  if (!cfg.index.empty() && !cfg.corpus.empty()) {
    throw UsageError("give either --index or --corpus, not both");
  }
  if (!cfg.index.empty()) return std::make_shared<const EventSpace>(EventSpace::load(cfg.index));
  if (!cfg.corpus.empty()) return std::make_shared<const EventSpace>(build_index(ingest(cfg.corpus)));
  throw UsageError("the local source needs --index or --corpus");
}

std::unique_ptr<HitSource> make_source(const RunConfig& cfg) {
  if (cfg.source_kind == "local") return std::make_unique<LocalSource>(local_space(cfg));
  if (cfg.source_kind == "fixture") {
    if (cfg.fixture.empty()) throw UsageError("--source fixture needs --fixture");
    CountFile file = CountFile::load(cfg.fixture);
    if (cfg.total) file.total = cfg.total;
    return std::make_unique<FixtureSource>(std::move(file));
  }
  if (cfg.source_kind == "web") {
    if (cfg.web_config.empty()) throw UsageError("--source web needs --web-config");
    WebConfig web = WebConfig::load(cfg.web_config);
    if (cfg.total) web.total_estimate = cfg.total;
    return std::make_unique<WebSource>(std::move(web));
  }
  throw UsageError("unknown source kind: " + cfg.source_kind);
}

std::string report_format(const RunConfig& cfg) {
  const std::string f = cfg.format.empty() ? "text" : cfg.format;
  if (f != "text" && f != "json") throw UsageError("this command prints text or json, not " + f);
  return f;
}

int cmd_index(const RunConfig& cfg, const std::string& corpus_path, std::ostream& out) {
  const EventSpace space = build_index(ingest(corpus_path));
  if (!cfg.out.empty()) space.save(cfg.out);
  out << "indexed " << space.total_docs() << " documents\n"
      << "vocabulary " << space.vocabulary_size() << " tokens\n";
  return 0;
}

int cmd_query(const RunConfig& cfg, const std::vector<std::string>& terms, std::ostream& out) {
  if (terms.empty() || terms.size() > 2) {
    throw UsageError("query takes one or two terms (doubleton at most), got " +
                     std::to_string(terms.size()));
  }
  const MatchMode mode = parse_match_mode(cfg.mode);
  auto source = make_source(cfg);
  const Query q = terms.size() == 1 ? Query::single(Term(terms[0], mode))
                                    : Query::pair(Term(terms[0], mode), Term(terms[1], mode));
  const std::uint64_t n = source->count(q);
  std::optional<double> p;
  if (auto total = source->total(); total && *total > 0) {
    p = static_cast<double>(n) / static_cast<double>(*total);
  }
  if (report_format(cfg) == "json") {
    nlohmann::json j{{"query", q.canonical},
                     {"count", n},
                     {"probability", p ? nlohmann::json(*p) : nlohmann::json(nullptr)}};
    write_output(cfg, j.dump(2) + "\n", out);
  } else {
    std::string line = "query=" + q.canonical + " count=" + std::to_string(n);
    if (p) line += " probability=" + fixed6(*p);
    write_output(cfg, line + "\n", out);
  }
  return 0;
}

int cmd_network(const RunConfig& cfg, const std::string& actors_file, std::ostream& out,
                std::ostream& err) {
  const GraphFormat format = parse_graph_format(cfg.format.empty() ? "json" : cfg.format);
  NetworkConfig nc{parse_measure(cfg.measure), cfg.threshold, parse_match_mode(cfg.mode)};
  auto source = make_source(cfg);
  const SocialNetwork net = build_network(load_actors(actors_file), *source, nc);
  std::ostringstream summary;
  summary << "vertices=" << net.vertices.size() << " edges=" << net.edges.size()
          << " measure=" << to_string(nc.measure) << " threshold=" << fixed6(nc.threshold)
          << '\n';
  if (cfg.out.empty()) {
    out << render_graph(net, format);
    err << summary.str();
  } else {
    export_graph(net, format, cfg.out);
    out << summary.str();
  }
  return 0;
}

int cmd_behavior(const RunConfig& cfg, const std::vector<std::string>& names,
                 const std::vector<std::string>& candidates, bool contrast,
                 std::ostream& out) {
  if (names.empty() || names.size() > 2) {
    throw UsageError("behavior takes one name or a pair of names");
  }
  const std::string fmt = report_format(cfg);
  const MatchMode mode = parse_match_mode(cfg.mode);
  auto source = make_source(cfg);
  std::string text;
  if (contrast) {
    if (names.size() != 1) throw UsageError("--contrast takes a single name");
    const ModeContrast c = mode_contrast(*source, tokenize_words(names[0]));
    text = fmt == "json" ? to_json(c) : to_text(c);
  } else if (names.size() == 1) {
    std::vector<Term> cands;
    for (const auto& c : candidates) cands.emplace_back(c, mode);
    if (source->total() == std::optional<std::uint64_t>(0)) {
      throw EmptySpaceError("cluster behavior needs a non-empty event space");
    }
    const ClusterBehavior b = cluster_behavior(*source, Term(names[0], mode), cands);
    text = fmt == "json" ? to_json(b) : to_text(b);
  } else {
    const PairBehavior b = pair_behavior(*source, Term(names[0], mode), Term(names[1], mode));
    text = fmt == "json" ? to_json(b) : to_text(b);
  }
  write_output(cfg, text, out);
  return 0;
}

int cmd_rules(const RunConfig& cfg, const std::string& attributes_file, const RuleOptions& opts,
              bool all, std::ostream& out) {
  const std::string fmt = report_format(cfg);
  if (cfg.source_kind != "local") throw UsageError("rules need a local corpus or index");
  const auto space = local_space(cfg);
  std::vector<Term> attributes;
  try {
    for (const auto& a : nlohmann::json::parse(read_text(attributes_file))) {
      attributes.emplace_back(a.get<std::string>(), parse_match_mode(cfg.mode));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(attributes_file + ": expected a JSON array of strings: " + e.what());
  }
  const auto transactions = transactions_from_corpus(*space, attributes);
  auto rules = mine_rules(transactions, opts);
  if (!all) std::erase_if(rules, [](const AssociationRule& r) { return !r.holds; });
  write_output(cfg, fmt == "json" ? to_json(rules) : to_text(rules, false), out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extract social networks from co-occurrence statistics", "snmine"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--source", cfg.source_kind, "Hit source: local, fixture or web")
      ->check(CLI::IsMember({"local", "fixture", "web"}));
  app.add_option("--corpus", cfg.corpus, "Corpus directory of .txt files or a JSONL file");
  app.add_option("--index", cfg.index, "Index snapshot written by `index --out`");
  app.add_option("--fixture", cfg.fixture, "Recorded hit counts (JSON)");
  app.add_option("--web-config", cfg.web_config, "Web search adapter config (JSON)");
  app.add_option("--total", cfg.total, "Estimate of the total document count");
  app.add_option("--measure", cfg.measure, "jaccard, dice, overlap, cosine or pmi");
  app.add_option("--threshold", cfg.threshold, "Edge threshold; edges need r_p > threshold")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mode", cfg.mode, "Query mode: phrase or conjunctive");
  app.add_option("--format", cfg.format, "json, graphml, dot or text")
      ->check(CLI::IsMember({"json", "graphml", "dot", "text"}));
  app.add_option("--out", cfg.out, "Output file (stdout when omitted)");

  std::string corpus_path;
  auto* index = app.add_subcommand("index", "Index a corpus and optionally save a snapshot");
  index->add_option("corpus", corpus_path)->required();

  std::vector<std::string> terms;
  auto* query = app.add_subcommand("query", "Count one term or a pair of terms");
  query->add_option("terms", terms)->required();

  std::string actors_file;
  auto* network = app.add_subcommand("network", "Build and export the social network");
  network->add_option("actors", actors_file, "Actors JSON file")->required();

  std::vector<std::string> names;
  std::vector<std::string> candidates;
  bool contrast = false;
  auto* behavior = app.add_subcommand("behavior", "Report cluster or pair behavior");
  behavior->add_option("names", names)->required();
  behavior->add_option("--candidate", candidates, "Candidate co-occurring term (repeatable)");
  behavior->add_flag("--contrast", contrast, "Compare quoted and unquoted counts");

  std::string attributes_file;
  RuleOptions rule_opts;
  bool all_rules = false;
  auto* rules = app.add_subcommand("rules", "Mine association rules over attributes");
  rules->add_option("attributes", attributes_file, "JSON array of attribute terms")->required();
  rules->add_option("--minsup", rule_opts.minsup)->check(CLI::Range(0.0, 1.0));
  rules->add_option("--minconf", rule_opts.minconf)->check(CLI::Range(0.0, 1.0));
  rules->add_option("--max-itemset", rule_opts.max_itemset_size)->check(CLI::PositiveNumber);
  rules->add_flag("--all", all_rules, "Also list rules that do not hold");

  for (auto* sub : {index, query, network, behavior, rules}) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (index->parsed()) return cmd_index(cfg, corpus_path, out);
    if (query->parsed()) return cmd_query(cfg, terms, out);
    if (network->parsed()) return cmd_network(cfg, actors_file, out, err);
    if (behavior->parsed()) return cmd_behavior(cfg, names, candidates, contrast, out);
    if (rules->parsed()) return cmd_rules(cfg, attributes_file, rule_opts, all_rules, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace snmine::cli
