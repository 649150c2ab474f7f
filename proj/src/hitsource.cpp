#include "snmine/hitsource.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "snmine/error.hpp"

namespace snmine {
namespace {

using nlohmann::json;

std::string canonical_term(const std::vector<std::string>& tokens, MatchMode mode) {
  std::string body;
  for (const auto& t : tokens) {
    if (!body.empty()) body += ' ';
    body += t;
  }
  return mode == MatchMode::phrase ? "\"" + body + "\"" : body;
}

std::string join_canonical(std::vector<std::string> parts) {
  if (parts.empty() || parts.size() > 2) {
    throw ConfigError("a query holds one or two terms, got " +
                      std::to_string(parts.size()));
  }
  std::sort(parts.begin(), parts.end());
  return parts.size() == 1 ? parts[0] : parts[0] + " AND " + parts[1];
}

std::uint64_t parse_count(const json& value) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  if (value.is_string()) {
    std::string digits;
    for (char c : value.get<std::string>()) {
      if (c == ',') continue;
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument("non-numeric count");
      }
      digits += c;
    }
    if (!digits.empty()) return std::stoull(digits);
  }
  throw std::invalid_argument("count is not a nonnegative integer");
}

class SystemClock final : public Clock {
 public:
  steady_point now() override { return std::chrono::steady_clock::now(); }
  void sleep_until(steady_point when) override { std::this_thread::sleep_until(when); }
  utc_point utc_now() override { return std::chrono::system_clock::now(); }
};

}  // namespace

std::string canonical_query(std::span<const Term> terms) {
  std::vector<std::string> parts;
  for (const auto& t : terms) parts.push_back(canonical_term(t.tokens(), t.mode()));
  return join_canonical(std::move(parts));
}

std::string canonical_query(const std::vector<std::vector<std::string>>& terms,
                            MatchMode mode) {
  std::vector<Term> built;
  for (const auto& tokens : terms) built.emplace_back(tokens, mode);
  return canonical_query(built);
}

Query Query::single(const Term& term) {
  return Query{{term}, canonical_query(std::span<const Term>(&term, 1))};
}

Query Query::pair(const Term& tx, const Term& ty) {
  if (tx == ty) {
    throw DegeneratePairError("pair query needs two distinct terms, got '" +
                              tx.text() + "' twice");
  }
  std::vector<Term> terms{tx, ty};
  std::sort(terms.begin(), terms.end());
  std::string canonical = canonical_query(terms);
  return Query{std::move(terms), std::move(canonical)};
}

LocalSource::LocalSource(std::shared_ptr<const EventSpace> space)
    : space_(std::move(space)) {
  if (!space_) throw ConfigError("local source needs an event space");
}

LocalSource::LocalSource(EventSpace space)
    : space_(std::make_shared<const EventSpace>(std::move(space))) {}

std::uint64_t LocalSource::do_count(const Query& query) {
  if (query.terms.size() == 1) return space_->match(query.terms[0]).size();
  if (query.terms.size() == 2) {
    return doubleton_event(*space_, query.terms[0], query.terms[1]).cardinality();
  }
  throw ConfigError("a query holds one or two terms");
}

CountFile CountFile::parse(const std::string& text) {
  CountFile file;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw FormatError("count file must be a JSON object");
    if (auto it = j.find("total"); it != j.end() && !it->is_null()) {
      file.total = parse_count(*it);
    }
    if (auto it = j.find("counts"); it != j.end()) {
      for (const auto& [q, v] : it->items()) file.counts[q] = parse_count(v);
    } else {
      throw FormatError("count file has no \"counts\" object");
    }
    if (auto it = j.find("retrieved_at"); it != j.end() && !it->is_null()) {
      for (const auto& [q, v] : it->items()) {
        file.retrieved_at[q] = v.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed count file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed count file: ") + e.what());
  }
  return file;
}

CountFile CountFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read count file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string CountFile::dump() const {
  json j;
  j["total"] = total ? json(*total) : json(nullptr);
  j["counts"] = counts;
  j["retrieved_at"] = retrieved_at;
  return j.dump(2);
}

void CountFile::save(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << dump() << '\n';
    if (!out.flush()) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

FixtureSource FixtureSource::from_file(const std::filesystem::path& path) {
  return FixtureSource(CountFile::load(path));
}

std::uint64_t FixtureSource::do_count(const Query& query) {
  auto it = file_.counts.find(query.canonical);
  if (it == file_.counts.end()) throw MissingFixtureError(query.canonical);
  return it->second;
}

std::shared_ptr<Clock> system_clock() {
  static auto clock = std::make_shared<SystemClock>();
  return clock;
}

RateLimiter::RateLimiter(double requests_per_second, std::shared_ptr<Clock> clock)
    : clock_(std::move(clock)) {
  if (!(requests_per_second > 0.0)) {
    throw ConfigError("requests_per_second must be positive");
  }
  if (requests_per_second >= 1.0) {
    capacity_ = static_cast<std::size_t>(requests_per_second);
    window_ = std::chrono::seconds(1);
  } else {
    capacity_ = 1;
    window_ = std::chrono::nanoseconds(
        static_cast<std::int64_t>(std::ceil(1e9 / requests_per_second)));
  }
}

void RateLimiter::acquire() {
  auto now = clock_->now();
  while (!sent_.empty() && now - sent_.front() >= window_) sent_.pop_front();
  if (sent_.size() >= capacity_) {
    clock_->sleep_until(sent_.front() + window_);
    now = clock_->now();
    while (!sent_.empty() && now - sent_.front() >= window_) sent_.pop_front();
  }
  sent_.push_back(now);
}

WebConfig WebConfig::parse(const std::string& text) {
  WebConfig c;
  try {
    const json j = json::parse(text);
    c.url_template = j.at("url_template").get<std::string>();
    c.count_field = j.at("count_field").get<std::string>();
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
    c.cache_path = j.value("cache_path", std::string());
    c.max_retries = j.value("max_retries", c.max_retries);
    c.retry_backoff = std::chrono::milliseconds(
        j.value("retry_backoff_ms", static_cast<std::int64_t>(c.retry_backoff.count())));
    if (auto it = j.find("max_age_seconds"); it != j.end() && !it->is_null()) {
      c.max_age = std::chrono::seconds(it->get<std::int64_t>());
    }
    if (auto it = j.find("total"); it != j.end() && !it->is_null()) {
      c.total_estimate = it->get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed web config: ") + e.what());
  }
  if (c.url_template.find("{query}") == std::string::npos) {
    throw ConfigError("url_template must contain {query}");
  }
  if (c.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  return c;
}

WebConfig WebConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read web config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

WebSource::WebSource(WebConfig config, std::shared_ptr<HttpTransport> transport,
                     std::shared_ptr<Clock> clock)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : make_http_transport()),
      clock_(clock ? std::move(clock) : system_clock()),
      limiter_(config_.requests_per_second, clock_) {
  if (!config_.cache_path.empty() && std::filesystem::exists(config_.cache_path)) {
    cache_ = CountFile::load(config_.cache_path);
  }
  cache_.total = config_.total_estimate;
}

std::size_t WebSource::requests_made() const {
  std::lock_guard lock(mu_);
  return requests_;
}

CountFile WebSource::cache() const {
  std::lock_guard lock(mu_);
  return cache_;
}

bool WebSource::fresh(const std::string& canonical) const {
  if (!cache_.counts.contains(canonical)) return false;
  if (!config_.max_age) return true;
  auto at = cache_.retrieved_at.find(canonical);
  if (at == cache_.retrieved_at.end()) return false;
  auto when = parse_utc(at->second);
  return when && clock_->utc_now() - *when <= *config_.max_age;
}

std::string WebSource::build_url(const std::string& canonical) const {
  std::string url = config_.url_template;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = url.find(key); pos != std::string::npos;
         pos = url.find(key, pos + value.size())) {
      url.replace(pos, key.size(), value);
    }
  };
  if (url.find("{key}") != std::string::npos) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr) {
      throw ConfigError("API key environment variable " + config_.api_key_env +
                        " is not set");
    }
    replace("{key}", url_encode(key));
  }
  replace("{query}", url_encode(canonical));
  return url;
}

std::uint64_t WebSource::fetch(const std::string& canonical, const std::string& url) {
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) clock_->sleep_until(clock_->now() + config_.retry_backoff * attempt);
    limiter_.acquire();
    ++requests_;
    HttpResponse resp;
    try {
      resp = transport_->get(url);
    } catch (const TransportFailure& e) {
      last_failure = e.what();
      continue;
    }
    if (resp.status == 429) {
      throw RateLimitError(canonical, "search API quota exceeded (HTTP 429)");
    }
    if (resp.status >= 500) {
      last_failure = "HTTP " + std::to_string(resp.status);
      continue;
    }
    if (resp.status != 200) {
      throw ProtocolError(canonical, "unexpected HTTP status " + std::to_string(resp.status));
    }
    try {
      const json* node = nullptr;
      json body = json::parse(resp.body);
      node = &body;
      std::stringstream path(config_.count_field);
      for (std::string part; std::getline(path, part, '.');) {
        node = &node->at(part);
      }
      return parse_count(*node);
    } catch (const std::exception& e) {
      throw ProtocolError(canonical, std::string("unparseable response: ") + e.what());
    }
  }
  throw RetryableError(canonical, "search API unreachable after " +
                                      std::to_string(config_.max_retries + 1) +
                                      " attempts: " + last_failure);
}

std::uint64_t WebSource::do_count(const Query& query) {
  std::lock_guard lock(mu_);
  if (fresh(query.canonical)) return cache_.counts.at(query.canonical);

  const std::uint64_t n = fetch(query.canonical, build_url(query.canonical));
  cache_.counts[query.canonical] = n;
  cache_.retrieved_at[query.canonical] = format_utc(clock_->utc_now());
  if (!config_.cache_path.empty()) cache_.save(config_.cache_path);
  return n;
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string format_utc(Clock::utc_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Clock::utc_point> parse_utc(const std::string& text) {
  std::tm tm{};
  std::istringstream in(text);
  in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  if (in.fail()) return std::nullopt;
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

}  // namespace snmine
