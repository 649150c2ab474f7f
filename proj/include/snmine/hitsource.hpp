#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snmine/engine.hpp"

namespace snmine {

/// Canonical text of a one- or two-term query.
///
/// Each term is its tokens joined by single spaces, wrapped in double quotes
/// in phrase mode. A pair is the two canonical terms sorted and joined by
/// " AND ". Throws ConfigError for zero or more than two terms.
std::string canonical_query(std::span<const Term> terms);
std::string canonical_query(const std::vector<std::vector<std::string>>& terms,
                            MatchMode mode);

struct Query {
  std::vector<Term> terms;  // one or two, sorted
  std::string canonical;

  static Query single(const Term& term);
  /// Throws DegeneratePairError when tx == ty.
  static Query pair(const Term& tx, const Term& ty);
};

/// Anything that can report hit counts: a local index, a replayed fixture, or
/// a web search API.
class HitSource {
 public:
  virtual ~HitSource() = default;

  std::uint64_t count(const Query& query) { return do_count(query); }
  std::uint64_t count(const Term& term) { return do_count(Query::single(term)); }
  std::uint64_t count(const Term& tx, const Term& ty) {
    return do_count(Query::pair(tx, ty));
  }

  /// |Ω| when the backend knows it.
  virtual std::optional<std::uint64_t> total() const = 0;
  /// The backing index, for sources that have one.
  virtual const EventSpace* event_space() const noexcept { return nullptr; }

 protected:
  virtual std::uint64_t do_count(const Query& query) = 0;
};

class LocalSource final : public HitSource {
 public:
  explicit LocalSource(std::shared_ptr<const EventSpace> space);
  explicit LocalSource(EventSpace space);

  std::optional<std::uint64_t> total() const override { return space_->total_docs(); }
  const EventSpace* event_space() const noexcept override { return space_.get(); }

 protected:
  std::uint64_t do_count(const Query& query) override;

 private:
  std::shared_ptr<const EventSpace> space_;
};

/// On-disk map of canonical query -> hit count, shared by fixtures and the
/// web cache:
///   {"total": int|null, "counts": {query: int}, "retrieved_at": {query: iso8601}}
struct CountFile {
  std::optional<std::uint64_t> total;
  std::map<std::string, std::uint64_t> counts;
  std::map<std::string, std::string> retrieved_at;

  static CountFile parse(const std::string& json);
  static CountFile load(const std::filesystem::path& path);
  std::string dump() const;
  /// Writes to a sibling temp file and renames it over `path`.
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const CountFile&, const CountFile&) = default;
};

/// Replays recorded counts. Unmapped queries raise MissingFixtureError.
class FixtureSource final : public HitSource {
 public:
  explicit FixtureSource(CountFile file) : file_(std::move(file)) {}
  static FixtureSource from_file(const std::filesystem::path& path);

  std::optional<std::uint64_t> total() const override { return file_.total; }
  const CountFile& file() const noexcept { return file_; }

 protected:
  std::uint64_t do_count(const Query& query) override;

 private:
  CountFile file_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Performs one HTTP GET. Throws TransportFailure when no response arrives.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

class TransportFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// cpp-httplib backed transport (http and, when built with OpenSSL, https).
std::shared_ptr<HttpTransport> make_http_transport(
    std::chrono::seconds timeout = std::chrono::seconds(30));

class Clock {
 public:
  using steady_point = std::chrono::steady_clock::time_point;
  using utc_point = std::chrono::system_clock::time_point;

  virtual ~Clock() = default;
  virtual steady_point now() = 0;
  virtual void sleep_until(steady_point when) = 0;
  virtual utc_point utc_now() = 0;
};

std::shared_ptr<Clock> system_clock();

/// Admits at most `requests_per_second` requests in any one-second window.
/// Rates below one become one request per 1/rate seconds; fractional rates
/// above one round down.
class RateLimiter {
 public:
  RateLimiter(double requests_per_second, std::shared_ptr<Clock> clock);
  /// Blocks (via the clock) until a request may go out, then records it.
  void acquire();

 private:
  std::size_t capacity_;
  std::chrono::nanoseconds window_;
  std::shared_ptr<Clock> clock_;
  std::deque<Clock::steady_point> sent_;
};

struct WebConfig {
  /// Must contain {query}; may contain {key} for the API key.
  std::string url_template;
  /// Dot-separated path to the hit count in the JSON response. The value may
  /// be a number or a string of digits.
  std::string count_field;
  std::string api_key_env = "SNMINE_API_KEY";
  double requests_per_second = 1.0;
  /// Empty keeps the cache in memory only.
  std::filesystem::path cache_path;
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{500};
  /// Cached entries older than this are refetched. No expiry when absent.
  std::optional<std::chrono::seconds> max_age;
  /// User-supplied |Ω| estimate; web engines do not report one.
  std::optional<std::uint64_t> total_estimate;

  /// Keys: url_template, count_field, api_key_env, requests_per_second,
  /// cache_path, max_retries, retry_backoff_ms, max_age_seconds, total.
  static WebConfig load(const std::filesystem::path& path);
  static WebConfig parse(const std::string& json);
};

/// Hit counts from a web search API behind a persistent cache and a rate
/// limiter. Outbound requests are serialized.
class WebSource final : public HitSource {
 public:
  explicit WebSource(WebConfig config,
                     std::shared_ptr<HttpTransport> transport = nullptr,
                     std::shared_ptr<Clock> clock = nullptr);

  std::optional<std::uint64_t> total() const override { return config_.total_estimate; }

  std::size_t requests_made() const;
  CountFile cache() const;

 protected:
  std::uint64_t do_count(const Query& query) override;

 private:
  std::string build_url(const std::string& canonical) const;
  std::uint64_t fetch(const std::string& canonical, const std::string& url);
  bool fresh(const std::string& canonical) const;

  WebConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  CountFile cache_;
  std::size_t requests_ = 0;
  mutable std::mutex mu_;
};

std::string url_encode(std::string_view text);
std::string format_utc(Clock::utc_point t);
/// Parses "YYYY-MM-DDTHH:MM:SSZ". Empty on malformed input.
std::optional<Clock::utc_point> parse_utc(const std::string& text);

}  // namespace snmine
