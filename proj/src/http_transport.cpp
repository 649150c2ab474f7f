#include <regex>

#include "httplib.h"
#include "snmine/hitsource.hpp"

namespace snmine {
namespace {

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    static const std::regex kUrl(R"(^(https?://[^/?#]+)([^#]*)$)");
    std::smatch m;
    if (!std::regex_match(url, m, kUrl)) {
      throw TransportFailure("unsupported URL: " + url);
    }
    std::string path = m[2].str();
    if (path.empty()) path = "/";

    httplib::Client client(m[1].str());
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    auto res = client.Get(path);
    if (!res) {
      throw TransportFailure("request failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout) {
  return std::make_shared<HttplibTransport>(timeout);
}

}  // namespace snmine
