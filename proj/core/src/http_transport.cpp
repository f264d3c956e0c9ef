#include <thread>

#include <httplib.h>

#include "pstat/perspective_client.hpp"

namespace pstat::perspective {

HttpsTransport::HttpsTransport(std::string host, std::chrono::seconds timeout)
    : host_(std::move(host)), timeout_(timeout) {}

HttpResponse HttpsTransport::post(const std::string& path_and_query,
                                  const std::string& json_body) {
  // One client per request keeps the transport stateless across threads.
  httplib::SSLClient client(host_, 443);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.enable_server_certificate_verification(true);
  auto res = client.Post(path_and_query, json_body, "application/json");
  if (!res) return {0, httplib::to_string(res.error())};
  return {res->status, res->body};
}

void SteadyClock::sleep_for(duration d) { std::this_thread::sleep_for(d); }

}  // namespace pstat::perspective
