#pragma once

// Shared cpp-httplib glue; include only from .cpp files.

#include <httplib.h>

#include <memory>
#include <string>

#include "r2o/error.hpp"
#include "r2o/url.hpp"

namespace r2o::detail {

inline std::unique_ptr<httplib::Client> make_client(const std::string& url, std::string& path) {
  auto parts = parse_url(url);
  if (!parts || parts->scheme != "http") throw Error(ErrorCode::StoreUnavailable, "unsupported URL " + url);
  path = parts->path;
  auto client = std::make_unique<httplib::Client>(parts->origin());
  client->set_connection_timeout(2, 0);
  client->set_read_timeout(30, 0);
  client->set_write_timeout(30, 0);
  client->set_keep_alive(false);
  return client;
}

[[noreturn]] inline void throw_transport(const httplib::Result& res, const std::string& url) {
  throw Error(ErrorCode::StoreUnavailable, url + ": " + httplib::to_string(res.error()));
}

// httplib's defaults add SO_REUSEPORT, which would let a second server
// silently share a port instead of failing to bind.
inline void exclusive_socket_options(socket_t sock) {
  int yes = 1;
  setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
}

inline std::unique_ptr<httplib::ThreadPool> make_pool() { return std::make_unique<httplib::ThreadPool>(64); }

}  // namespace r2o::detail
