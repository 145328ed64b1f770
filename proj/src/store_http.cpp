#include <atomic>

#include "http_client.hpp"
#include "r2o/fetcher.hpp"
#include "r2o/store.hpp"

namespace r2o::store {

HttpStoreClient::HttpStoreClient(ProviderDescriptor descriptor) : descriptor_(std::move(descriptor)) {
  if (!is_valid_locator(descriptor_.base_url))
    throw Error(ErrorCode::InvalidArgument, "http provider needs an http(s) base_url");
}

ContentLocator HttpStoreClient::upload(const ContentItem& item) {
  const std::string url = locator_for(descriptor_.base_url, "");
  std::string path;
  auto client = detail::make_client(url, path);
  path.pop_back();  // "/v1/objects"
  auto res = client->Post(path, reinterpret_cast<const char*>(item.bytes.data()), item.bytes.size(), item.media_type);
  if (!res) detail::throw_transport(res, url);
  if (res->status == 413) throw Error(ErrorCode::PayloadTooLarge, url);
  if (res->status != 201) throw Error(ErrorCode::StoreUnavailable, url + " answered " + std::to_string(res->status));
  std::string locator = res->body;
  while (!locator.empty() && (locator.back() == '\n' || locator.back() == '\r')) locator.pop_back();
  if (!is_valid_locator(locator)) throw Error(ErrorCode::StoreUnavailable, "malformed locator from " + url);
  return locator;
}

ContentItem HttpStoreClient::fetch(const ContentLocator& locator) { return HttpFetcher{}.fetch(locator); }

void HttpStoreClient::remove(const ContentLocator& locator) {
  std::string path;
  auto client = detail::make_client(locator, path);
  auto res = client->Delete(path);
  if (!res) detail::throw_transport(res, locator);
  if (res->status == 404) throw Error(ErrorCode::NotFound, locator);
  if (res->status != 204) throw Error(ErrorCode::StoreUnavailable, locator + " answered " + std::to_string(res->status));
}

struct StoreServer::Impl {
  httplib::Server server;
  std::thread thread;
};

StoreServer::StoreServer(Provider& backing, std::string host, int port, std::size_t max_payload)
    : impl_(std::make_unique<Impl>()), host_(std::move(host)) {
  auto& srv = impl_->server;
  srv.new_task_queue = [] { return detail::make_pool().release(); };
  srv.set_socket_options(detail::exclusive_socket_options);
  srv.set_payload_max_length(max_payload);
  const std::string objects = "/v1/objects";

  srv.Post(objects, [this, &backing](const httplib::Request& req, httplib::Response& res) {
    ContentItem item;
    item.bytes.assign(req.body.begin(), req.body.end());
    item.media_type = req.get_header_value("Content-Type");
    if (item.media_type.empty()) item.media_type = "application/octet-stream";
    try {
      auto id = object_id(backing.descriptor().base_url, backing.upload(item));
      if (!id) {
        res.status = 500;
        return;
      }
      res.status = 201;
      res.set_header("Location", std::string(kObjectsPath) + *id);
      res.set_content(locator_for(base_url(), *id), "text/plain");
    } catch (const Error& e) {
      res.status = e.code() == ErrorCode::PayloadTooLarge ? 413 : 503;
      res.set_content(e.what(), "text/plain");
    }
  });

  auto with_object = [&backing](const httplib::Request& req, httplib::Response& res, auto&& action) {
    const std::string id = req.matches[1];
    try {
      action(locator_for(backing.descriptor().base_url, id));
    } catch (const Error& e) {
      res.status = e.code() == ErrorCode::NotFound ? 404 : 503;
      res.set_content(e.what(), "text/plain");
    }
  };
  const std::string by_id = objects + "/([0-9a-f]{16})";
  srv.Get(by_id, [&backing, with_object](const httplib::Request& req, httplib::Response& res) {
    with_object(req, res, [&](const ContentLocator& loc) {
      auto item = backing.fetch(loc);
      res.status = 200;
      res.set_content(std::string(item.bytes.begin(), item.bytes.end()), item.media_type);
    });
  });
  srv.Delete(by_id, [&backing, with_object](const httplib::Request& req, httplib::Response& res) {
    with_object(req, res, [&](const ContentLocator& loc) {
      backing.remove(loc);
      res.status = 204;
    });
  });

  port_ = port == 0 ? srv.bind_to_any_port(host_) : (srv.bind_to_port(host_, port) ? port : -1);
  if (port_ <= 0) throw Error(ErrorCode::BindFailure, "cannot bind " + host_ + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  srv.wait_until_ready();
}

StoreServer::~StoreServer() { stop(); }

std::string StoreServer::base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

void StoreServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

std::unique_ptr<StoreServer> serve_store(Provider& backing, const std::string& host, int port) {
  return std::make_unique<StoreServer>(backing, host, port);
}

}  // namespace r2o::store

namespace r2o {

store::ContentItem HttpFetcher::fetch(const std::string& url) {
  std::string path;
  auto client = detail::make_client(url, path);
  auto res = client->Get(path);
  if (!res) detail::throw_transport(res, url);
  if (res->status == 404) throw Error(ErrorCode::NotFound, url);
  if (res->status != 200) throw Error(ErrorCode::StoreUnavailable, url + " answered " + std::to_string(res->status));
  store::ContentItem item;
  item.bytes.assign(res->body.begin(), res->body.end());
  item.media_type = res->get_header_value("Content-Type");
  if (item.media_type.empty()) item.media_type = "application/octet-stream";
  return item;
}

void RoutingFetcher::add_route(std::string prefix, Handler handler) {
  routes_.emplace_back(std::move(prefix), std::move(handler));
}

void RoutingFetcher::add_provider(store::Provider& provider) {
  add_route(store::locator_for(provider.descriptor().base_url, ""),
            [&provider](const std::string& url) { return provider.fetch(url); });
}

store::ContentItem RoutingFetcher::fetch(const std::string& url) {
  for (const auto& [prefix, handler] : routes_)
    if (url.starts_with(prefix)) return handler(url);
  if (fallback_) return fallback_->fetch(url);
  throw Error(ErrorCode::StoreUnavailable, "no route for " + url);
}

store::ContentItem CachingFetcher::fetch(const std::string& url) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(url); it != entries_.end()) return it->second;
  }
  auto item = inner_.fetch(url);
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign(url, item);
  return item;
}

void CachingFetcher::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
}

}  // namespace r2o
