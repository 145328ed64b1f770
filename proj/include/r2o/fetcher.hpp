#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "r2o/store.hpp"

namespace r2o {

/// Retrieves content by absolute URL. Throws Error(NotFound) or
/// Error(StoreUnavailable). Implementations are safe for concurrent use.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual store::ContentItem fetch(const std::string& url) = 0;
};

/// Plain HTTP GET.
class HttpFetcher final : public Fetcher {
 public:
  store::ContentItem fetch(const std::string& url) override;
};

/// Dispatches by URL prefix to in-process handlers; unmatched URLs go to the
/// fallback when one is set.
class RoutingFetcher final : public Fetcher {
 public:
  using Handler = std::function<store::ContentItem(const std::string&)>;

  void add_route(std::string prefix, Handler handler);
  /// Routes "{base_url}/v1/objects/..." to the provider.
  void add_provider(store::Provider& provider);
  void set_fallback(Fetcher* fallback) { fallback_ = fallback; }

  store::ContentItem fetch(const std::string& url) override;

 private:
  std::vector<std::pair<std::string, Handler>> routes_;
  Fetcher* fallback_ = nullptr;
};

/// Byte-level response cache in front of another fetcher. Independent of
/// the mappings cache; off unless a caller wraps its fetcher with it.
class CachingFetcher final : public Fetcher {
 public:
  explicit CachingFetcher(Fetcher& inner) : inner_(inner) {}
  store::ContentItem fetch(const std::string& url) override;
  void clear();

 private:
  Fetcher& inner_;
  std::mutex mutex_;
  std::map<std::string, store::ContentItem> entries_;
};

}  // namespace r2o
