#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "r2o/url.hpp"

namespace r2o::store {

struct ContentItem {
  std::vector<std::uint8_t> bytes;
  std::string media_type = "application/octet-stream";

  std::size_t declared_length() const noexcept { return bytes.size(); }

  static ContentItem from_string(std::string_view text, std::string media_type = "text/plain") {
    return {std::vector<std::uint8_t>(text.begin(), text.end()), std::move(media_type)};
  }
  std::string as_string() const { return {bytes.begin(), bytes.end()}; }

  friend bool operator==(const ContentItem&, const ContentItem&) = default;
};

enum class ProviderKind { memory, filesystem, http };

std::string_view to_string(ProviderKind kind) noexcept;
std::optional<ProviderKind> parse_provider_kind(std::string_view s) noexcept;

struct ProviderDescriptor {
  std::string name;
  ProviderKind kind = ProviderKind::memory;
  ContentLocator base_url = "http://offsite.invalid";
  std::optional<std::chrono::milliseconds> simulated_latency;
};

inline constexpr std::size_t kDefaultMaxPayload = 16u << 20;
inline constexpr std::string_view kObjectsPath = "/v1/objects/";

/// Off-site content host. Implementations are safe for concurrent use.
class Provider {
 public:
  virtual ~Provider() = default;

  /// Stores `item` under a fresh id. Throws PayloadTooLarge, StoreUnavailable.
  virtual ContentLocator upload(const ContentItem& item) = 0;
  /// Throws NotFound, StoreUnavailable.
  virtual ContentItem fetch(const ContentLocator& locator) = 0;
  /// Throws NotFound, StoreUnavailable.
  virtual void remove(const ContentLocator& locator) = 0;

  virtual const ProviderDescriptor& descriptor() const = 0;
};

/// "{base_url}/v1/objects/{id}"
ContentLocator locator_for(std::string_view base_url, std::string_view id);
/// The 16-hex-char id of a locator under base_url, if it is one.
std::optional<std::string> object_id(std::string_view base_url, std::string_view locator);
bool is_object_id(std::string_view id) noexcept;

/// Seeded source of 16-lowercase-hex object ids.
class IdGenerator {
 public:
  explicit IdGenerator(std::uint64_t seed) : rng_(seed) {}
  std::string next();

 private:
  std::mutex mutex_;
  std::mt19937_64 rng_;
};

struct StoreOptions {
  std::size_t max_payload = kDefaultMaxPayload;
  std::uint64_t seed = std::random_device{}();
};

/// In-memory provider; every upload/fetch/remove first sleeps for the
/// descriptor's simulated latency.
class MemoryProvider final : public Provider {
 public:
  explicit MemoryProvider(ProviderDescriptor descriptor, StoreOptions options = {});

  ContentLocator upload(const ContentItem& item) override;
  ContentItem fetch(const ContentLocator& locator) override;
  void remove(const ContentLocator& locator) override;
  const ProviderDescriptor& descriptor() const override { return descriptor_; }

  std::size_t size() const;

 private:
  void simulate_latency() const;
  std::string require_id(const ContentLocator& locator) const;

  ProviderDescriptor descriptor_;
  StoreOptions options_;
  IdGenerator ids_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, ContentItem> objects_;
};

/// `<root>/<id>` holds the bytes, `<root>/<id>.meta` one line of media type.
class FilesystemProvider final : public Provider {
 public:
  FilesystemProvider(ProviderDescriptor descriptor, std::filesystem::path root, StoreOptions options = {});

  ContentLocator upload(const ContentItem& item) override;
  ContentItem fetch(const ContentLocator& locator) override;
  void remove(const ContentLocator& locator) override;
  const ProviderDescriptor& descriptor() const override { return descriptor_; }

 private:
  std::string require_id(const ContentLocator& locator) const;

  ProviderDescriptor descriptor_;
  std::filesystem::path root_;
  StoreOptions options_;
  IdGenerator ids_;
  std::mutex write_mutex_;
};

/// Client for the HTTP store wire protocol; base_url is the server origin.
class HttpStoreClient final : public Provider {
 public:
  explicit HttpStoreClient(ProviderDescriptor descriptor);

  ContentLocator upload(const ContentItem& item) override;
  ContentItem fetch(const ContentLocator& locator) override;
  void remove(const ContentLocator& locator) override;
  const ProviderDescriptor& descriptor() const override { return descriptor_; }

 private:
  ProviderDescriptor descriptor_;
};

/// Serves the HTTP store protocol backed by `backing` until stopped.
class StoreServer {
 public:
  StoreServer(Provider& backing, std::string host = "127.0.0.1", int port = 0,
              std::size_t max_payload = kDefaultMaxPayload);
  ~StoreServer();

  StoreServer(const StoreServer&) = delete;
  StoreServer& operator=(const StoreServer&) = delete;

  int port() const noexcept { return port_; }
  /// "http://host:port"
  std::string base_url() const;
  /// Graceful: in-flight requests complete.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
};

/// Binds and starts serving. Throws Error(BindFailure).
std::unique_ptr<StoreServer> serve_store(Provider& backing, const std::string& host = "127.0.0.1", int port = 0);

struct MeasureResult {
  std::vector<double> samples_ms;
  double median_ms = 0;
};

/// Uploads one item of `item_size` random bytes, then times `repetitions`
/// sequential fetches spaced by `interval`. Throws InvalidArgument for
/// repetitions == 0.
MeasureResult measure_store(Provider& provider, std::size_t item_size, std::size_t repetitions,
                            std::chrono::milliseconds interval = std::chrono::milliseconds{0},
                            std::uint64_t seed = 1);

double median(std::vector<double> samples);

/// Response-time presets for eight public image hosts (median ms).
std::vector<ProviderDescriptor> hosting_presets();

}  // namespace r2o::store
