#include "r2o/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "r2o/error.hpp"

namespace r2o::store {

std::string_view to_string(ProviderKind kind) noexcept {
  switch (kind) {
    case ProviderKind::memory: return "memory";
    case ProviderKind::filesystem: return "filesystem";
    case ProviderKind::http: return "http";
  }
  return "unknown";
}

std::optional<ProviderKind> parse_provider_kind(std::string_view s) noexcept {
  if (s == "memory") return ProviderKind::memory;
  if (s == "filesystem") return ProviderKind::filesystem;
  if (s == "http") return ProviderKind::http;
  return std::nullopt;
}

ContentLocator locator_for(std::string_view base_url, std::string_view id) {
  std::string base(base_url);
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + std::string(kObjectsPath) + std::string(id);
}

bool is_object_id(std::string_view id) noexcept {
  return id.size() == 16 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::optional<std::string> object_id(std::string_view base_url, std::string_view locator) {
  const std::string prefix = locator_for(base_url, "");
  if (!locator.starts_with(prefix)) return std::nullopt;
  auto id = locator.substr(prefix.size());
  if (!is_object_id(id)) return std::nullopt;
  return std::string(id);
}

std::string IdGenerator::next() {
  std::uint64_t value;
  {
    std::lock_guard lock(mutex_);
    value = rng_();
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) id[i] = kHex[value & 0xF];
  return id;
}

MemoryProvider::MemoryProvider(ProviderDescriptor descriptor, StoreOptions options)
    : descriptor_(std::move(descriptor)), options_(options), ids_(options.seed) {
  if (descriptor_.simulated_latency && descriptor_.simulated_latency->count() < 0)
    throw Error(ErrorCode::InvalidArgument, "simulated latency must be >= 0");
}

void MemoryProvider::simulate_latency() const {
  if (descriptor_.simulated_latency && descriptor_.simulated_latency->count() > 0)
    std::this_thread::sleep_for(*descriptor_.simulated_latency);
}

std::string MemoryProvider::require_id(const ContentLocator& locator) const {
  auto id = object_id(descriptor_.base_url, locator);
  if (!id) throw Error(ErrorCode::NotFound, "not a locator of " + descriptor_.name + ": " + locator);
  return *id;
}

ContentLocator MemoryProvider::upload(const ContentItem& item) {
  simulate_latency();
  if (item.bytes.size() > options_.max_payload)
    throw Error(ErrorCode::PayloadTooLarge, std::to_string(item.bytes.size()) + " bytes exceeds the payload cap");
  if (item.media_type.empty()) throw Error(ErrorCode::InvalidArgument, "media type must be non-empty");
  std::unique_lock lock(mutex_);
  std::string id;
  do {
    id = ids_.next();
  } while (objects_.contains(id));
  objects_.emplace(id, item);
  return locator_for(descriptor_.base_url, id);
}

ContentItem MemoryProvider::fetch(const ContentLocator& locator) {
  simulate_latency();
  const std::string id = require_id(locator);
  std::shared_lock lock(mutex_);
  auto it = objects_.find(id);
  if (it == objects_.end()) throw Error(ErrorCode::NotFound, locator);
  return it->second;
}

void MemoryProvider::remove(const ContentLocator& locator) {
  simulate_latency();
  const std::string id = require_id(locator);
  std::unique_lock lock(mutex_);
  if (objects_.erase(id) == 0) throw Error(ErrorCode::NotFound, locator);
}

std::size_t MemoryProvider::size() const {
  std::shared_lock lock(mutex_);
  return objects_.size();
}

FilesystemProvider::FilesystemProvider(ProviderDescriptor descriptor, std::filesystem::path root, StoreOptions options)
    : descriptor_(std::move(descriptor)), root_(std::move(root)), options_(options), ids_(options.seed) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec || !std::filesystem::is_directory(root_))
    throw Error(ErrorCode::StoreUnavailable, "cannot use store root " + root_.string());
}

std::string FilesystemProvider::require_id(const ContentLocator& locator) const {
  auto id = object_id(descriptor_.base_url, locator);
  if (!id) throw Error(ErrorCode::NotFound, "not a locator of " + descriptor_.name + ": " + locator);
  return *id;
}

ContentLocator FilesystemProvider::upload(const ContentItem& item) {
  if (item.bytes.size() > options_.max_payload)
    throw Error(ErrorCode::PayloadTooLarge, std::to_string(item.bytes.size()) + " bytes exceeds the payload cap");
  if (item.media_type.empty() || item.media_type.find('\n') != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "media type must be a non-empty single line");

  std::lock_guard lock(write_mutex_);
  std::string id;
  do {
    id = ids_.next();
  } while (std::filesystem::exists(root_ / id));

  // Write both files under temporary names, then publish the data file last.
  const auto data = root_ / id, meta = root_ / (id + ".meta");
  const auto data_tmp = root_ / (id + ".tmp"), meta_tmp = root_ / (id + ".meta.tmp");
  {
    std::ofstream out(data_tmp, std::ios::binary);
    out.write(reinterpret_cast<const char*>(item.bytes.data()), static_cast<std::streamsize>(item.bytes.size()));
    std::ofstream m(meta_tmp);
    m << item.media_type << '\n';
    if (!out || !m) throw Error(ErrorCode::StoreUnavailable, "write failed under " + root_.string());
  }
  std::filesystem::rename(meta_tmp, meta);
  std::filesystem::rename(data_tmp, data);
  return locator_for(descriptor_.base_url, id);
}

ContentItem FilesystemProvider::fetch(const ContentLocator& locator) {
  const std::string id = require_id(locator);
  std::ifstream in(root_ / id, std::ios::binary);
  std::ifstream meta(root_ / (id + ".meta"));
  if (!in || !meta) throw Error(ErrorCode::NotFound, locator);
  ContentItem item;
  item.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  std::getline(meta, item.media_type);
  return item;
}

void FilesystemProvider::remove(const ContentLocator& locator) {
  const std::string id = require_id(locator);
  std::lock_guard lock(write_mutex_);
  if (!std::filesystem::remove(root_ / id)) throw Error(ErrorCode::NotFound, locator);
  std::filesystem::remove(root_ / (id + ".meta"));
}

double median(std::vector<double> samples) {
  if (samples.empty()) return 0;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2;
}

MeasureResult measure_store(Provider& provider, std::size_t item_size, std::size_t repetitions,
                            std::chrono::milliseconds interval, std::uint64_t seed) {
  if (repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  std::mt19937_64 rng(seed);
  ContentItem item;
  item.bytes.resize(item_size);
  for (auto& b : item.bytes) b = static_cast<std::uint8_t>(rng());
  const ContentLocator locator = provider.upload(item);

  MeasureResult result;
  for (std::size_t i = 0; i < repetitions; ++i) {
    if (i > 0 && interval.count() > 0) std::this_thread::sleep_for(interval);
    const auto start = std::chrono::steady_clock::now();
    auto fetched = provider.fetch(locator);
    const auto stop = std::chrono::steady_clock::now();
    if (fetched.bytes.size() != item_size) throw Error(ErrorCode::StoreUnavailable, "short read from " + locator);
    result.samples_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  result.median_ms = median(result.samples_ms);
  return result;
}

std::vector<ProviderDescriptor> hosting_presets() {
  using std::chrono::milliseconds;
  const std::pair<const char*, int> rows[] = {
      {"facebook_cdn", 11}, {"imgur", 12},   {"photobucket", 50}, {"postimage", 51},
      {"flickr", 147},      {"dropbox", 306}, {"tinypic", 310},    {"imageshack", 434},
  };
  std::vector<ProviderDescriptor> out;
  for (auto [name, ms] : rows)
    out.push_back({name, ProviderKind::memory, "http://" + std::string(name) + ".sim", milliseconds{ms}});
  return out;
}

}  // namespace r2o::store
