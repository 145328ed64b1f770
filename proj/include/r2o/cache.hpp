#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "r2o/types.hpp"
#include "r2o/url.hpp"

namespace r2o::cache {

struct MappingEntry {
  ContentLocator pseudo_locator;
  ContentLocator offsite_locator;
  MediaClass media_class = MediaClass::image;
  std::uint64_t hit_count = 0;
  std::optional<std::uint64_t> last_used;  // logical clock tick

  friend bool operator==(const MappingEntry&, const MappingEntry&) = default;
};

struct CacheConfig {
  std::size_t n_frequent = 256;
  std::size_t m_recent = 1024;
};

struct Selection {
  enum class Kind { all, frequent, recent, by_prefix };
  Kind kind = Kind::all;
  std::string prefix;

  static Selection all() { return {}; }
  static Selection frequent() { return {Kind::frequent, {}}; }
  static Selection recent() { return {Kind::recent, {}}; }
  static Selection by_prefix(std::string p) { return {Kind::by_prefix, std::move(p)}; }
};

struct ImportResult {
  std::size_t merged = 0;
  std::size_t skipped = 0;
};

struct Stats {
  std::size_t frequent = 0;
  std::size_t recent = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
};

inline constexpr std::string_view kMapHeader = "r2o-map/1";

/// Indirection mappings: pseudo-locator -> off-site locator, held in two
/// segments. The frequent segment keeps the N created mappings with the
/// highest hit counts; the recent segment keeps the M most recently used
/// resolved mappings. All member functions are mutually atomic.
class MappingsCache {
 public:
  explicit MappingsCache(CacheConfig config = {});

  MappingsCache(const MappingsCache&) = delete;
  MappingsCache& operator=(const MappingsCache&) = delete;

  /// A mapping created by this user's upload. Keeps the entry's last_used
  /// when set, otherwise stamps it. Evicts the lowest hit_count (ties: older
  /// last_used, then smaller pseudo_locator).
  void record_created(MappingEntry entry);

  /// A mapping learned by resolving someone else's schema. Counts as a use:
  /// hit_count is incremented and last_used refreshed. Evicts LRU.
  void record_resolved(MappingEntry entry);

  /// On hit, every copy of the mapping has its hit_count incremented and
  /// last_used refreshed. A miss changes nothing but the miss counter.
  std::optional<ContentLocator> lookup(const ContentLocator& pseudo_locator);

  /// Serialized r2o-map/1 blob, entries sorted by pseudo_locator.
  std::string export_mappings(const Selection& selection = Selection::all()) const;

  /// Merges a blob into the recent segment. Throws Error(UnsupportedVersion).
  ImportResult import_mappings(std::string_view blob);

  /// Segment contents sorted by pseudo_locator.
  std::vector<MappingEntry> frequent() const;
  std::vector<MappingEntry> recent() const;

  Stats stats() const;
  CacheConfig config() const { return config_; }
  void clear();

 private:
  using FrequencyKey = std::tuple<std::uint64_t, std::uint64_t, std::string>;
  static FrequencyKey frequency_key(const MappingEntry& e) {
    return {e.hit_count, e.last_used.value_or(0), e.pseudo_locator};
  }

  std::uint64_t tick() { return ++clock_; }
  void insert_recent(MappingEntry entry);

  CacheConfig config_;
  mutable std::mutex mutex_;
  std::uint64_t clock_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;

  std::map<std::string, MappingEntry> frequent_;
  std::set<FrequencyKey> frequency_order_;

  std::map<std::string, MappingEntry> recent_;
  std::map<std::uint64_t, std::string> recency_order_;
};

}  // namespace r2o::cache
