#include "r2o/cache.hpp"

#include <algorithm>

#include "r2o/error.hpp"

namespace r2o::cache {
namespace {

bool has_separator(std::string_view s) { return s.find_first_of("\t\n") != std::string_view::npos; }

void validate(const MappingEntry& e) {
  if (e.pseudo_locator.empty() || e.offsite_locator.empty())
    throw Error(ErrorCode::InvalidArgument, "mapping locators must be non-empty");
  if (e.pseudo_locator == e.offsite_locator)
    throw Error(ErrorCode::InvalidArgument, "pseudo and off-site locators must differ");
  if (has_separator(e.pseudo_locator) || has_separator(e.offsite_locator))
    throw Error(ErrorCode::InvalidArgument, "locators may not contain tab or newline");
}

std::vector<MappingEntry> values(const std::map<std::string, MappingEntry>& segment) {
  std::vector<MappingEntry> out;
  out.reserve(segment.size());
  for (const auto& [key, entry] : segment) out.push_back(entry);
  return out;
}

}  // namespace

MappingsCache::MappingsCache(CacheConfig config) : config_(config) {}

void MappingsCache::record_created(MappingEntry entry) {
  validate(entry);
  std::lock_guard lock(mutex_);
  if (entry.last_used) {
    clock_ = std::max(clock_, *entry.last_used);
  } else {
    entry.last_used = tick();
  }
  if (auto it = frequent_.find(entry.pseudo_locator); it != frequent_.end()) {
    frequency_order_.erase(frequency_key(it->second));
    frequent_.erase(it);
  }
  frequency_order_.insert(frequency_key(entry));
  frequent_.emplace(entry.pseudo_locator, std::move(entry));

  while (frequent_.size() > config_.n_frequent) {
    auto victim = frequency_order_.begin();
    frequent_.erase(std::get<2>(*victim));
    frequency_order_.erase(victim);
  }
}

void MappingsCache::insert_recent(MappingEntry entry) {
  if (auto it = recent_.find(entry.pseudo_locator); it != recent_.end()) {
    recency_order_.erase(*it->second.last_used);
    recent_.erase(it);
  }
  recency_order_.emplace(*entry.last_used, entry.pseudo_locator);
  recent_.emplace(entry.pseudo_locator, std::move(entry));

  while (recent_.size() > config_.m_recent) {
    auto victim = recency_order_.begin();
    recent_.erase(victim->second);
    recency_order_.erase(victim);
  }
}

void MappingsCache::record_resolved(MappingEntry entry) {
  validate(entry);
  std::lock_guard lock(mutex_);
  if (auto it = recent_.find(entry.pseudo_locator); it != recent_.end()) entry.hit_count = it->second.hit_count;
  entry.hit_count += 1;
  entry.last_used = tick();
  insert_recent(std::move(entry));
}

std::optional<ContentLocator> MappingsCache::lookup(const ContentLocator& pseudo_locator) {
  std::lock_guard lock(mutex_);
  auto freq = frequent_.find(pseudo_locator);
  auto rec = recent_.find(pseudo_locator);
  if (freq == frequent_.end() && rec == recent_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  const std::uint64_t now = tick();
  std::optional<ContentLocator> result;
  if (rec != recent_.end()) {
    MappingEntry& e = rec->second;
    recency_order_.erase(*e.last_used);
    e.hit_count += 1;
    e.last_used = now;
    recency_order_.emplace(now, e.pseudo_locator);
    result = e.offsite_locator;
  }
  if (freq != frequent_.end()) {
    MappingEntry& e = freq->second;
    frequency_order_.erase(frequency_key(e));
    e.hit_count += 1;
    e.last_used = now;
    frequency_order_.insert(frequency_key(e));
    result = e.offsite_locator;
  }
  return result;
}

std::string MappingsCache::export_mappings(const Selection& selection) const {
  std::set<std::tuple<std::string, std::string, MediaClass>> rows;
  {
    std::lock_guard lock(mutex_);
    auto take = [&](const std::map<std::string, MappingEntry>& segment) {
      for (const auto& [key, e] : segment) {
        if (selection.kind == Selection::Kind::by_prefix && !key.starts_with(selection.prefix)) continue;
        rows.emplace(e.pseudo_locator, e.offsite_locator, e.media_class);
      }
    };
    if (selection.kind != Selection::Kind::recent) take(frequent_);
    if (selection.kind != Selection::Kind::frequent) take(recent_);
  }
  std::string out(kMapHeader);
  out += '\n';
  for (const auto& [pseudo, offsite, media] : rows) {
    out += pseudo;
    out += '\t';
    out += offsite;
    out += '\t';
    out += to_string(media);
    out += '\n';
  }
  return out;
}

ImportResult MappingsCache::import_mappings(std::string_view blob) {
  auto eol = blob.find('\n');
  std::string_view header = blob.substr(0, eol);
  if (header != kMapHeader)
    throw Error(ErrorCode::UnsupportedVersion, "unsupported mapping header '" + std::string(header.substr(0, 32)) + "'");

  std::vector<MappingEntry> parsed;
  ImportResult result;
  std::string_view rest = eol == std::string_view::npos ? std::string_view{} : blob.substr(eol + 1);
  while (!rest.empty()) {
    auto end = rest.find('\n');
    std::string_view line = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end + 1);

    auto t1 = line.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
      ++result.skipped;
      continue;
    }
    MappingEntry e;
    e.pseudo_locator = std::string(line.substr(0, t1));
    e.offsite_locator = std::string(line.substr(t1 + 1, t2 - t1 - 1));
    auto media = parse_media_class(line.substr(t2 + 1));
    if (!media || e.pseudo_locator.empty() || e.offsite_locator.empty() || e.pseudo_locator == e.offsite_locator) {
      ++result.skipped;
      continue;
    }
    e.media_class = *media;
    parsed.push_back(std::move(e));
  }

  std::lock_guard lock(mutex_);
  for (auto& e : parsed) {
    if (auto it = recent_.find(e.pseudo_locator); it != recent_.end()) e.hit_count = it->second.hit_count;
    e.last_used = tick();
    insert_recent(std::move(e));
    ++result.merged;
  }
  return result;
}

std::vector<MappingEntry> MappingsCache::frequent() const {
  std::lock_guard lock(mutex_);
  return values(frequent_);
}

std::vector<MappingEntry> MappingsCache::recent() const {
  std::lock_guard lock(mutex_);
  return values(recent_);
}

Stats MappingsCache::stats() const {
  std::lock_guard lock(mutex_);
  return {frequent_.size(), recent_.size(), hits_, misses_};
}

void MappingsCache::clear() {
  std::lock_guard lock(mutex_);
  frequent_.clear();
  frequency_order_.clear();
  recent_.clear();
  recency_order_.clear();
}

}  // namespace r2o::cache
