#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "r2o/cache.hpp"
#include "r2o/codec.hpp"
#include "r2o/fetcher.hpp"
#include "r2o/filter.hpp"
#include "r2o/firstparty.hpp"
#include "r2o/rewriter.hpp"
#include "r2o/store.hpp"

namespace r2o::core {

struct WriteReceipt {
  ContentLocator offsite_locator;
  ContentLocator pseudo_locator;
  std::string photo_id;
  std::string album_id;
};

struct WriteOptions {
  codec::QrConfig qr;
  filter::FilterConfig filter;  // supplies the caption marker
  /// When set, the pseudo-image is padded with a white border to this size.
  std::optional<std::pair<int, int>> pad_to;
};

/// Off-site upload, QR encoding of the returned locator, first-party upload
/// of the QR image, then a created mapping in the cache. The original bytes
/// go only to `offsite`. If anything fails after the off-site upload and
/// before the first-party upload succeeds, the off-site object is deleted
/// and the error rethrown.
WriteReceipt write_path(const store::ContentItem& image, const std::optional<std::string>& caption,
                        const std::string& album_id, store::Provider& offsite,
                        firstparty::FirstPartyClient& firstparty, cache::MappingsCache& cache,
                        const WriteOptions& options = {});

enum class Outcome { replaced, not_indirection, failed };
enum class Via { cache_hit, decoded };

std::string_view to_string(Outcome o) noexcept;
std::string_view to_string(Via v) noexcept;

struct Resolution {
  filter::ElementDescriptor element;
  Outcome outcome = Outcome::not_indirection;
  std::optional<Via> via;                    // replaced only
  ContentLocator offsite_locator;            // set once known
  std::optional<store::ContentItem> content;  // replaced only
  std::string reason;                        // rejection rule or failure
};

struct ReadOptions {
  /// Concurrent decoders.
  int parallelism = 8;
  /// Concurrent candidate pipelines, i.e. outstanding fetches.
  int max_in_flight = 64;
};

/// One Resolution per element, in input order. Candidates run concurrently;
/// a failing element never affects the others.
std::vector<Resolution> read_path(const std::vector<filter::ElementDescriptor>& elements,
                                  const filter::FilterConfig& filter_cfg, cache::MappingsCache& cache,
                                  Fetcher& fetcher, const ReadOptions& options = {});

struct ResolveOptions {
  ReadOptions read;
  /// Replace src with a data: URL of the fetched bytes instead of the locator.
  bool inline_content = false;
};

struct ResolvedPage {
  std::string html;
  std::vector<Resolution> resolutions;
};

/// Fetches an album page, resolves its schemata and rewrites their src
/// attributes. Throws Error(PageUnreachable).
ResolvedPage resolve_page(const std::string& page_url, const filter::FilterConfig& filter_cfg,
                          cache::MappingsCache& cache, Fetcher& fetcher, const ResolveOptions& options = {});

}  // namespace r2o::core
