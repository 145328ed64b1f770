#include "r2o/core.hpp"

#include <atomic>
#include <semaphore>
#include <thread>

#include "r2o/error.hpp"
#include "r2o/html.hpp"

namespace r2o::core {

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::replaced: return "replaced";
    case Outcome::not_indirection: return "not_indirection";
    case Outcome::failed: return "failed";
  }
  return "unknown";
}

std::string_view to_string(Via v) noexcept { return v == Via::cache_hit ? "cache_hit" : "decoded"; }

WriteReceipt write_path(const store::ContentItem& image, const std::optional<std::string>& caption,
                        const std::string& album_id, store::Provider& offsite,
                        firstparty::FirstPartyClient& firstparty, cache::MappingsCache& cache,
                        const WriteOptions& options) {
  // The original content goes off-site only.
  const ContentLocator offsite_locator = offsite.upload(image);

  firstparty::UploadedPhoto uploaded;
  try {
    codec::PseudoImage pseudo = codec::encode_qr({offsite_locator, MediaClass::image, {}}, options.qr);
    if (options.pad_to) pseudo = codec::pad_with_border(pseudo, options.pad_to->first, options.pad_to->second);
    store::ContentItem pseudo_item{codec::to_png(pseudo), "image/png"};
    uploaded = firstparty.upload_photo(album_id, pseudo_item, filter::make_caption(caption, options.filter));
  } catch (...) {
    try {
      offsite.remove(offsite_locator);
    } catch (...) {
      // The original failure is the one worth reporting.
    }
    throw;
  }

  cache.record_created({uploaded.static_url, offsite_locator, MediaClass::image, 0, std::nullopt});
  return {offsite_locator, uploaded.static_url, uploaded.photo_id, album_id};
}

namespace {

void resolve_candidate(Resolution& r, cache::MappingsCache& cache, Fetcher& fetcher,
                       std::counting_semaphore<>& decoders) {
  const std::string& pseudo_url = r.element.source_url;
  auto fetch_offsite = [&](Via via) {
    try {
      r.content = fetcher.fetch(r.offsite_locator);
      r.outcome = Outcome::replaced;
      r.via = via;
    } catch (const std::exception& e) {
      r.outcome = Outcome::failed;
      r.reason = std::string("off-site fetch: ") + e.what();
    }
  };

  if (auto hit = cache.lookup(pseudo_url)) {
    r.offsite_locator = *hit;
    fetch_offsite(Via::cache_hit);
    return;
  }

  store::ContentItem pseudo;
  try {
    pseudo = fetcher.fetch(pseudo_url);
  } catch (const std::exception& e) {
    r.outcome = Outcome::failed;
    r.reason = std::string("pseudo fetch: ") + e.what();
    return;
  }

  codec::IndirectionPayload payload;
  {
    decoders.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{decoders};
    try {
      payload = codec::decode_qr(codec::from_png(pseudo.bytes));
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::NotAQrSymbol:
        case ErrorCode::InvalidImage:
        case ErrorCode::InvalidPayload:
          r.outcome = Outcome::not_indirection;
          r.reason = e.what();
          return;
        default:
          r.outcome = Outcome::failed;
          r.reason = e.what();
          return;
      }
    }
  }

  r.offsite_locator = payload.locator;
  try {
    cache.record_resolved({pseudo_url, payload.locator, payload.media_class, 0, std::nullopt});
  } catch (const std::exception& e) {
    r.outcome = Outcome::failed;
    r.reason = e.what();
    return;
  }
  fetch_offsite(Via::decoded);
}

}  // namespace

std::vector<Resolution> read_path(const std::vector<filter::ElementDescriptor>& elements,
                                  const filter::FilterConfig& filter_cfg, cache::MappingsCache& cache,
                                  Fetcher& fetcher, const ReadOptions& options) {
  if (options.parallelism < 1 || options.max_in_flight < 1)
    throw Error(ErrorCode::InvalidArgument, "parallelism and max_in_flight must be >= 1");

  std::vector<Resolution> results(elements.size());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    results[i].element = elements[i];
    auto decision = filter::is_candidate(elements[i], filter_cfg);
    if (decision.candidate()) {
      candidates.push_back(i);
    } else {
      results[i].outcome = Outcome::not_indirection;
      results[i].reason = std::string(filter::to_string(*decision.rejected_by));
    }
  }
  if (candidates.empty()) return results;

  std::counting_semaphore<> decoders(options.parallelism);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < candidates.size();) {
      Resolution& r = results[candidates[k]];
      try {
        resolve_candidate(r, cache, fetcher, decoders);
      } catch (const std::exception& e) {
        r.outcome = Outcome::failed;
        r.reason = e.what();
      }
    }
  };

  const std::size_t threads = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(options.max_in_flight));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

ResolvedPage resolve_page(const std::string& page_url, const filter::FilterConfig& filter_cfg,
                          cache::MappingsCache& cache, Fetcher& fetcher, const ResolveOptions& options) {
  std::string document;
  try {
    document = fetcher.fetch(page_url).as_string();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::PageUnreachable, page_url + ": " + e.what());
  }

  const auto scan = rewriter::scan_html(document);
  std::vector<filter::ElementDescriptor> descriptors;
  descriptors.reserve(scan.elements.size());
  for (const auto& el : scan.elements) {
    auto d = el.descriptor;
    d.source_url = resolve_url(page_url, html::unescape(d.source_url));
    descriptors.push_back(std::move(d));
  }

  ResolvedPage page;
  page.resolutions = read_path(descriptors, filter_cfg, cache, fetcher, options.read);

  std::vector<rewriter::Replacement> replacements;
  for (std::size_t i = 0; i < scan.elements.size(); ++i) {
    const Resolution& r = page.resolutions[i];
    if (r.outcome != Outcome::replaced) continue;
    std::string src = options.inline_content && r.content ? rewriter::data_url(*r.content) : r.offsite_locator;
    replacements.push_back({scan.elements[i].src_span, html::escape(src), scan.elements[i].descriptor.source_url});
  }
  page.html = rewriter::rewrite_html(document, replacements);
  return page;
}

}  // namespace r2o::core
