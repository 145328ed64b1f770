#pragma once

// In-process first party and off-site store wired to a RoutingFetcher, so
// read and write paths can run without sockets.

#include <chrono>
#include <random>
#include <string>
#include <thread>

#include "r2o/error.hpp"
#include "r2o/fetcher.hpp"
#include "r2o/firstparty.hpp"
#include "r2o/png.hpp"
#include "r2o/store.hpp"

namespace testing_support {

inline constexpr const char* kFirstPartyBase = "http://fp.test";
inline constexpr const char* kOffsiteBase = "http://offsite.test";

/// Random-noise grayscale PNG; noise keeps it from compressing well.
inline r2o::store::ContentItem random_png(int edge, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  r2o::png::GrayImage img{edge, edge, std::vector<std::uint8_t>(static_cast<std::size_t>(edge) * edge)};
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
  return {r2o::png::encode(img), "image/png"};
}

struct World {
  explicit World(std::chrono::milliseconds firstparty_delay = std::chrono::milliseconds{0},
                 std::chrono::milliseconds offsite_delay = std::chrono::milliseconds{0}, std::uint64_t seed = 7)
      : service(kFirstPartyBase),
        offsite({"offsite", r2o::store::ProviderKind::memory, kOffsiteBase, offsite_delay}, {.seed = seed}),
        delay(firstparty_delay) {
    fetcher.add_route(std::string(kFirstPartyBase) + "/fp/photos/", [this](const std::string& url) {
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
      const auto name = url.substr(url.rfind('/') + 1);
      const auto dot = name.find('.');
      return service.photo(name.substr(0, dot)).image;
    });
    fetcher.add_route(std::string(kFirstPartyBase) + "/fp/albums/", [this](const std::string& url) {
      const std::string prefix = std::string(kFirstPartyBase) + "/fp/albums/";
      const auto id = url.substr(prefix.size(), url.find('/', prefix.size()) - prefix.size());
      try {
        return r2o::store::ContentItem::from_string(service.render_album_page(id), "text/html");
      } catch (const r2o::Error&) {
        throw r2o::Error(r2o::ErrorCode::NotFound, url);
      }
    });
    fetcher.add_provider(offsite);
  }

  std::string page_url(const std::string& album) const {
    return std::string(kFirstPartyBase) + "/fp/albums/" + album + "/page";
  }

  r2o::firstparty::FirstPartyService service;
  r2o::store::MemoryProvider offsite;
  r2o::RoutingFetcher fetcher;
  std::chrono::milliseconds delay;
};

}  // namespace testing_support
