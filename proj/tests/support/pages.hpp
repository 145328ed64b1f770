#pragma once

// Random album pages built through the first-party simulator: QR schemata
// written via the write path mixed with ordinary photos and comments.

#include <random>
#include <string>

#include "r2o/cache.hpp"
#include "r2o/core.hpp"
#include "world.hpp"

namespace testing_support {

struct AlbumMix {
  std::string album_id;
  int schemata = 0;
  int ordinary = 0;
};

inline AlbumMix populate_album(World& world, r2o::cache::MappingsCache& cache, std::mt19937& rng, int max_photos = 6) {
  using r2o::store::ContentItem;
  AlbumMix mix;
  mix.album_id = world.service.create_album("album <" + std::to_string(rng() % 1000) + "> & co");
  r2o::firstparty::LocalFirstPartyClient fp(world.service);
  const int photos = static_cast<int>(rng() % (max_photos + 1));
  for (int i = 0; i < photos; ++i) {
    std::optional<std::string> caption;
    if (rng() % 2) caption = "caption \"" + std::to_string(rng() % 100) + "\" <i>";
    if (rng() % 2) {
      auto original = random_png(16 + static_cast<int>(rng() % 32), rng());
      auto receipt = r2o::core::write_path(original, caption, mix.album_id, world.offsite, fp, cache);
      if (rng() % 3 == 0) world.service.generate_preview_comment(receipt.photo_id, receipt.offsite_locator);
      ++mix.schemata;
    } else {
      // Non-square so the filter turns it away.
      const int w = 100 + static_cast<int>(rng() % 50), h = w + 1 + static_cast<int>(rng() % 40);
      r2o::png::GrayImage img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 200)};
      auto up = world.service.upload_photo(mix.album_id, {r2o::png::encode(img), "image/png"}, caption.value_or(""));
      if (rng() % 2) world.service.add_comment(up.photo_id, "v", "look https://elsewhere.example/" + std::to_string(i));
      ++mix.ordinary;
    }
  }
  return mix;
}

}  // namespace testing_support
