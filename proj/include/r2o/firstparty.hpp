#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "r2o/store.hpp"
#include "r2o/url.hpp"

namespace r2o::firstparty {

struct Comment {
  std::string author;
  std::string body;
  std::optional<ContentLocator> preview_locator;

  friend bool operator==(const Comment&, const Comment&) = default;
};

struct PhotoObject {
  std::string photo_id;
  store::ContentItem image;
  int width = 0;
  int height = 0;
  std::string caption;
  std::vector<Comment> comments;
  ContentLocator static_url;
};

struct Album {
  std::string album_id;
  std::string title;
  std::vector<std::string> photo_ids;
};

struct UploadedPhoto {
  std::string photo_id;
  ContentLocator static_url;
};

inline constexpr std::string_view kPhotosPath = "/fp/photos/";
inline constexpr std::string_view kPreviewAuthor = "r2o";

/// First http(s) URL inside free text, if any.
std::optional<ContentLocator> find_url(std::string_view text);

/// In-process social service: albums of PNG photos with captions and
/// comments. Reads run concurrently; mutations are serialized.
class FirstPartyService {
 public:
  /// `public_base` ("http://host:port") prefixes static URLs; empty keeps
  /// them as absolute paths.
  explicit FirstPartyService(std::string public_base = "");

  void set_public_base(std::string base);
  std::string public_base() const;

  std::string create_album(const std::string& title);
  /// Throws AlbumNotFound, UnsupportedMediaType.
  UploadedPhoto upload_photo(const std::string& album_id, const store::ContentItem& image, const std::string& caption);
  /// Throws PhotoNotFound.
  Comment add_comment(const std::string& photo_id, const std::string& author, const std::string& body);
  /// Comment "original: <locator>" by "r2o". Throws PhotoNotFound.
  Comment generate_preview_comment(const std::string& photo_id, const ContentLocator& offsite_locator);
  /// Throws AlbumNotFound.
  std::string render_album_page(const std::string& album_id) const;

  /// Throws PhotoNotFound.
  PhotoObject photo(const std::string& photo_id) const;
  /// Throws AlbumNotFound.
  Album album(const std::string& album_id) const;

 private:
  mutable std::shared_mutex mutex_;
  std::string public_base_;
  std::uint64_t next_album_ = 1;
  std::uint64_t next_photo_ = 1;
  std::map<std::string, Album> albums_;
  std::map<std::string, PhotoObject> photos_;
};

/// What the write path needs from a first party.
class FirstPartyClient {
 public:
  virtual ~FirstPartyClient() = default;
  virtual std::string create_album(const std::string& title) = 0;
  virtual UploadedPhoto upload_photo(const std::string& album_id, const store::ContentItem& image,
                                     const std::string& caption) = 0;
  virtual std::size_t add_comment(const std::string& photo_id, const std::string& author, const std::string& body) = 0;
};

class LocalFirstPartyClient final : public FirstPartyClient {
 public:
  explicit LocalFirstPartyClient(FirstPartyService& service) : service_(service) {}
  std::string create_album(const std::string& title) override { return service_.create_album(title); }
  UploadedPhoto upload_photo(const std::string& album_id, const store::ContentItem& image,
                             const std::string& caption) override {
    return service_.upload_photo(album_id, image, caption);
  }
  std::size_t add_comment(const std::string& photo_id, const std::string& author, const std::string& body) override;

 private:
  FirstPartyService& service_;
};

/// Speaks the /fp HTTP API. Transport failures raise StoreUnavailable.
class HttpFirstPartyClient final : public FirstPartyClient {
 public:
  explicit HttpFirstPartyClient(std::string base_url) : base_url_(std::move(base_url)) {}
  std::string create_album(const std::string& title) override;
  UploadedPhoto upload_photo(const std::string& album_id, const store::ContentItem& image,
                             const std::string& caption) override;
  std::size_t add_comment(const std::string& photo_id, const std::string& author, const std::string& body) override;

 private:
  std::string base_url_;
};

/// Serves the /fp HTTP API. Static photo responses are held back by
/// `photo_delay` to play the role of the service's CDN.
class FirstPartyServer {
 public:
  FirstPartyServer(FirstPartyService& service, std::string host = "127.0.0.1", int port = 0,
                   std::chrono::milliseconds photo_delay = std::chrono::milliseconds{11});
  ~FirstPartyServer();

  FirstPartyServer(const FirstPartyServer&) = delete;
  FirstPartyServer& operator=(const FirstPartyServer&) = delete;

  int port() const noexcept { return port_; }
  std::string base_url() const;
  std::string album_page_url(const std::string& album_id) const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string host_;
  int port_ = 0;
};

}  // namespace r2o::firstparty
