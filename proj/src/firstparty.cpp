#include "r2o/firstparty.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>

#include "r2o/error.hpp"
#include "r2o/html.hpp"
#include "r2o/png.hpp"

namespace r2o::firstparty {

std::optional<ContentLocator> find_url(std::string_view text) {
  std::size_t best = std::string_view::npos;
  for (std::string_view scheme : {"http://", "https://"}) best = std::min(best, text.find(scheme));
  while (best != std::string_view::npos) {
    std::size_t end = best;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
           std::string_view("\"'<>").find(text[end]) == std::string_view::npos)
      ++end;
    std::string_view candidate = text.substr(best, end - best);
    while (!candidate.empty() && std::string_view(".,;:!?)]").find(candidate.back()) != std::string_view::npos)
      candidate.remove_suffix(1);
    if (is_valid_locator(candidate)) return ContentLocator(candidate);
    std::size_t next = std::string_view::npos;
    for (std::string_view scheme : {"http://", "https://"}) next = std::min(next, text.find(scheme, best + 1));
    best = next;
  }
  return std::nullopt;
}

FirstPartyService::FirstPartyService(std::string public_base) : public_base_(std::move(public_base)) {}

void FirstPartyService::set_public_base(std::string base) {
  std::unique_lock lock(mutex_);
  public_base_ = std::move(base);
}

std::string FirstPartyService::public_base() const {
  std::shared_lock lock(mutex_);
  return public_base_;
}

std::string FirstPartyService::create_album(const std::string& title) {
  std::unique_lock lock(mutex_);
  std::string id = "a" + std::to_string(next_album_++);
  albums_.emplace(id, Album{id, title, {}});
  return id;
}

UploadedPhoto FirstPartyService::upload_photo(const std::string& album_id, const store::ContentItem& image,
                                              const std::string& caption) {
  int width = 0, height = 0;
  if (image.media_type != "image/png" || !png::read_dimensions(image.bytes, width, height))
    throw Error(ErrorCode::UnsupportedMediaType, "photos must be PNG, got " + image.media_type);

  std::unique_lock lock(mutex_);
  auto album = albums_.find(album_id);
  if (album == albums_.end()) throw Error(ErrorCode::AlbumNotFound, album_id);
  PhotoObject photo;
  photo.photo_id = std::to_string(next_photo_++);
  photo.image = image;
  photo.width = width;
  photo.height = height;
  photo.caption = caption;
  photo.static_url = public_base_ + std::string(kPhotosPath) + photo.photo_id + ".png";
  album->second.photo_ids.push_back(photo.photo_id);
  UploadedPhoto result{photo.photo_id, photo.static_url};
  photos_.emplace(photo.photo_id, std::move(photo));
  return result;
}

Comment FirstPartyService::add_comment(const std::string& photo_id, const std::string& author,
                                       const std::string& body) {
  Comment comment{author, body, find_url(body)};
  std::unique_lock lock(mutex_);
  auto it = photos_.find(photo_id);
  if (it == photos_.end()) throw Error(ErrorCode::PhotoNotFound, photo_id);
  it->second.comments.push_back(comment);
  return comment;
}

Comment FirstPartyService::generate_preview_comment(const std::string& photo_id, const ContentLocator& offsite_locator) {
  if (!is_valid_locator(offsite_locator)) throw Error(ErrorCode::InvalidArgument, "invalid locator " + offsite_locator);
  return add_comment(photo_id, std::string(kPreviewAuthor), "original: " + offsite_locator);
}

std::string FirstPartyService::render_album_page(const std::string& album_id) const {
  std::shared_lock lock(mutex_);
  auto album = albums_.find(album_id);
  if (album == albums_.end()) throw Error(ErrorCode::AlbumNotFound, album_id);
  const std::string title = html::escape(album->second.title);

  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" << title << "</title>\n</head>\n"
      << "<body>\n<h1>" << title << "</h1>\n<div class=\"album\" data-album=\"" << html::escape(album_id) << "\">\n";
  for (const auto& pid : album->second.photo_ids) {
    const PhotoObject& p = photos_.at(pid);
    out << "<div class=\"photo\" data-photo=\"" << html::escape(pid) << "\">\n"
        << "<img src=\"" << html::escape(p.static_url) << "\" width=\"" << p.width << "\" height=\"" << p.height
        << "\" alt=\"\">\n"
        << "<p class=\"caption\">" << html::escape(p.caption) << "</p>\n"
        << "<ul class=\"comments\">\n";
    for (const auto& c : p.comments) {
      out << "<li class=\"comment\"><span class=\"author\">" << html::escape(c.author) << "</span> <span class=\"body\">"
          << html::escape(c.body) << "</span>";
      if (c.preview_locator)
        out << " <a rel=\"preview\" href=\"" << html::escape(*c.preview_locator) << "\">"
            << html::escape(*c.preview_locator) << "</a>";
      out << "</li>\n";
    }
    out << "</ul>\n</div>\n";
  }
  out << "</div>\n</body>\n</html>\n";
  return out.str();
}

PhotoObject FirstPartyService::photo(const std::string& photo_id) const {
  std::shared_lock lock(mutex_);
  auto it = photos_.find(photo_id);
  if (it == photos_.end()) throw Error(ErrorCode::PhotoNotFound, photo_id);
  return it->second;
}

Album FirstPartyService::album(const std::string& album_id) const {
  std::shared_lock lock(mutex_);
  auto it = albums_.find(album_id);
  if (it == albums_.end()) throw Error(ErrorCode::AlbumNotFound, album_id);
  return it->second;
}

std::size_t LocalFirstPartyClient::add_comment(const std::string& photo_id, const std::string& author,
                                               const std::string& body) {
  service_.add_comment(photo_id, author, body);
  return service_.photo(photo_id).comments.size() - 1;
}

}  // namespace r2o::firstparty
