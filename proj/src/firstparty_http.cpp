#include <thread>

#include "http_client.hpp"
#include "r2o/firstparty.hpp"

namespace r2o::firstparty {
namespace {

int status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::AlbumNotFound:
    case ErrorCode::PhotoNotFound: return 404;
    case ErrorCode::UnsupportedMediaType: return 415;
    case ErrorCode::InvalidArgument: return 400;
    default: return 500;
  }
}

void check_status(const httplib::Result& res, const std::string& url, int expected, ErrorCode not_found) {
  if (!res) detail::throw_transport(res, url);
  if (res->status == expected) return;
  if (res->status == 404) throw Error(not_found, url);
  if (res->status == 415) throw Error(ErrorCode::UnsupportedMediaType, url);
  throw Error(ErrorCode::StoreUnavailable, url + " answered " + std::to_string(res->status));
}

}  // namespace

struct FirstPartyServer::Impl {
  httplib::Server server;
  std::thread thread;
};

FirstPartyServer::FirstPartyServer(FirstPartyService& service, std::string host, int port,
                                   std::chrono::milliseconds photo_delay)
    : impl_(std::make_unique<Impl>()), host_(std::move(host)) {
  auto& srv = impl_->server;
  srv.new_task_queue = [] { return detail::make_pool().release(); };
  srv.set_socket_options(detail::exclusive_socket_options);

  auto guarded = [](auto&& handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        res.status = status_for(e);
        res.set_content(e.what(), "text/plain");
      }
    };
  };

  srv.Post("/fp/albums", guarded([&service](const httplib::Request& req, httplib::Response& res) {
             res.status = 201;
             res.set_content(service.create_album(req.body), "text/plain");
           }));
  srv.Post(R"(/fp/albums/([^/]+)/photos)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
             store::ContentItem image;
             image.bytes.assign(req.body.begin(), req.body.end());
             image.media_type = req.has_header("Content-Type") ? req.get_header_value("Content-Type") : "image/png";
             auto uploaded = service.upload_photo(req.matches[1], image, req.get_header_value("X-Caption"));
             res.status = 201;
             res.set_content(uploaded.photo_id + "\n" + uploaded.static_url + "\n", "text/plain");
           }));
  srv.Get(R"(/fp/photos/([^/]+)\.png)", guarded([&service, photo_delay](const httplib::Request& req,
                                                                        httplib::Response& res) {
            if (photo_delay.count() > 0) std::this_thread::sleep_for(photo_delay);
            auto photo = service.photo(req.matches[1]);
            res.status = 200;
            res.set_content(std::string(photo.image.bytes.begin(), photo.image.bytes.end()), "image/png");
          }));
  srv.Get(R"(/fp/albums/([^/]+)/page)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
            res.status = 200;
            res.set_content(service.render_album_page(req.matches[1]), "text/html; charset=utf-8");
          }));
  srv.Post(R"(/fp/photos/([^/]+)/comments)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
             const std::string photo_id = req.matches[1];
             service.add_comment(photo_id, req.get_header_value("X-Author"), req.body);
             res.status = 201;
             res.set_content(std::to_string(service.photo(photo_id).comments.size() - 1), "text/plain");
           }));

  port_ = port == 0 ? srv.bind_to_any_port(host_) : (srv.bind_to_port(host_, port) ? port : -1);
  if (port_ <= 0) throw Error(ErrorCode::BindFailure, "cannot bind " + host_ + ":" + std::to_string(port));
  if (service.public_base().empty()) service.set_public_base(base_url());
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  srv.wait_until_ready();
}

FirstPartyServer::~FirstPartyServer() { stop(); }

std::string FirstPartyServer::base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

std::string FirstPartyServer::album_page_url(const std::string& album_id) const {
  return base_url() + "/fp/albums/" + album_id + "/page";
}

void FirstPartyServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

std::string HttpFirstPartyClient::create_album(const std::string& title) {
  const std::string url = base_url_ + "/fp/albums";
  std::string path;
  auto client = detail::make_client(url, path);
  auto res = client->Post(path, title, "text/plain");
  check_status(res, url, 201, ErrorCode::AlbumNotFound);
  return res->body;
}

UploadedPhoto HttpFirstPartyClient::upload_photo(const std::string& album_id, const store::ContentItem& image,
                                                 const std::string& caption) {
  const std::string url = base_url_ + "/fp/albums/" + album_id + "/photos";
  std::string path;
  auto client = detail::make_client(url, path);
  httplib::Headers headers{{"X-Caption", caption}};
  auto res = client->Post(path, headers, reinterpret_cast<const char*>(image.bytes.data()), image.bytes.size(),
                          image.media_type);
  check_status(res, url, 201, ErrorCode::AlbumNotFound);
  const std::string& body = res->body;
  auto nl = body.find('\n');
  if (nl == std::string::npos) throw Error(ErrorCode::StoreUnavailable, "malformed upload response from " + url);
  UploadedPhoto out{body.substr(0, nl), body.substr(nl + 1)};
  while (!out.static_url.empty() && (out.static_url.back() == '\n' || out.static_url.back() == '\r'))
    out.static_url.pop_back();
  out.static_url = resolve_url(base_url_, out.static_url);
  return out;
}

std::size_t HttpFirstPartyClient::add_comment(const std::string& photo_id, const std::string& author,
                                              const std::string& body) {
  const std::string url = base_url_ + "/fp/photos/" + photo_id + "/comments";
  std::string path;
  auto client = detail::make_client(url, path);
  httplib::Headers headers{{"X-Author", author}};
  auto res = client->Post(path, headers, body, "text/plain");
  check_status(res, url, 201, ErrorCode::PhotoNotFound);
  return std::stoul(res->body);
}

}  // namespace r2o::firstparty
