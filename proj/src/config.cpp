#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <sstream>

#include "r2o/cli.hpp"
#include "r2o/error.hpp"

namespace r2o::cli {
namespace {

namespace pt = boost::property_tree;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    auto first = item.find_first_not_of(" \t");
    auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

qr::EcLevel parse_ec(const std::string& s) {
  if (s == "L") return qr::EcLevel::L;
  if (s == "M") return qr::EcLevel::M;
  if (s == "Q") return qr::EcLevel::Q;
  if (s == "H") return qr::EcLevel::H;
  throw Error(ErrorCode::InvalidArgument, "ec_level must be one of L, M, Q, H");
}

// get_optional<T> would silently drop values that fail to convert.
template <typename T>
std::optional<T> value(const pt::ptree& section, const char* key) {
  auto child = section.get_child_optional(key);
  if (!child) return std::nullopt;
  return child->get_value<T>();
}

template <typename T>
void read(const pt::ptree& section, const char* key, T& target) {
  if (auto v = value<T>(section, key)) target = *v;
}

}  // namespace

Config default_config() {
  Config config;
  for (auto& preset : store::hosting_presets()) {
    std::string name = preset.name;
    config.providers[name] = {preset, {}};
  }
  return config;
}

void apply_ini(Config& config, std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }

  try {
    for (const auto& [section, body] : tree) {
      if (section == "filter") {
        if (auto v = body.get_optional<std::string>("path_prefixes")) config.filter.path_prefixes = split_list(*v);
        read(body, "min_edge", config.filter.min_edge);
        read(body, "max_edge", config.filter.max_edge);
        read(body, "require_square", config.filter.require_square);
        if (auto v = body.get_optional<std::string>("excluded_subtypes")) {
          auto list = split_list(*v);
          config.filter.excluded_subtypes = {list.begin(), list.end()};
        }
        if (auto v = body.get_optional<std::string>("caption_marker"))
          config.filter.caption_marker = v->empty() ? std::nullopt : std::optional<std::string>(*v);
        filter::validate(config.filter);
      } else if (section == "cache") {
        read(body, "n_frequent", config.cache.n_frequent);
        read(body, "m_recent", config.cache.m_recent);
      } else if (section == "qr") {
        if (auto v = body.get_optional<std::string>("ec_level")) config.qr.ec_level = parse_ec(*v);
        read(body, "min_version", config.qr.min_version);
        read(body, "module_scale", config.qr.module_scale);
        if (auto v = value<int>(body, "target_size"))
          config.qr.target_size = *v > 0 ? std::optional<int>(*v) : std::nullopt;
      } else if (section == "firstparty") {
        read(body, "url", config.firstparty_url);
      } else if (section == "core") {
        read(body, "parallelism", config.parallelism);
      } else if (section.starts_with("provider.")) {
        ProviderConfig provider;
        provider.descriptor.name = section.substr(9);
        auto kind = store::parse_provider_kind(body.get<std::string>("kind", "memory"));
        if (!kind) throw Error(ErrorCode::InvalidArgument, "provider " + provider.descriptor.name + ": unknown kind");
        provider.descriptor.kind = *kind;
        read(body, "base_url", provider.descriptor.base_url);
        if (auto ms = value<int>(body, "latency_ms")) {
          if (*ms < 0) throw Error(ErrorCode::InvalidArgument, "latency_ms must be >= 0");
          provider.descriptor.simulated_latency = std::chrono::milliseconds{*ms};
        }
        provider.root = body.get<std::string>("root", "");
        if (provider.descriptor.kind == store::ProviderKind::filesystem && provider.root.empty())
          throw Error(ErrorCode::InvalidArgument, "provider " + provider.descriptor.name + ": filesystem needs root");
        config.providers[provider.descriptor.name] = std::move(provider);
      } else {
        throw Error(ErrorCode::InvalidArgument, "config: unknown section [" + section + "]");
      }
    }
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  if (config.parallelism < 1) throw Error(ErrorCode::InvalidArgument, "parallelism must be >= 1");
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config " + path.string());
  Config config = default_config();
  apply_ini(config, in);
  return config;
}

const ProviderConfig& find_provider(const Config& config, const std::string& name) {
  auto it = config.providers.find(name);
  if (it == config.providers.end()) throw Error(ErrorCode::InvalidArgument, "unknown provider '" + name + "'");
  return it->second;
}

std::unique_ptr<store::Provider> make_provider(const ProviderConfig& provider, std::uint64_t seed) {
  store::StoreOptions options{store::kDefaultMaxPayload, seed};
  switch (provider.descriptor.kind) {
    case store::ProviderKind::memory: return std::make_unique<store::MemoryProvider>(provider.descriptor, options);
    case store::ProviderKind::filesystem:
      return std::make_unique<store::FilesystemProvider>(provider.descriptor, provider.root, options);
    case store::ProviderKind::http: return std::make_unique<store::HttpStoreClient>(provider.descriptor);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown provider kind");
}

}  // namespace r2o::cli
