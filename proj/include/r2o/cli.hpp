#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "r2o/cache.hpp"
#include "r2o/codec.hpp"
#include "r2o/filter.hpp"
#include "r2o/store.hpp"

namespace r2o::cli {

struct ProviderConfig {
  store::ProviderDescriptor descriptor;
  std::filesystem::path root;  // filesystem providers only
};

struct Config {
  filter::FilterConfig filter;
  cache::CacheConfig cache;
  codec::QrConfig qr;
  std::map<std::string, ProviderConfig> providers;
  std::string firstparty_url = "http://127.0.0.1:8081";
  int parallelism = 8;
};

/// Built-in settings: the hosting presets as in-memory providers.
Config default_config();

/// Overlays an INI document. Sections: [filter], [cache], [qr],
/// [firstparty] url, [core] parallelism, [provider.<name>] kind, base_url,
/// latency_ms, root. Throws Error(InvalidArgument).
void apply_ini(Config& config, std::istream& in);
Config load_config(const std::filesystem::path& path);

/// Throws Error(InvalidArgument) for unknown names.
const ProviderConfig& find_provider(const Config& config, const std::string& name);
std::unique_ptr<store::Provider> make_provider(const ProviderConfig& provider, std::uint64_t seed);

/// Entry point for the r2o tool: 0 success, 1 operational error, 2 usage error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace r2o::cli
