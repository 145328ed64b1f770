#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "r2o/bench.hpp"
#include "r2o/cli.hpp"
#include "r2o/core.hpp"
#include "r2o/error.hpp"
#include "r2o/fetcher.hpp"
#include "r2o/firstparty.hpp"

namespace r2o::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::StoreUnavailable, "cannot write " + path);
}

std::string media_type_for(const std::string& path) {
  std::string ext = filter::subtype_from_url(path);
  if (ext == "png") return "image/png";
  if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
  if (ext == "gif") return "image/gif";
  if (ext == "txt") return "text/plain";
  return "application/octet-stream";
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw UsageError("--bind expects host:port");
  try {
    return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("--bind expects host:port");
  }
}

std::optional<std::pair<int, int>> parse_dims(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("dims");
    return std::pair{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError("dimensions must look like 800x600");
  }
}

qr::EcLevel parse_ec_flag(const std::string& s) {
  if (s == "L") return qr::EcLevel::L;
  if (s == "M") return qr::EcLevel::M;
  if (s == "Q") return qr::EcLevel::Q;
  if (s == "H") return qr::EcLevel::H;
  throw UsageError("--ec must be one of L, M, Q, H");
}

// The CLI keeps the mappings cache in an r2o-map/1 file between invocations.
void load_cache(cache::MappingsCache& cache, const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) return;
  auto bytes = read_file(path);
  cache.import_mappings(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void save_cache(const cache::MappingsCache& cache, const std::string& path) {
  if (!path.empty()) write_file(path, cache.export_mappings());
}

void wait_for_interrupt(int for_ms) {
  g_interrupted = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(for_ms);
  while (!g_interrupted && (for_ms <= 0 || std::chrono::steady_clock::now() < deadline))
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Content indirection toolkit: off-site hosting behind QR and #r2o schemata", "r2o"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> parallelism_flag;
  std::string firstparty_flag;
  app.add_option("--config", config_path, "INI configuration file (default: $R2O_CONFIG)");
  app.add_option("--seed", seed_flag, "Seed for object ids and benchmark URLs");
  app.add_option("--parallelism", parallelism_flag, "Concurrent decoders on the read path")->check(CLI::PositiveNumber);
  app.add_option("--firstparty", firstparty_flag, "First-party base URL");

  // serve-store
  auto* serve_store_cmd = app.add_subcommand("serve-store", "Serve the HTTP store protocol");
  std::string store_bind = "127.0.0.1:8090", store_root;
  int store_latency = 0, serve_for_ms = 0;
  serve_store_cmd->add_option("--bind", store_bind, "host:port");
  serve_store_cmd->add_option("--latency-ms", store_latency, "Simulated latency per request")->check(CLI::NonNegativeNumber);
  serve_store_cmd->add_option("--root", store_root, "Back the store with this directory instead of memory");
  serve_store_cmd->add_option("--for-ms", serve_for_ms, "Stop after this long (0: until interrupted)");

  // serve-firstparty
  auto* serve_fp_cmd = app.add_subcommand("serve-firstparty", "Serve the simulated first-party service");
  std::string fp_bind = "127.0.0.1:8081";
  int fp_delay = 11;
  serve_fp_cmd->add_option("--bind", fp_bind, "host:port");
  serve_fp_cmd->add_option("--delay-ms", fp_delay, "Delay on static photo responses")->check(CLI::NonNegativeNumber);
  serve_fp_cmd->add_option("--for-ms", serve_for_ms, "Stop after this long (0: until interrupted)");

  // create-album
  auto* album_cmd = app.add_subcommand("create-album", "Create an album on the first party");
  std::string album_title;
  album_cmd->add_option("title", album_title, "Album title")->required();

  // upload
  auto* upload_cmd = app.add_subcommand("upload", "Write path: host a file off-site, place a QR schema");
  std::string upload_album, upload_file, upload_provider, upload_caption, upload_pad, cache_file;
  upload_cmd->add_option("--album", upload_album)->required();
  upload_cmd->add_option("--file", upload_file)->required();
  upload_cmd->add_option("--provider", upload_provider)->required();
  upload_cmd->add_option("--caption", upload_caption);
  upload_cmd->add_option("--pad", upload_pad, "Pad the QR image to WxH");
  upload_cmd->add_option("--cache-file", cache_file, "r2o-map file holding the mappings cache");

  // resolve
  auto* resolve_cmd = app.add_subcommand("resolve", "Read path: resolve an album page");
  std::string resolve_page_url, resolve_out;
  bool resolve_inline = false;
  resolve_cmd->add_option("--page", resolve_page_url)->required();
  resolve_cmd->add_option("--out", resolve_out, "Write rewritten HTML here (default: stdout)");
  resolve_cmd->add_flag("--inline", resolve_inline, "Embed content as data: URLs");
  resolve_cmd->add_option("--cache-file", cache_file, "r2o-map file holding the mappings cache");

  // encode / decode
  auto* encode_cmd = app.add_subcommand("encode", "Encode a URL as a QR PNG, or as #r2o text with --text");
  std::string encode_url, encode_out, encode_ec = "M", encode_pad;
  int encode_size = 512;
  bool encode_text = false;
  encode_cmd->add_option("url", encode_url)->required();
  encode_cmd->add_option("--out", encode_out);
  encode_cmd->add_option("--ec", encode_ec, "L, M, Q or H");
  encode_cmd->add_option("--size", encode_size, "Edge length in pixels (0: module scale 1)")->check(CLI::NonNegativeNumber);
  encode_cmd->add_option("--pad", encode_pad, "Pad to WxH");
  encode_cmd->add_flag("--text", encode_text);

  auto* decode_cmd = app.add_subcommand("decode", "Decode a QR PNG and print its URL");
  std::string decode_file;
  decode_cmd->add_option("file", decode_file)->required();

  // cache
  auto* cache_cmd = app.add_subcommand("cache", "Manage an r2o-map cache file");
  cache_cmd->require_subcommand(1);
  auto* cache_export = cache_cmd->add_subcommand("export", "Write selected mappings");
  auto* cache_import = cache_cmd->add_subcommand("import", "Merge a mapping blob");
  auto* cache_stats = cache_cmd->add_subcommand("stats", "Print segment sizes");
  std::string select = "all", blob_path, export_out;
  for (auto* c : {cache_export, cache_import, cache_stats})
    c->add_option("--cache-file", cache_file)->required();
  cache_export->add_option("--select", select, "all | frequent | recent | prefix:<p>");
  cache_export->add_option("--out", export_out);
  cache_import->add_option("--in", blob_path)->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Latency benchmarks");
  bench_cmd->require_subcommand(1);
  auto* bench_decode_cmd = bench_cmd->add_subcommand("decode", "Decode-time distribution");
  auto* bench_providers_cmd = bench_cmd->add_subcommand("providers", "Per-host response times");
  auto* bench_e2e_cmd = bench_cmd->add_subcommand("e2e", "End-to-end resolution latency");
  std::size_t bench_count = 500, bench_reps = 10, bench_item = 44 * 1024, bench_iterations = 10;
  int bench_interval = 0, e2e_f = 11, e2e_o = 147;
  std::string csv_path, cdf_path;
  std::optional<double> max_ms, min_ms;
  bool check_bounds = false;
  bench_decode_cmd->add_option("--count", bench_count)->check(CLI::PositiveNumber);
  bench_decode_cmd->add_option("--max-ms", max_ms, "Fail if any decode exceeds this");
  bench_providers_cmd->add_option("--reps", bench_reps)->check(CLI::PositiveNumber);
  bench_providers_cmd->add_option("--item-size", bench_item);
  bench_providers_cmd->add_option("--interval-ms", bench_interval)->check(CLI::NonNegativeNumber);
  bench_providers_cmd->add_flag("--check", check_bounds, "Fail unless each median is within [preset, preset+20] ms");
  bench_e2e_cmd->add_option("--firstparty-delay", e2e_f)->check(CLI::NonNegativeNumber);
  bench_e2e_cmd->add_option("--offsite-delay", e2e_o)->check(CLI::NonNegativeNumber);
  bench_e2e_cmd->add_option("--iterations", bench_iterations)->check(CLI::PositiveNumber);
  bench_e2e_cmd->add_option("--min-ms", min_ms, "Fail if the cold median is below this");
  bench_e2e_cmd->add_option("--max-ms", max_ms, "Fail if the cold median is above this");
  for (auto* c : {bench_decode_cmd, bench_providers_cmd, bench_e2e_cmd}) {
    c->add_option("--csv", csv_path, "scenario,sample_ms output");
    c->add_option("--cdf-csv", cdf_path, "scenario,ms,fraction output");
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (config_path.empty())
      if (const char* env = std::getenv("R2O_CONFIG")) config_path = env;
    Config config;
    try {
      config = config_path.empty() ? default_config() : load_config(config_path);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (parallelism_flag) config.parallelism = *parallelism_flag;
    if (!firstparty_flag.empty()) config.firstparty_url = firstparty_flag;
    const std::uint64_t seed = seed_flag.value_or(std::random_device{}());

    if (*serve_store_cmd) {
      auto [host, port] = parse_bind(store_bind);
      store::ProviderDescriptor desc{"store", store_root.empty() ? store::ProviderKind::memory
                                                                 : store::ProviderKind::filesystem,
                                     "http://store.local", std::chrono::milliseconds{store_latency}};
      auto backing = make_provider({desc, store_root}, seed);
      store::StoreServer server(*backing, host, port);
      out << "serving store at " << server.base_url() << std::endl;
      wait_for_interrupt(serve_for_ms);
      server.stop();
      return 0;
    }
    if (*serve_fp_cmd) {
      auto [host, port] = parse_bind(fp_bind);
      firstparty::FirstPartyService service;
      firstparty::FirstPartyServer server(service, host, port, std::chrono::milliseconds{fp_delay});
      out << "serving first party at " << server.base_url() << std::endl;
      wait_for_interrupt(serve_for_ms);
      server.stop();
      return 0;
    }
    if (*album_cmd) {
      firstparty::HttpFirstPartyClient client(config.firstparty_url);
      out << client.create_album(album_title) << '\n';
      return 0;
    }
    if (*upload_cmd) {
      const ProviderConfig* provider_cfg = nullptr;
      try {
        provider_cfg = &find_provider(config, upload_provider);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      auto provider = make_provider(*provider_cfg, seed);
      firstparty::HttpFirstPartyClient fp(config.firstparty_url);
      cache::MappingsCache cache(config.cache);
      load_cache(cache, cache_file);
      store::ContentItem item{read_file(upload_file), media_type_for(upload_file)};
      core::WriteOptions options{config.qr, config.filter, parse_dims(upload_pad)};
      auto receipt = core::write_path(item, upload_caption.empty() ? std::nullopt : std::optional(upload_caption),
                                      upload_album, *provider, fp, cache, options);
      save_cache(cache, cache_file);
      out << "offsite_locator: " << receipt.offsite_locator << '\n'
          << "pseudo_locator: " << receipt.pseudo_locator << '\n'
          << "photo_id: " << receipt.photo_id << '\n'
          << "album_id: " << receipt.album_id << '\n';
      return 0;
    }
    if (*resolve_cmd) {
      cache::MappingsCache cache(config.cache);
      load_cache(cache, cache_file);
      HttpFetcher fetcher;
      core::ResolveOptions options;
      options.read.parallelism = config.parallelism;
      options.inline_content = resolve_inline;
      auto page = core::resolve_page(resolve_page_url, config.filter, cache, fetcher, options);
      save_cache(cache, cache_file);
      if (resolve_out.empty()) {
        out << page.html;
      } else {
        write_file(resolve_out, page.html);
        for (const auto& r : page.resolutions) {
          out << r.element.source_url << '\t' << core::to_string(r.outcome);
          if (r.via) out << '\t' << core::to_string(*r.via);
          if (!r.offsite_locator.empty()) out << '\t' << r.offsite_locator;
          if (r.outcome == core::Outcome::failed) out << '\t' << r.reason;
          out << '\n';
        }
      }
      return 0;
    }
    if (*encode_cmd) {
      if (encode_text) {
        out << codec::encode_text_indirection(encode_url) << '\n';
        return 0;
      }
      if (encode_out.empty()) throw UsageError("encode needs --out for PNG output");
      codec::QrConfig qr = config.qr;
      qr.ec_level = parse_ec_flag(encode_ec);
      qr.target_size = encode_size > 0 ? std::optional<int>(encode_size) : std::nullopt;
      auto image = codec::encode_qr({encode_url, MediaClass::image, {}}, qr);
      if (auto pad = parse_dims(encode_pad)) image = codec::pad_with_border(image, pad->first, pad->second);
      auto png = codec::to_png(image);
      write_file(encode_out, std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
      out << encode_out << ": " << image.width << "x" << image.height << '\n';
      return 0;
    }
    if (*decode_cmd) {
      auto payload = codec::decode_qr(codec::from_png(read_file(decode_file)));
      out << payload.locator << '\n';
      for (const auto& [k, v] : payload.extra) out << k << '=' << v << '\n';
      return 0;
    }
    if (*cache_cmd) {
      cache::MappingsCache cache(config.cache);
      load_cache(cache, cache_file);
      if (*cache_export) {
        cache::Selection selection;
        if (select == "all") selection = cache::Selection::all();
        else if (select == "frequent") selection = cache::Selection::frequent();
        else if (select == "recent") selection = cache::Selection::recent();
        else if (select.starts_with("prefix:")) selection = cache::Selection::by_prefix(select.substr(7));
        else throw UsageError("--select must be all, frequent, recent or prefix:<p>");
        const std::string blob = cache.export_mappings(selection);
        if (export_out.empty()) out << blob;
        else write_file(export_out, blob);
      } else if (*cache_import) {
        auto bytes = read_file(blob_path);
        auto result = cache.import_mappings(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
        save_cache(cache, cache_file);
        out << "merged " << result.merged << ", skipped " << result.skipped << '\n';
      } else {
        auto s = cache.stats();
        out << "frequent " << s.frequent << "\nrecent " << s.recent << '\n';
      }
      return 0;
    }
    if (*bench_cmd) {
      std::vector<bench::BenchReport> reports;
      bool violated = false;
      if (*bench_decode_cmd) {
        bench::DecodeBenchOptions options;
        options.seed = seed;
        reports.push_back(bench::bench_decode(bench_count, options));
        bench::print_summary(out, reports.back());
        if (max_ms && reports.back().cdf_points.back().first > *max_ms) violated = true;
      } else if (*bench_providers_cmd) {
        std::vector<store::ProviderDescriptor> presets;
        for (const auto& [name, provider] : config.providers)
          if (provider.descriptor.kind == store::ProviderKind::memory) presets.push_back(provider.descriptor);
        std::sort(presets.begin(), presets.end(), [](const auto& a, const auto& b) {
          return a.simulated_latency.value_or(std::chrono::milliseconds{0}) <
                 b.simulated_latency.value_or(std::chrono::milliseconds{0});
        });
        auto rows = bench::bench_providers(presets, bench_item, bench_reps, std::chrono::milliseconds{bench_interval}, seed);
        bench::print_provider_table(out, rows);
        for (auto& row : rows) {
          if (check_bounds && (row.median_ms < row.preset_ms || row.median_ms > row.preset_ms + 20)) violated = true;
          reports.push_back(bench::make_report(row.name, row.samples));
        }
      } else {
        bench::EndToEndOptions options;
        options.firstparty_delay = std::chrono::milliseconds{e2e_f};
        options.offsite_delay = std::chrono::milliseconds{e2e_o};
        options.iterations = bench_iterations;
        options.seed = seed;
        auto result = bench::bench_end_to_end(options);
        bench::print_summary(out, result.cold);
        bench::print_summary(out, result.warm);
        out << "cache saving: " << result.saving_ms << " ms\n";
        if ((min_ms && result.cold.median < *min_ms) || (max_ms && result.cold.median > *max_ms)) violated = true;
        reports = {result.cold, result.warm};
      }
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        bench::write_samples_csv(csv, reports);
      }
      if (!cdf_path.empty()) {
        std::ofstream cdf(cdf_path);
        bench::write_cdf_csv(cdf, reports);
      }
      if (violated) {
        err << "r2o: benchmark bound violated\n";
        return 1;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "r2o: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "r2o: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace r2o::cli
