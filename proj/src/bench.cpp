#include "r2o/bench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>

#include "r2o/cache.hpp"
#include "r2o/codec.hpp"
#include "r2o/core.hpp"
#include "r2o/error.hpp"
#include "r2o/fetcher.hpp"
#include "r2o/firstparty.hpp"
#include "r2o/png.hpp"

namespace r2o::bench {

using Clock = std::chrono::steady_clock;

namespace {

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Restores the caller's formatting on scope exit.
class StreamState {
 public:
  explicit StreamState(std::ostream& out) : out_(out), flags_(out.flags()), precision_(out.precision()) {}
  ~StreamState() {
    out_.flags(flags_);
    out_.precision(precision_);
  }

 private:
  std::ostream& out_;
  std::ios::fmtflags flags_;
  std::streamsize precision_;
};

}  // namespace

BenchReport make_report(std::string scenario, std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "report needs at least one sample");
  BenchReport r;
  r.scenario = std::move(scenario);
  r.samples = std::move(samples);
  std::vector<double> sorted = r.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  r.median = store::median(sorted);
  r.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  r.p95 = sorted[static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n))) - 1];
  r.cdf_points.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    r.cdf_points.emplace_back(sorted[i], i + 1 == n ? 1.0 : static_cast<double>(i + 1) / static_cast<double>(n));
  return r;
}

std::string random_url(std::uint64_t& state, std::size_t length) {
  static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789-_";
  std::string url = "https://offsite.example/v1/objects/";
  if (length < url.size() + 1) length = url.size() + 1;
  while (url.size() < length) url += kChars[splitmix(state) % (sizeof(kChars) - 1)];
  return url;
}

BenchReport bench_decode(std::size_t count, const DecodeBenchOptions& options) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  std::uint64_t state = options.seed;
  auto next_symbol = [&] {
    return codec::encode_qr({random_url(state, 40 + splitmix(state) % 160), MediaClass::image, {}});
  };

  std::uint64_t warm_state = options.seed ^ 0x5bd1e995u;
  for (int w = 0; w < options.warmup; ++w)
    (void)codec::decode_qr(codec::encode_qr({random_url(warm_state, 64), MediaClass::image, {}}));

  std::vector<double> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const codec::PseudoImage symbol = next_symbol();
    auto start = Clock::now();
    (void)codec::decode_qr(symbol);
    double ms = elapsed_ms(start, Clock::now());
    if (ms <= 0.0) {
      const int reps = std::max(1, options.repetitions);
      start = Clock::now();
      for (int r = 0; r < reps; ++r) (void)codec::decode_qr(symbol);
      ms = elapsed_ms(start, Clock::now()) / reps;
    }
    samples.push_back(ms);
  }
  return make_report("decode", std::move(samples));
}

std::vector<ProviderRow> bench_providers(const std::vector<store::ProviderDescriptor>& presets, std::size_t item_size,
                                         std::size_t repetitions, std::chrono::milliseconds interval,
                                         std::uint64_t seed) {
  if (presets.empty()) throw Error(ErrorCode::InvalidArgument, "no provider presets");
  std::vector<ProviderRow> rows;
  for (const auto& preset : presets) {
    store::MemoryProvider provider(preset, {store::kDefaultMaxPayload, seed});
    auto measured = store::measure_store(provider, item_size, repetitions, interval, seed);
    rows.push_back({preset.name,
                    preset.simulated_latency ? static_cast<double>(preset.simulated_latency->count()) : 0.0,
                    measured.median_ms, std::move(measured.samples_ms)});
  }
  return rows;
}

EndToEndResult bench_end_to_end(const EndToEndOptions& options) {
  if (options.firstparty_delay.count() < 0 || options.offsite_delay.count() < 0)
    throw Error(ErrorCode::InvalidArgument, "delays must be >= 0");
  if (options.iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");

  store::MemoryProvider backing({"offsite", store::ProviderKind::memory, "http://offsite.invalid", options.offsite_delay},
                                {store::kDefaultMaxPayload, options.seed});
  store::StoreServer store_server(backing);
  store::HttpStoreClient offsite({"offsite", store::ProviderKind::http, store_server.base_url(), std::nullopt});

  firstparty::FirstPartyService service;
  firstparty::FirstPartyServer fp_server(service, "127.0.0.1", 0, options.firstparty_delay);
  firstparty::HttpFirstPartyClient fp_client(fp_server.base_url());

  // A 44 KB-class PNG stands in for the user's photo.
  std::mt19937_64 rng(options.seed);
  png::GrayImage photo{210, 210, std::vector<std::uint8_t>(210 * 210)};
  for (auto& p : photo.pixels) p = static_cast<std::uint8_t>(rng());
  const store::ContentItem original{png::encode(photo), "image/png"};

  cache::MappingsCache cache;
  const std::string album = fp_client.create_album("bench");
  core::write_path(original, std::string("bench"), album, offsite, fp_client, cache);
  const std::string page_url = fp_server.album_page_url(album);
  const filter::FilterConfig filter_cfg;
  HttpFetcher fetcher;

  auto run = [&](bool warm) {
    cache::MappingsCache cold_cache;
    cache::MappingsCache& active = warm ? cache : cold_cache;
    auto once = [&] {
      if (!warm) cold_cache.clear();
      const auto start = Clock::now();
      auto page = core::resolve_page(page_url, filter_cfg, active, fetcher);
      const double ms = elapsed_ms(start, Clock::now());
      const bool ok = page.resolutions.size() == 1 && page.resolutions[0].outcome == core::Outcome::replaced &&
                      page.resolutions[0].via == (warm ? core::Via::cache_hit : core::Via::decoded);
      if (!ok) throw Error(ErrorCode::StoreUnavailable, "end-to-end resolution did not replace the schema");
      return ms;
    };
    for (int w = 0; w < options.warmup; ++w) once();
    std::vector<double> samples;
    for (std::size_t i = 0; i < options.iterations; ++i) samples.push_back(once());
    return samples;
  };

  EndToEndResult result;
  const std::string label = "e2e(f=" + std::to_string(options.firstparty_delay.count()) +
                            ",o=" + std::to_string(options.offsite_delay.count()) + ")";
  result.cold = make_report(label + ",cold", run(false));
  result.warm = make_report(label + ",warm", run(true));
  result.saving_ms = result.cold.median - result.warm.median;
  return result;
}

void write_samples_csv(std::ostream& out, const std::vector<BenchReport>& reports) {
  const StreamState saved(out);
  out << "scenario,sample_ms\n";
  for (const auto& r : reports)
    for (double s : r.samples) out << r.scenario << ',' << std::setprecision(6) << s << '\n';
}

void write_cdf_csv(std::ostream& out, const std::vector<BenchReport>& reports) {
  const StreamState saved(out);
  out << "scenario,ms,fraction\n";
  for (const auto& r : reports)
    for (auto [ms, f] : r.cdf_points) out << r.scenario << ',' << std::setprecision(6) << ms << ',' << f << '\n';
}

void print_summary(std::ostream& out, const BenchReport& r) {
  const StreamState saved(out);
  out << std::fixed << std::setprecision(3) << r.scenario << ": n=" << r.samples.size() << " median=" << r.median
      << " ms mean=" << r.mean << " ms p95=" << r.p95 << " ms max=" << r.cdf_points.back().first << " ms\n";
}

void print_provider_table(std::ostream& out, const std::vector<ProviderRow>& rows) {
  const StreamState saved(out);
  out << std::left << std::setw(16) << "Service" << std::right << std::setw(12) << "preset ms" << std::setw(14)
      << "median ms" << '\n';
  for (const auto& row : rows)
    out << std::left << std::setw(16) << row.name << std::right << std::setw(12) << std::fixed << std::setprecision(0)
        << row.preset_ms << std::setw(14) << std::setprecision(2) << row.median_ms << '\n';
}

}  // namespace r2o::bench
