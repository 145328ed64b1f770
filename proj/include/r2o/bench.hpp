#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "r2o/store.hpp"

namespace r2o::bench {

struct BenchReport {
  std::string scenario;
  std::vector<double> samples;  // milliseconds, in measurement order
  double median = 0;
  double mean = 0;
  double p95 = 0;  // nearest rank
  std::vector<std::pair<double, double>> cdf_points;  // (ms, cumulative fraction)
};

/// Throws InvalidArgument for an empty sample set.
BenchReport make_report(std::string scenario, std::vector<double> samples);

struct DecodeBenchOptions {
  std::uint64_t seed = 1;
  int warmup = 3;
  /// Repetition factor used when a single decode reads as zero time.
  int repetitions = 1000;
};

/// Times codec::decode_qr over `count` symbols made from random URLs.
BenchReport bench_decode(std::size_t count, const DecodeBenchOptions& options = {});

struct ProviderRow {
  std::string name;
  double preset_ms = 0;
  double median_ms = 0;
  std::vector<double> samples;
};

/// store::measure_store against an in-memory provider per preset.
std::vector<ProviderRow> bench_providers(const std::vector<store::ProviderDescriptor>& presets,
                                         std::size_t item_size = 44 * 1024, std::size_t repetitions = 10,
                                         std::chrono::milliseconds interval = std::chrono::milliseconds{0},
                                         std::uint64_t seed = 1);

struct EndToEndOptions {
  std::chrono::milliseconds firstparty_delay{11};
  std::chrono::milliseconds offsite_delay{147};
  std::size_t iterations = 10;
  int warmup = 3;
  std::uint64_t seed = 1;
};

struct EndToEndResult {
  BenchReport cold;  // mappings cache cleared before every resolution
  BenchReport warm;  // mapping present, schema never fetched or decoded
  double saving_ms = 0;  // cold.median - warm.median
};

/// Runs a store server and a first-party server on loopback, writes one
/// image through the write path and times resolve_page on its album.
EndToEndResult bench_end_to_end(const EndToEndOptions& options = {});

/// "scenario,sample_ms" rows.
void write_samples_csv(std::ostream& out, const std::vector<BenchReport>& reports);
/// "scenario,ms,fraction" rows.
void write_cdf_csv(std::ostream& out, const std::vector<BenchReport>& reports);
void print_summary(std::ostream& out, const BenchReport& report);
void print_provider_table(std::ostream& out, const std::vector<ProviderRow>& rows);

/// Random "https://..." locator of the given length (>= 24).
std::string random_url(std::uint64_t& state, std::size_t length);

}  // namespace r2o::bench
