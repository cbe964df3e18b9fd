#pragma once

#include <cstdint>

namespace softedge {

/// Counter-based deterministic random stream.
///
/// Draw i of a stream is a fixed 64-bit mix of a key derived from
/// (seed, stream_id) and the counter i. Consequences:
///   - equal (seed, stream_id) reproduce bit-identical sequences on every
///     platform and under any thread schedule;
///   - distinct stream_ids give statistically independent streams, so a
///     Monte Carlo run can key one stream per sample index.
///
/// A stream is single-owner (no internal synchronization); distinct streams
/// may be used concurrently, and moving a stream across threads is safe.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform draw in the open interval (0,1), 53-bit resolution.
  double next_uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// Stream keyed by (tag, subtag, index): tag in the top 8 bits, subtag in the
/// next 16, index in the low 40. Keeps sample streams of different operations
/// and phases disjoint under one user seed.
RngStream make_stream(std::uint64_t seed, std::uint64_t tag,
                      std::uint64_t subtag, std::uint64_t index);

/// N(mean, sd^2) via Box-Muller; sd = 0 returns mean exactly (no draws used).
double sample_gaussian(RngStream& stream, double mean, double sd);

/// Gamma(shape, unit scale) for any shape > 0 (Marsaglia-Tsang squeeze with
/// the power boost for shape < 1).
double sample_gamma(RngStream& stream, double shape);

/// chi_r draw, i.e. sqrt(2 * Gamma(r/2, unit scale)), any real r > 0.
double sample_chi(RngStream& stream, double r);

}  // namespace softedge
