#include "softedge/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace softedge {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : counter_(0), seed_(seed), stream_id_(stream_id) {
  key_ = mix64(mix64(seed + kGolden) ^ mix64(stream_id + 0xD1B54A32D192ED03ULL));
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::next_uniform() {
  // (x >> 11) in [0, 2^53); +0.5 keeps the result strictly inside (0,1)
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

RngStream make_stream(std::uint64_t seed, std::uint64_t tag,
                      std::uint64_t subtag, std::uint64_t index) {
  const std::uint64_t id =
      (tag << 56) | ((subtag & 0xFFFFULL) << 40) | (index & 0xFFFFFFFFFFULL);
  return RngStream(seed, id);
}

double sample_gaussian(RngStream& stream, double mean, double sd) {
  if (!(sd >= 0.0)) throw std::domain_error("sample_gaussian: sd must be >= 0");
  if (sd == 0.0) return mean;
  const double u1 = stream.next_uniform();
  const double u2 = stream.next_uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return mean + sd * z;
}

double sample_gamma(RngStream& stream, double shape) {
  if (!(shape > 0.0)) throw std::domain_error("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = stream.next_uniform();
    return sample_gamma(stream, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = sample_gaussian(stream, 0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_chi(RngStream& stream, double r) {
  if (!(r > 0.0)) throw std::domain_error("sample_chi: parameter must be > 0");
  return std::sqrt(2.0 * sample_gamma(stream, 0.5 * r));
}

}  // namespace softedge
