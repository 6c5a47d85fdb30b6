#pragma once

#include <cstdint>

namespace lkgeo {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based generator. Output i of stream (seed, stream) is
///
///     key   = mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15))
///     out_i = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
///
/// so any draw can be reproduced from (seed, stream, i) alone. Streams are
/// used per sample index, which keeps parallel and serial runs identical.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (two uniforms per call, no caching).
  double normal();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives a child stream id; used to separate purposes within one sample.
std::uint64_t substream(std::uint64_t stream, std::uint64_t purpose);

}  // namespace lkgeo
