#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace transferop {

/// Deterministic uniform stream used everywhere randomness is needed.
///
/// Wraps std::mt19937_64 (fully specified by the standard) and maps the raw
/// 64-bit output to doubles in [0,1) via the top 53 bits. We avoid
/// std::uniform_real_distribution because its output sequence is
/// implementation-defined, which would break byte-identical reruns across
/// toolchains.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return engine_(); }

  /// Stream for worker `index` derived from a base seed (splitmix64 of the
  /// pair), so partitioned generation stays deterministic.
  static RandomStream partition(std::uint64_t seed, std::uint64_t index);

private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Thrown when a numeric routine cannot produce a meaningful result
/// (normalization underflow, singular derivative, non-convergence).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Runs fn(i) for i in [0, n). With threads <= 1 this is a plain loop;
/// otherwise indices are split into contiguous blocks, one worker each.
/// Each index must write only its own outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 1);

}  // namespace transferop
