// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace cfran {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream seed from a master seed and a tag path. Streams with
// distinct paths are statistically independent, so draws are reproducible
// and order-independent under parallel execution.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master ^ 0xc2b2ae3d27d4eb4fULL);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p));
  return s;
}

// Stream tags for derive_seed paths.
enum StreamTag : std::uint64_t {
  kStreamUePlacement = 0x5545,
  kStreamChannel = 0x4348,
  kStreamEstimationNoise = 0x454e,
};

// Deterministic random stream. Gaussian variates use an explicit Box-Muller
// transform instead of std::normal_distribution so that sequences are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Real standard normal N(0, 1).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

  // Circularly symmetric complex normal CN(0, 1): real and imaginary parts
  // are independent N(0, 1/2).
  std::complex<double> cnormal() {
    const double r = std::sqrt(-std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cfran
