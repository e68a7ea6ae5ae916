#include "nstorus/rng.hpp"

#include <cmath>
#include <numbers>

namespace nstorus {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele/Lea/Flood; Vigna's public-domain constants)
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), counter_(0) {
  // Two finalizer rounds decorrelate (seed, stream) pairs that differ in one
  // word; the key acts as the base of a pure counter sequence.
  key_ = mix64(mix64(seed + kGolden) ^ mix64(stream * 0xD1342543DE82EF95ull + 0x632BE59BD9B4E019ull));
}

std::uint64_t RngStream::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double RngStream::gaussian() {
  // Box-Muller on (0,1] x [0,1); fixed two-uniform cost keeps the stream
  // position a function of the call count alone.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::uniform_unit_variance() {
  return std::numbers::sqrt3 * (2.0 * uniform01() - 1.0);
}

}  // namespace nstorus
