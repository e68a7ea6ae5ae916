// Counter-based splittable random stream. The draw sequence is a pure
// function of (seed, stream), so parallel ensembles assign one stream id per
// trajectory and stay reproducible under any scheduling.

#pragma once

#include <cstdint>

namespace nstorus {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();
  double uniform01();                     // [0, 1), 53-bit mantissa
  double uniform(double a, double b);
  double gaussian();                      // N(0,1); consumes exactly two uniforms
  double uniform_unit_variance();         // uniform(-sqrt3, sqrt3), E x^2 = 1

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  std::uint64_t key_;
};

}  // namespace nstorus
