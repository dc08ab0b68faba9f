#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cyclefill {

// Deterministic random stream keyed by (master_seed, stream_id).
//
// The draw sequence is a pure function of the key pair: two streams built from
// the same pair produce identical bytes regardless of thread scheduling or
// construction order. Distribution mappings (uniform01, normal, uniform_int)
// are implemented directly on raw 64-bit engine output because the standard
// <random> distributions are implementation-defined and would break the
// bit-for-bit reproducibility contract.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 random bits.
  double uniform01();
  // Uniform double in [a, b).
  double uniform(double a, double b);
  // Standard normal via Marsaglia's polar method.
  double normal();
  // Uniform integer in [lo, hi], inclusive; rejection keeps it unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // +1 or -1 with equal probability.
  int sign();
  // d iid uniform01 coordinates.
  std::vector<double> point(int d);

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t master_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cyclefill
