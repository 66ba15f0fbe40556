#pragma once

#include <cstdint>
#include <random>

namespace concentric {

// Seedable generator with portable draws.
//
// Engine: std::mt19937_64, whose output sequence the C++ standard fixes.
// Stream splitting: stream s of seed S is seeded through std::seed_seq with
// the four 32-bit words {lo(S), hi(S), lo(s), hi(s)}; seed_seq's mixing is
// also fixed by the standard. Distributions are implemented here rather than
// taken from <random>, whose algorithms are implementation-defined, so that
// draws are reproducible across standard libraries and other languages.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1), 52-bit resolution.
    double uniform_open();

    // Exponential with the given mean (> 0); strictly positive.
    double exponential(double mean);

    // Poisson with the given mean (>= 0). Multiplication method below a mean
    // of 10, Hormann's PTRS transformed rejection above.
    std::uint64_t poisson(double mean);

  private:
    std::mt19937_64 engine_;
};

}  // namespace concentric
