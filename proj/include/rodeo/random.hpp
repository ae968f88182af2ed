// Counter-based random streams.
//
// Every stream is addressed by (seed, a, b, c, domain); its k-th output is a
// pure function of that address and k, so work items can be evaluated in any
// order or on any thread and still reproduce the same draws.

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rodeo {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Inverse of the standard normal CDF on (0, 1). Rational approximation
/// refined by one Halley step; absolute error well below 1e-9.
double normal_quantile(double p);

class RandomStream {
  public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b = 0,
                 std::uint32_t c = 0, std::uint32_t domain = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal draw by inversion (one uniform per normal).
    double normal();

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 3> address_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
};

}  // namespace rodeo
