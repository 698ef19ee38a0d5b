#ifndef HAWKES_RNG_HPP
#define HAWKES_RNG_HPP

#include <cstdint>

namespace hawkes {

// Identifies one independent replication stream. The same (seed, stream)
// pair reproduces the identical draw sequence bit-for-bit.
struct RandomState {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Derives the stream index for replication r at inner grid point k of a
// given experiment block. Layout: block | r*2^16 + k, so replications and
// grid points never collide as long as k < 2^16 and r < 2^32.
inline std::uint64_t derive_stream(std::uint64_t block, std::uint64_t replication,
                                   std::uint64_t grid_point = 0) {
    return (block << 48) + replication * 65536u + grid_point;
}

// Counter-based generator (SplitMix64 over a keyed counter). Streams with
// distinct (seed, stream) pairs are independent for Monte Carlo purposes,
// and a stream can be recreated at any point from its RandomState alone.
class Rng {
  public:
    explicit Rng(RandomState rs) : Rng(rs.seed, rs.stream) {}
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1).
    double uniform();

    // Exponential waiting time with the given rate.
    double exponential(double rate);

    // Standard normal via inverse-CDF transform.
    double normal();

  private:
    std::uint64_t state_;
};

// Standard normal quantile function (Wichura's AS 241, double precision).
double normal_quantile(double p);

// Standard normal CDF and density.
double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace hawkes

#endif
