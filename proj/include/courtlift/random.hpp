#pragma once

#include <array>
#include <cstdint>

namespace courtlift {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based block cipher (Salmon et al., SC 2011).
 *
 * Maps a 128-bit counter and 64-bit key to 128 random bits. Being a pure
 * function of (counter, key), any stream position can be reached without
 * generating the ones before it.
 */
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key);
};

/// Stream purposes; one independent Philox substream per (seed, purpose, index).
enum class StreamTag : std::uint32_t {
    Camera = 1,
    Ball = 2,
    HeightNoise = 3,
    DiameterNoise = 4,
    Rebalance = 5,
};

//---------------------------------------------------------------------------//
/*!
 * Sequential draws from one Philox substream.
 *
 * The counter layout is {block, index_lo, index_hi, tag} with the seed as the
 * key, so the values drawn for sample i never depend on how many draws other
 * samples consumed or on which thread produced them. All distribution
 * transforms are implemented here rather than through <random>, whose
 * distributions are implementation-defined.
 */
class RandomStream
{
  public:
    RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    double normal();
    double exponential(double mean);
    double gamma(double shape);
    double student_t(double nu);

  private:
    void refill();

    Philox4x32::Key key_;
    Philox4x32::Counter counter_;
    Philox4x32::Counter block_{};
    int used_ = 4;
};

/// SplitMix64 finalizer over two words; used to derive per-repeat seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace courtlift
