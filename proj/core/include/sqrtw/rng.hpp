#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace sqrtw {

/// Name of the counter-based generator used everywhere in the library.
/// Recorded in every run manifest.
inline constexpr std::string_view kRngName = "philox4x32-10";

/// Seed for one path: the generator state is a pure function of
/// (master_seed, path_index).
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
};

/// Independent sub-streams of one path. The Wiener driver of the
/// square-root process uses `wiener`; direction A of the generalized
/// process uses `direction(A)`.
struct StreamId {
    std::uint32_t value = 0;

    static constexpr StreamId wiener() { return StreamId{0}; }
    static constexpr StreamId direction(std::uint32_t a) { return StreamId{a + 1}; }
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al. 2011). Pure function of
/// (counter, key).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Sequential view over the Philox counter space of one (seed, stream).
///
/// Counter layout: word 0/1 hold the 64-bit block index, word 2 the low 32
/// bits of the path index, word 3 packs the stream id (low 16 bits) and the
/// high 16 bits of the path index. Every call to `normal()` consumes exactly
/// one block, so step k of a path always sees block k.
class RandomStream {
public:
    RandomStream(SeedSpec seed, StreamId stream) noexcept;

    /// Next raw 128-bit block.
    PhiloxCounter next_block() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal from one Box-Muller evaluation (cosine branch).
    double normal() noexcept;

    /// Seeks to an absolute block index.
    void seek(std::uint64_t block) noexcept { block_ = block; }
    std::uint64_t position() const noexcept { return block_; }

    SeedSpec seed() const noexcept { return seed_; }
    StreamId stream() const noexcept { return stream_; }

private:
    SeedSpec seed_;
    StreamId stream_;
    PhiloxKey key_;
    std::uint64_t block_ = 0;
};

/// Returns the Wiener-driver stream for `seed`.
RandomStream make_rng(SeedSpec seed) noexcept;

}  // namespace sqrtw
