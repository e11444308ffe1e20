#include "sqrtw/rng.hpp"

#include <cmath>
#include <numbers>

namespace sqrtw {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter round(PhiloxCounter c, PhiloxKey k) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// 53-bit uniform in [0, 1) from two 32-bit words.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
    for (int r = 0; r < 9; ++r) {
        counter = round(counter, key);
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return round(counter, key);
}

RandomStream::RandomStream(SeedSpec seed, StreamId stream) noexcept
    : seed_(seed),
      stream_(stream),
      key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)} {}

PhiloxCounter RandomStream::next_block() noexcept {
    const PhiloxCounter ctr{
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(seed_.path_index),
        (stream_.value & 0xFFFFu) | (static_cast<std::uint32_t>(seed_.path_index >> 32) << 16),
    };
    ++block_;
    return philox4x32_10(ctr, key_);
}

double RandomStream::uniform() noexcept {
    const auto b = next_block();
    return to_unit(b[0], b[1]);
}

double RandomStream::normal() noexcept {
    const auto b = next_block();
    // u1 in (0, 1] keeps the logarithm finite.
    const double u1 = 1.0 - to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RandomStream make_rng(SeedSpec seed) noexcept { return RandomStream(seed, StreamId::wiener()); }

}  // namespace sqrtw
