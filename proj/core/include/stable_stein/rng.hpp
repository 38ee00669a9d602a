#pragma once

#include <array>
#include <cstdint>

namespace stable_stein {

// Philox4x32-10 (Salmon et al., Random123). Counter-based: any block is addressable
// directly, so substreams need no shared state.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

// Stream tags kept in the top byte of a stream id.
enum class StreamTag : std::uint8_t { summands = 0, reference = 1, floor = 2, kernel = 3, user = 255 };

constexpr std::uint64_t make_stream_id(StreamTag tag, std::uint64_t index) noexcept {
    return (static_cast<std::uint64_t>(tag) << 56) | (index & ((std::uint64_t{1} << 56) - 1));
}

// Sequential view of the Philox stream (seed, stream). The counter is
// {block_lo, block_hi, stream_lo, stream_hi} and the key is the seed.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on the open interval (0,1): ((x >> 11) + 0.5) 2^-53.
    double uniform() noexcept;
    double exponential() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buf_{};
    int used_ = 4;
};

}  // namespace stable_stein
