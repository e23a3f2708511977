#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace fvlab {

// Philox 4x32-10 block function. Counter-based: the output is a pure
// function of (key, counter), so streams can be replayed or evaluated out
// of order without shared state.
struct Philox4x32 {
    static constexpr uint32_t kMult0 = 0xD2511F53u;
    static constexpr uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = static_cast<uint64_t>(kMult0) * ctr[0];
            const uint64_t p1 = static_cast<uint64_t>(kMult1) * ctr[2];
            const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
            const uint32_t lo0 = static_cast<uint32_t>(p0);
            const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
            const uint32_t lo1 = static_cast<uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// One logical random stream, addressed by (seed, stream id, step index).
// The draw counter resets whenever the step index is set, so the numbers
// consumed by one particle in one step never depend on what any other
// particle drew.
class RngStream {
  public:
    RngStream(uint64_t seed, uint32_t stream_id)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          stream_(stream_id) {}

    void set_step(uint64_t step) {
        step_ = step;
        draw_ = 0;
    }

    uint64_t next_u64() {
        const std::array<uint32_t, 4> ctr = {
            draw_++, stream_, static_cast<uint32_t>(step_),
            static_cast<uint32_t>(step_ >> 32)};
        const auto out = Philox4x32::block(ctr, key_);
        return (static_cast<uint64_t>(out[0]) << 32) | out[1];
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (cosine branch); one block per draw.
    double normal() {
        const std::array<uint32_t, 4> ctr = {
            draw_++, stream_, static_cast<uint32_t>(step_),
            static_cast<uint32_t>(step_ >> 32)};
        const auto out = Philox4x32::block(ctr, key_);
        const uint64_t a = (static_cast<uint64_t>(out[0]) << 32) | out[1];
        const uint64_t b = (static_cast<uint64_t>(out[2]) << 32) | out[3];
        // u1 in (0,1] keeps the log finite.
        const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    uint32_t stream_id() const { return stream_; }

  private:
    std::array<uint32_t, 2> key_;
    uint32_t stream_;
    uint64_t step_ = 0;
    uint32_t draw_ = 0;
};

// Reserved stream ids; particle i uses stream id i.
inline constexpr uint32_t kJumpStreamId = 0xFFFFFFFFu;
inline constexpr uint32_t kInitStreamId = 0xFFFFFFFEu;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic sub-seed from a base seed and a list of tags (replica id,
// grid indices, ...). Independent of evaluation order across workers.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> tags) {
    uint64_t s = splitmix64(base);
    for (uint64_t t : tags) s = splitmix64(s ^ splitmix64(t));
    return s;
}

}  // namespace fvlab
