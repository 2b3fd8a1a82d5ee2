#pragma once

#include <cmath>
#include <cstdint>

namespace vpa {

// PCG32: small deterministic generator, identical streams on every platform.
// std::uniform_real_distribution is implementation-defined, so all mapping to
// floats is done by hand here.
struct Pcg32 {
    std::uint64_t state = 0x853c49e6748fea9bULL;
    std::uint64_t inc = 0xda3e39cb94b95bdbULL;

    Pcg32() = default;
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 1) { reseed(seed, stream); }

    void reseed(std::uint64_t seed, std::uint64_t stream = 1) {
        state = 0;
        inc = (stream << 1u) | 1u;
        next_u32();
        state += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state;
        state = old * 6364136223846793005ULL + inc;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Uniform in [0,1), 24 bits of mantissa.
    float uniform() { return static_cast<float>(next_u32() >> 8) * 0x1.0p-24f; }

    float uniform(float lo, float hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0,n).
    std::uint32_t bounded(std::uint32_t n) {
        std::uint32_t threshold = (-n) % n;
        for (;;) {
            std::uint32_t r = next_u32();
            if (r >= threshold) return r % n;
        }
    }

    // Box-Muller; consumes two draws per pair, one value cached.
    float normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        float u1 = 0.0f;
        do { u1 = uniform(); } while (u1 <= 1e-12f);
        float u2 = uniform();
        float r = std::sqrt(-2.0f * std::log(u1));
        float a = 6.28318530717958647692f * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

  private:
    float cached_ = 0.0f;
    bool has_cached_ = false;
};

}  // namespace vpa
