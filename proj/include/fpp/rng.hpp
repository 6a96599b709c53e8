#pragma once

// Counter-based random numbers.
//
// Philox4x32-10 (Salmon, Moraes, Dror, Shaw; SC'11) maps a 128-bit counter and
// a 64-bit key to 128 pseudorandom bits. Every random quantity in the project
// is a pure function of (key, counter), so results never depend on thread
// count or evaluation order.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace fpp {

struct PhiloxKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;

    static constexpr PhiloxKey from_u64(std::uint64_t v) {
        return {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v >> 32)};
    }
};

using PhiloxBlock = std::array<std::uint32_t, 4>;

namespace philox_detail {
inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace philox_detail

constexpr PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) {
    using namespace philox_detail;
    std::uint32_t k0 = key.k0;
    std::uint32_t k1 = key.k1;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

// Two 64-bit words from the counter (lo, hi) under key.
constexpr std::array<std::uint64_t, 2> philox_u64x2(std::uint64_t lo, std::uint64_t hi,
                                                    PhiloxKey key) {
    const PhiloxBlock out = philox4x32(
        {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
         static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)},
        key);
    return {std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32),
            std::uint64_t{out[2]} | (std::uint64_t{out[3]} << 32)};
}

// Sixteen consecutive counters (lo0 .. lo0+15, hi): out[2i], out[2i+1] are the
// two words of counter lo0+i. Bit-identical to sixteen philox_u64x2 calls.
inline void philox_u64x2_run16(std::uint64_t lo0, std::uint64_t hi, PhiloxKey key,
                               std::uint64_t* out) {
#if defined(__AVX512F__)
    using namespace philox_detail;
    const __m512i m32 = _mm512_set1_epi64(0xFFFFFFFFll);
    const __m512i lane = _mm512_set_epi64(7, 6, 5, 4, 3, 2, 1, 0);
    const __m512i la = _mm512_add_epi64(_mm512_set1_epi64(static_cast<long long>(lo0)), lane);
    const __m512i lb = _mm512_add_epi64(la, _mm512_set1_epi64(8));
    __m512i a0 = _mm512_and_si512(la, m32), a1 = _mm512_srli_epi64(la, 32);
    __m512i b0 = _mm512_and_si512(lb, m32), b1 = _mm512_srli_epi64(lb, 32);
    __m512i a2 = _mm512_set1_epi64(static_cast<long long>(hi & 0xFFFFFFFFull));
    __m512i a3 = _mm512_set1_epi64(static_cast<long long>(hi >> 32));
    __m512i b2 = a2, b3 = a3;
    const __m512i mul0 = _mm512_set1_epi64(kMul0), mul1 = _mm512_set1_epi64(kMul1);
    std::uint32_t k0 = key.k0, k1 = key.k1;
    for (int round = 0; round < 10; ++round) {
        const __m512i key0 = _mm512_set1_epi64(k0), key1 = _mm512_set1_epi64(k1);
        const __m512i pa0 = _mm512_mul_epu32(a0, mul0), pa1 = _mm512_mul_epu32(a2, mul1);
        const __m512i pb0 = _mm512_mul_epu32(b0, mul0), pb1 = _mm512_mul_epu32(b2, mul1);
        // 0x96: three-way xor
        const __m512i na0 = _mm512_ternarylogic_epi64(_mm512_srli_epi64(pa1, 32), a1, key0, 0x96);
        const __m512i na2 = _mm512_ternarylogic_epi64(_mm512_srli_epi64(pa0, 32), a3, key1, 0x96);
        const __m512i nb0 = _mm512_ternarylogic_epi64(_mm512_srli_epi64(pb1, 32), b1, key0, 0x96);
        const __m512i nb2 = _mm512_ternarylogic_epi64(_mm512_srli_epi64(pb0, 32), b3, key1, 0x96);
        a1 = _mm512_and_si512(pa1, m32);
        a3 = _mm512_and_si512(pa0, m32);
        a0 = na0;
        a2 = na2;
        b1 = _mm512_and_si512(pb1, m32);
        b3 = _mm512_and_si512(pb0, m32);
        b0 = nb0;
        b2 = nb2;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    const __m512i wa0 = _mm512_or_si512(a0, _mm512_slli_epi64(a1, 32));
    const __m512i wa1 = _mm512_or_si512(a2, _mm512_slli_epi64(a3, 32));
    const __m512i wb0 = _mm512_or_si512(b0, _mm512_slli_epi64(b1, 32));
    const __m512i wb1 = _mm512_or_si512(b2, _mm512_slli_epi64(b3, 32));
    const __m512i lo_idx = _mm512_set_epi64(11, 3, 10, 2, 9, 1, 8, 0);
    const __m512i hi_idx = _mm512_set_epi64(15, 7, 14, 6, 13, 5, 12, 4);
    _mm512_storeu_si512(out, _mm512_permutex2var_epi64(wa0, lo_idx, wa1));
    _mm512_storeu_si512(out + 8, _mm512_permutex2var_epi64(wa0, hi_idx, wa1));
    _mm512_storeu_si512(out + 16, _mm512_permutex2var_epi64(wb0, lo_idx, wb1));
    _mm512_storeu_si512(out + 24, _mm512_permutex2var_epi64(wb0, hi_idx, wb1));
#else
    for (std::uint64_t i = 0; i < 16; ++i) {
        const auto w = philox_u64x2(lo0 + i, hi, key);
        out[2 * i] = w[0];
        out[2 * i + 1] = w[1];
    }
#endif
}

// Top 53 bits as a double in [0, 1).
constexpr double u64_to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// SplitMix64 finalizer; used to derive keys and child stream ids.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// A sequential stream over the counter space (stream, 0), (stream, 1), ...
// under a seed-derived key. Satisfies UniformRandomBitGenerator, but the
// project's samplers only use the explicit uniform()/exponential() below so
// that draws are identical across standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::uint64_t stream)
        : key_(PhiloxKey::from_u64(mix64(seed))), stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto words = philox_u64x2(counter_++, stream_, key_);
        spare_ = words[1];
        have_spare_ = true;
        return words[0];
    }

    // Uniform on [0, 1).
    double uniform() { return u64_to_unit((*this)()); }

    // Uniform on (0, 1).
    double uniform_open() {
        double u = 0.0;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    // Standard exponential, strictly positive.
    double exponential() { return -std::log(uniform_open()); }

    // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Poisson by sequential inversion; fine for the small means used here.
    std::uint64_t poisson(double mean);

    // Independent stream derived from this one's identity (not its position).
    Rng child(std::uint64_t index) const {
        Rng r = *this;
        r.stream_ = mix64(stream_ ^ mix64(index + 0x632BE59BD9B4E019ull));
        r.counter_ = 0;
        r.have_spare_ = false;
        return r;
    }

    std::uint64_t stream() const { return stream_; }

private:
    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

inline std::uint64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf && p > 0.0) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace fpp
