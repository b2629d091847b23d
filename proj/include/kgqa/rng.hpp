#pragma once
// Deterministic RNG used everywhere instead of <random> distributions:
// the standard distributions are not bit-stable across library
// implementations, and training runs must replay exactly from a seed.
// xoshiro256** seeded via splitmix64; derived streams let independent
// episodes draw from (seed, query, epoch)-keyed generators.

#include <cstdint>
#include <span>

namespace kgqa {

inline uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-sensitive mix of several 64-bit keys into one stream seed.
inline uint64_t mix64(std::initializer_list<uint64_t> keys) {
    uint64_t s = 0x6a09e667f3bcc909ULL;
    for (uint64_t k : keys) {
        s ^= k + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        splitmix64(s);
    }
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed = 0) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n), unbiased.
    uint64_t next_below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Derive an independent child stream.
    Rng child(uint64_t a, uint64_t b = 0) {
        return Rng(mix64({next_u64_peek(), a, b}));
    }

    template <typename T>
    void shuffle(std::span<T> v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    // Stream derivation must not advance the parent: hash its state instead.
    uint64_t next_u64_peek() const { return mix64({s_[0], s_[1], s_[2], s_[3]}); }

    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

}  // namespace kgqa
