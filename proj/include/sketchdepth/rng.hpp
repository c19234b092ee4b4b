#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "sketchdepth/geometry.hpp"

namespace sketchdepth {

// splitmix64; used both as a seed expander and as a stable mixing hash.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256++ with Box-Muller normals. The standard <random> distributions
// are implementation-defined, so golden seeds would not survive a stdlib
// change; this generator is fully pinned.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n), unbiased
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) return 0;
        uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Vec3 unit_vector() {
        // uniform on the full sphere
        double z = uniform(-1.0, 1.0);
        double phi = uniform(0.0, 2.0 * kPi);
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives an independent stream id from a root seed and task coordinates, so
// parallel schedules cannot change results.
inline uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b = 0) {
    uint64_t st = root;
    uint64_t h = splitmix64(st);
    st = h ^ (a * 0x9e3779b97f4a7c15ULL);
    h = splitmix64(st);
    st = h ^ (b * 0xd1b54a32d192ed03ULL);
    return splitmix64(st);
}

inline uint64_t derive_seed(uint64_t root, std::string_view name, uint64_t b = 0) {
    return derive_seed(root, fnv1a64(name), b);
}

}  // namespace sketchdepth
