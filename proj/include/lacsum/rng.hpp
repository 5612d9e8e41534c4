#pragma once

#include <cstdint>

namespace lacsum {

// splitmix64: counter-based, splittable by key mixing; used for per-stratum
// substreams so sampling is reproducible independent of thread scheduling.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

inline uint64_t mix_key(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 0x632be59bd9b4e019ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline SplitMix64 substream(uint64_t seed, uint64_t stream_id) {
    return SplitMix64(mix_key(seed, stream_id));
}

}  // namespace lacsum
