#pragma once

#include <cstdint>

namespace seqlearn {

// Counter-based uniform source. Each stream is keyed by (seed, stream_id), so
// replication r of an experiment always sees the same draws regardless of
// which worker runs it.
class SplitStream {
  public:
    SplitStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(seed ^ mix(stream_id + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on the open interval (0,1).
    double next_uniform() {
        // 53 random bits, then shift into (0,1) by half an ulp.
        const double u =
            static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return u + 0x1.0p-54;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace seqlearn
