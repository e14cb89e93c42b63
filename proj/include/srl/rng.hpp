#pragma once

#include <cstdint>
#include <span>

namespace srl {

// SplitMix64 step (Vigna). Used both as a stream generator and as the
// mixing function that derives independent per-trajectory stream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a stream key from a seed and up to three stream coordinates
// (e.g. epoch, trajectory index, purpose tag). Pure function of its
// arguments, so parallel trajectories get reproducible independent
// streams regardless of scheduling.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a = 0,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ULL;
    k ^= splitmix64(s);
    s ^= b + 0xc2b2ae3d27d4eb4fULL;
    k ^= splitmix64(s);
    s ^= c + 0x165667b19e3779f9ULL;
    k ^= splitmix64(s);
    return k;
}

class Rng {
public:
    explicit Rng(std::uint64_t key) : state_(key ^ 0x5851f42d4c957f2dULL) {
        // burn-in decorrelates trivially related keys
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform on [0, 1) with 53 random bits
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // draws an index from a discrete distribution given as probabilities
    int draw_discrete(std::span<const double> probs) {
        const double u = u01();
        double cum = 0.0;
        for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
            cum += probs[j];
            if (u < cum) return static_cast<int>(j);
        }
        return static_cast<int>(probs.size()) - 1;
    }

private:
    std::uint64_t state_;
};

}  // namespace srl
