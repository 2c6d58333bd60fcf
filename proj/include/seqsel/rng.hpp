#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace seqsel {

// Per-replication random stream. The engine seed is derived from
// (base seed, stream index) with a splitmix64 mix, so stream i always
// produces the same sequence no matter which thread runs it or in what
// order replications are scheduled.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : eng_(mix(seed ^ (stream * 0x9e3779b97f4a7c15ULL))) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Inverse-CDF exponential with the given rate; finite for u in [0,1).
    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    int bernoulli(double p1) { return uniform01() < p1 ? 1 : 0; }

    // Index drawn from a normalized mass vector (inverse-CDF walk).
    int discrete(const std::vector<double>& mass) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < mass.size(); ++j) {
            acc += mass[j];
            if (u < acc) return static_cast<int>(j);
        }
        return static_cast<int>(mass.size()) - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
};

}  // namespace seqsel
