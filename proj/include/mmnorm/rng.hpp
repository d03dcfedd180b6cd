#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mmnorm/netmodel.hpp"

namespace mmnorm {

/// splitmix64 step, used to expand seeds into generator state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with counter-based stream derivation: the state for
/// (seed, stream) is a pure function of both, so stream i of a run can be
/// handed to any thread and still produce identical output.
class Rng {
public:
    Rng() : Rng(0, 0) {}

    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed;
        const std::uint64_t seed_hash = splitmix64_next(sm);
        sm = seed_hash ^ (stream + 0x9e3779b97f4a7c15ULL);
        for (std::uint64_t& word : state_) word = splitmix64_next(sm);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on (0, 1]; never returns 0, so logarithms stay finite.
    double uniform() {
        return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    /// Zero-mean Gaussian via Box-Muller; always consumes two uniforms.
    double normal(double stddev) {
        const double u1 = uniform();
        const double u2 = uniform();
        return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    /// Exact Poisson draw by uniform products. Split into chunks so the
    /// product threshold exp(-chunk) never underflows; chunk sums are again
    /// Poisson by additivity.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0))
            throw std::domain_error("poisson: mean must be >= 0");
        std::uint64_t count = 0;
        double remaining = mean;
        while (remaining > 0.0) {
            const double chunk = remaining < 60.0 ? remaining : 60.0;
            const double floor = std::exp(-chunk);
            double product = uniform();
            while (product > floor) {
                ++count;
                product *= uniform();
            }
            remaining -= chunk;
        }
        return count;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace mmnorm
