// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_RNG_HPP
#define RABWET_RNG_HPP

#include <complex>
#include <cstdint>
#include <cmath>

namespace rabwet {

// Deterministic, stream-addressable random source.
//
// Every consumer derives its own stream from (master_seed, stream_id), so
// results never depend on evaluation order or on the platform's standard
// library distributions. xoshiro256++ core seeded through SplitMix64.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        // Distinct streams must decorrelate even for adjacent ids; run the
        // seed expander over a mix of both words.
        std::uint64_t x = master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
        for (auto& word : state_) word = splitmix64(x);
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

    // Uniform on [0, 1) with full 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // One standard normal draw (Box-Muller; consumes two uniforms, the sine
    // branch is discarded so consumption per call is fixed).
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
        const double phi = 6.283185307179586476925286766559 * uniform();
        return r * std::cos(phi);
    }

    // Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double r = std::sqrt(-std::log(1.0 - uniform()));
        const double phi = 6.283185307179586476925286766559 * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace rabwet

#endif  // RABWET_RNG_HPP
