// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_GEOMETRY_HPP
#define RABWET_GEOMETRY_HPP

#include "rabwet/rng.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace rabwet {

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr double kTwoPi = 2.0 * kPi;

// Uniform linear array with half-wavelength element spacing. The spacing is
// baked into every phase formula, so M is the only degree of freedom.
struct ArrayConfig {
    int M = 1;
};

// One energy-harvesting device in beacon-centered polar coordinates.
// theta is the azimuth relative to the array's initial boresight.
struct Device {
    double theta = 0.0;    // radians, normalized to [0, 2*pi)
    double distance = 1.0; // meters, > 0
};

inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

// An ordered device set; index is device identity throughout the library.
struct Deployment {
    std::vector<Device> devices;
    double region_radius = 0.0; // disk radius (or square half-width) used to draw it
};

enum class ChannelKind { LOS, Rician };

template <typename Scalar = double>
struct ChannelRealization {
    Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic> vector;
    ChannelKind kind = ChannelKind::LOS;
    Scalar kappa = Scalar(0); // linear Rician factor, meaningful iff kind == Rician
};

// LOS steering vector: entry j (0-based) carries phase -j*pi*sin(theta).
// The common global phase is dropped, so entry 0 is always 1.
template <typename Scalar = double>
ChannelRealization<Scalar> steering_vector(const ArrayConfig& cfg, Scalar theta) {
    ChannelRealization<Scalar> ch;
    ch.vector.resize(cfg.M);
    const Scalar s = std::sin(theta);
    for (int j = 0; j < cfg.M; ++j) {
        const Scalar phase = -Scalar(j) * Scalar(kPi) * s;
        ch.vector[j] = std::complex<Scalar>(std::cos(phase), std::sin(phase));
    }
    return ch;
}

// Large-scale power gain beta = ref_loss * d^(-alpha).
template <typename Scalar = double>
Scalar path_loss(Scalar distance, Scalar alpha, Scalar ref_loss) {
    if (!(distance > 0)) throw std::domain_error("path_loss: distance must be > 0");
    return ref_loss * std::pow(distance, -alpha);
}

// Devices i.i.d. uniform over the disk of radius R: angle uniform on
// [0, 2*pi), radius by the area law d = R*sqrt(u). Consumes exactly two
// draws per device, so prefixes of one stream are nested deployments.
inline Deployment sample_deployment(int n, double region_radius, RngStream& rng) {
    Deployment dep;
    dep.region_radius = region_radius;
    dep.devices.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Device d;
        d.theta = rng.uniform(0.0, kTwoPi);
        d.distance = region_radius * std::sqrt(rng.uniform());
        dep.devices.push_back(d);
    }
    return dep;
}

inline Deployment sample_deployment(int n, double region_radius, std::uint64_t seed) {
    RngStream rng(seed, /*stream_id=*/0);
    return sample_deployment(n, region_radius, rng);
}

// Rician channel about the LOS steering vector:
//   h = sqrt(kappa/(1+kappa)) * h_los + sqrt(1/(1+kappa)) * w,
// w i.i.d. standard circularly-symmetric complex normal, so E||h||^2 = M for
// every kappa and kappa -> infinity recovers the LOS vector.
template <typename Scalar = double>
ChannelRealization<Scalar> sample_rician(const ArrayConfig& cfg, Scalar theta, Scalar kappa,
                                         RngStream& rng) {
    if (kappa < 0) throw std::domain_error("sample_rician: kappa must be >= 0");
    ChannelRealization<Scalar> ch = steering_vector<Scalar>(cfg, theta);
    ch.kind = ChannelKind::Rician;
    ch.kappa = kappa;
    const Scalar los = std::sqrt(kappa / (1 + kappa));
    const Scalar nlos = std::sqrt(1 / (1 + kappa));
    for (int j = 0; j < cfg.M; ++j)
        ch.vector[j] = los * ch.vector[j] + nlos * std::complex<Scalar>(rng.cnormal());
    return ch;
}

}  // namespace rabwet

#endif  // RABWET_GEOMETRY_HPP
