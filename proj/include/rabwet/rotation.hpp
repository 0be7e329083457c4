// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_ROTATION_HPP
#define RABWET_ROTATION_HPP

#include "rabwet/patterns.hpp"

#include <stdexcept>
#include <vector>

namespace rabwet {

// Stepper schedule: offsets j*pi/M for j = 1..M. A half turn suffices
// because the linear array is front-back symmetric.
struct RotationSchedule {
    std::vector<double> offsets;
};

inline RotationSchedule rotation_schedule(const ArrayConfig& cfg) {
    RotationSchedule sched;
    sched.offsets.reserve(static_cast<std::size_t>(cfg.M));
    for (int j = 1; j <= cfg.M; ++j)
        sched.offsets.push_back(double(j) * kPi / double(cfg.M));
    return sched;
}

// Pattern gain seen by a device at theta while the array sits at step j.
template <typename Scalar = double>
Scalar rotated_gain(const ArrayConfig& cfg, Scalar theta, int j) {
    if (j < 1 || j > cfg.M) throw std::out_of_range("rotated_gain: step out of range");
    return rab_gain_closed_form(cfg, theta + Scalar(j) * Scalar(kPi) / Scalar(cfg.M));
}

// Equal-dwell average over the schedule; the quasi-omnidirectional
// effective pattern. Periodic with period pi/M in theta.
template <typename Scalar = double>
Scalar average_rotated_gain(const ArrayConfig& cfg, Scalar theta) {
    Scalar acc = 0;
    for (int j = 1; j <= cfg.M; ++j) acc += rotated_gain(cfg, theta, j);
    return acc / Scalar(cfg.M);
}

// Extrema of the effective pattern over a uniform theta grid.
template <typename Scalar = double>
struct Ripple {
    Scalar min_gain;
    Scalar max_gain;
    Scalar ratio; // max/min
};

template <typename Scalar = double>
Ripple<Scalar> ripple(const ArrayConfig& cfg, int grid_points = 4096) {
    if (grid_points < 1000) throw std::invalid_argument("ripple: grid too coarse");
    Scalar lo = average_rotated_gain<Scalar>(cfg, Scalar(0));
    Scalar hi = lo;
    for (int i = 1; i < grid_points; ++i) {
        const Scalar g =
            average_rotated_gain<Scalar>(cfg, Scalar(kTwoPi) * Scalar(i) / Scalar(grid_points));
        lo = g < lo ? g : lo;
        hi = g > hi ? g : hi;
    }
    return {lo, hi, hi / lo};
}

}  // namespace rabwet

#endif  // RABWET_ROTATION_HPP
