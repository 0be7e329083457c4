// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_POWER_CONTROL_HPP
#define RABWET_POWER_CONTROL_HPP

#include "rabwet/rotation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rabwet {

// Exposure coefficients a[i][j] = (d_i^-alpha / M) * G(theta_i + j*pi/M):
// the per-step share of device i's average received power, in units of
// m^-alpha (the path-loss reference constant is reapplied only when
// reporting absolute power).
template <typename Scalar = double>
using ExposureMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
ExposureMatrix<Scalar> exposure_coefficients(const Deployment& dep, const ArrayConfig& cfg,
                                             Scalar alpha) {
    if (dep.devices.empty())
        throw std::invalid_argument("exposure_coefficients: empty deployment");
    const int n = static_cast<int>(dep.devices.size());
    ExposureMatrix<Scalar> a(n, cfg.M);
    for (int i = 0; i < n; ++i) {
        const Scalar falloff =
            std::pow(Scalar(dep.devices[i].distance), -alpha) / Scalar(cfg.M);
        for (int j = 1; j <= cfg.M; ++j)
            a(i, j - 1) = falloff * rotated_gain<Scalar>(cfg, Scalar(dep.devices[i].theta), j);
    }
    return a;
}

// Per-rotation-step transmit powers with the achieved max-min value.
struct PowerAllocation {
    Eigen::VectorXd p;       // watts per step, length M
    double budget = 0.0;     // p_T
    double achieved_xi = 0.0; // min_i a_i^T p, exposure units
};

// Main-beam window index for a device azimuth. Windows are half-open
// [center - pi/2M, center + pi/2M) around centers pi/2 - j*pi/M, after
// folding theta into [-pi/2, pi/2); the sliver just below pi/2 wraps to
// step M by the pi-periodicity of the fold. Every angle lands in exactly
// one window.
inline int main_beam_index(double theta, int M) {
    double t = wrap_angle(theta);
    double star;
    if (t < kPi / 2) star = t;
    else if (t < 3 * kPi / 2) star = t - kPi;
    else star = t - kTwoPi;
    const double x = double(M) * (kPi / 2 - star) / kPi; // in (0, M]
    int j = static_cast<int>(std::ceil(x - 0.5));
    if (j < 1) j += M;
    if (j > M) j -= M;
    return j;
}

inline std::vector<std::vector<int>> main_beam_sets(const Deployment& dep,
                                                    const ArrayConfig& cfg) {
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(cfg.M));
    for (int i = 0; i < static_cast<int>(dep.devices.size()); ++i)
        sets[static_cast<std::size_t>(main_beam_index(dep.devices[i].theta, cfg.M) - 1)]
            .push_back(i);
    return sets;
}

// Closed-form allocation: weight each step by the worst path loss inside its
// main-beam set, p_j proportional to max_{i in I_j} d_i^alpha (zero when the
// set is empty). The residual after normalization is folded into the largest
// entry so the powers sum to the budget bit-exactly.
template <typename Scalar = double>
PowerAllocation heuristic_allocation(const Deployment& dep, const ArrayConfig& cfg, Scalar alpha,
                                     Scalar p_T) {
    const auto sets = main_beam_sets(dep, cfg);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(cfg.M);
    for (int j = 0; j < cfg.M; ++j)
        for (int i : sets[static_cast<std::size_t>(j)])
            w[j] = std::max(w[j], std::pow(dep.devices[static_cast<std::size_t>(i)].distance,
                                           double(alpha)));
    const double total = w.sum();
    if (!(total > 0)) throw std::runtime_error("heuristic_allocation: all beam sets empty");
    PowerAllocation alloc;
    alloc.budget = double(p_T);
    alloc.p = w * (double(p_T) / total);
    int jmax = 0;
    w.maxCoeff(&jmax);
    alloc.p[jmax] += double(p_T) - alloc.p.sum();
    const auto a = exposure_coefficients<double>(dep, cfg, double(alpha));
    alloc.achieved_xi = (a * alloc.p).minCoeff();
    return alloc;
}

// Tissue-exposure model: Hermitian positive-definite matrix S (W/kg per
// watt), regulatory limit delta, and the scalar it induces on the
// alternating-sign weight vector.
struct SarModel {
    Eigen::MatrixXcd S;
    double delta = std::numeric_limits<double>::infinity();
    double s = 0.0; // sar_scalar(S)
};

// s = (1/M) * sum_{l,m} (-1)^((l+m) mod 2) * S[l][m]; equals v^H S v for the
// alternating-sign unit vector, and is real for Hermitian S.
inline double sar_scalar(const Eigen::MatrixXcd& S) {
    const int M = static_cast<int>(S.rows());
    if (S.cols() != M) throw std::invalid_argument("sar_scalar: matrix must be square");
    if ((S - S.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("sar_scalar: matrix must be Hermitian");
    std::complex<double> acc = 0.0;
    for (int l = 0; l < M; ++l)
        for (int m = 0; m < M; ++m) acc += (((l + m) % 2 == 0) ? 1.0 : -1.0) * S(l, m);
    return acc.real() / double(M);
}

inline SarModel make_sar_model(Eigen::MatrixXcd S, double delta) {
    SarModel model;
    model.s = sar_scalar(S);
    if (!(model.s > 0)) throw std::invalid_argument("make_sar_model: induced scalar not positive");
    model.S = std::move(S);
    model.delta = delta;
    return model;
}

// Per-step caps: p_j <= min_z delta_z / s_z on the restricted steps,
// unbounded elsewhere. Steps are 1-based in j_sar.
inline Eigen::VectorXd sar_power_caps(const std::vector<SarModel>& models,
                                      const std::vector<int>& j_sar, int M) {
    double cap = std::numeric_limits<double>::infinity();
    for (const auto& m : models) {
        if (!(m.s > 0)) throw std::invalid_argument("sar_power_caps: model scalar not positive");
        cap = std::min(cap, m.delta / m.s);
    }
    Eigen::VectorXd caps =
        Eigen::VectorXd::Constant(M, std::numeric_limits<double>::infinity());
    for (int j : j_sar) {
        if (j < 1 || j > M) throw std::out_of_range("sar_power_caps: step index out of range");
        caps[j - 1] = cap;
    }
    return caps;
}

// Max-min fairness program over rotation powers:
//   maximize xi  s.t.  A p >= xi * 1,  1^T p <= budget,  0 <= p <= caps.
struct LpInstance {
    Eigen::MatrixXd A;      // n x M exposure rows, nonnegative
    double budget = 0.0;
    Eigen::VectorXd caps;   // length M, entries in (0, inf]
};

inline LpInstance build_lp(const Eigen::MatrixXd& exposure, double p_T,
                           const Eigen::VectorXd& caps) {
    if (exposure.rows() < 1) throw std::invalid_argument("build_lp: need at least one device row");
    if (caps.size() != exposure.cols())
        throw std::invalid_argument("build_lp: caps length must match step count");
    return {exposure, p_T, caps};
}

inline LpInstance build_lp(const Eigen::MatrixXd& exposure, double p_T) {
    return build_lp(exposure, p_T,
                    Eigen::VectorXd::Constant(exposure.cols(),
                                              std::numeric_limits<double>::infinity()));
}

}  // namespace rabwet

#endif  // RABWET_POWER_CONTROL_HPP
