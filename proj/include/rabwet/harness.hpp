// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_HARNESS_HPP
#define RABWET_HARNESS_HPP

#include "rabwet/config.hpp"
#include "rabwet/patterns.hpp"
#include "rabwet/power_control.hpp"
#include "rabwet/report.hpp"
#include "rabwet/rotation.hpp"
#include "rabwet/solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabwet {

// A solver that fails its own certificate is a numerical failure, not a bad
// input; the command line maps this to its own exit code.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dbm_from_watts(double watts) {
    return 10.0 * std::log10(std::max(watts, 1e-300) * 1000.0);
}

inline double watts_from_dbm(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

namespace detail {

// Stream-id layout under one master seed: deployments live in the low block,
// fading in a disjoint high block, so adding trials never shifts other draws.
inline std::uint64_t deployment_stream(long long trial) {
    return static_cast<std::uint64_t>(trial);
}
inline std::uint64_t fading_stream(long long trial) {
    return (std::uint64_t{1} << 48) + static_cast<std::uint64_t>(trial);
}

}  // namespace detail

// Exposure matrix text file: 'm = N', N 'row = re,im re,im ...' lines in row
// order, then 'delta = W' for the exposure limit ('inf' allowed).
inline SarModel load_sar_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open SAR file: " + path);
    int M = 0;
    std::vector<std::string> row_text;
    double delta = std::numeric_limits<double>::infinity();
    bool have_delta = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key == "m") M = static_cast<int>(detail::parse_int(value, where));
        else if (key == "row") row_text.push_back(value);
        else if (key == "delta") { delta = detail::parse_double(value, where); have_delta = true; }
        else throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (M < 1) throw ConfigError(path + ": missing or invalid matrix order 'm'");
    if (static_cast<int>(row_text.size()) != M)
        throw ConfigError(path + ": expected " + std::to_string(M) + " 'row' lines, got " +
                          std::to_string(row_text.size()));
    if (!have_delta) throw ConfigError(path + ": missing exposure limit 'delta'");
    Eigen::MatrixXcd S(M, M);
    for (int r = 0; r < M; ++r) {
        std::istringstream ss(row_text[static_cast<std::size_t>(r)]);
        std::string tok;
        int c = 0;
        while (ss >> tok) {
            if (c >= M) throw ConfigError(path + ": row " + std::to_string(r + 1) + " too long");
            const std::size_t comma = tok.find(',');
            if (comma == std::string::npos)
                throw ConfigError(path + ": entry '" + tok + "' is not re,im");
            const std::string where = path + " row " + std::to_string(r + 1);
            S(r, c) = std::complex<double>(detail::parse_double(tok.substr(0, comma), where),
                                           detail::parse_double(tok.substr(comma + 1), where));
            ++c;
        }
        if (c != M)
            throw ConfigError(path + ": row " + std::to_string(r + 1) + " has " +
                              std::to_string(c) + " entries, want " + std::to_string(M));
    }
    return make_sar_model(std::move(S), delta);
}

// Time-averaged directional gain of each scheme toward azimuth theta. The
// rotating scheme averages its pattern over the step schedule; switched and
// random-phase schemes average to the isotropic unit gain.
inline double average_directional_gain(const std::string& scheme, const ArrayConfig& cfg,
                                       double theta) {
    if (scheme == "RAB") return average_rotated_gain<double>(cfg, theta);
    if (scheme == "AA-SS-II") return rab_gain_closed_form<double>(cfg, theta);
    if (scheme == "AA-SS-I")
        return gain<double>(make_precoder<double>(Scheme::AA_SS_I, cfg, 1.0), theta);
    if (scheme == "SA" || scheme == "AA-IS" || scheme == "RPS-EMW") return 1.0;
    if (scheme == "FULL-CSI") return static_cast<double>(cfg.M);
    throw ConfigError("unknown scheme '" + scheme + "'");
}

// Average received power field on a square grid around the beacon, dBm,
// clamped to [-100, 40]; cells inside the near-field exclusion radius are
// NaN and excluded from coverage statistics.
struct Heatmap {
    std::string scheme;
    std::vector<double> xs, ys;     // cell centers, meters
    std::vector<double> values_dbm; // row-major, ys.size() rows of xs.size()
};

inline Heatmap compute_heatmap(const ScenarioConfig& cfg, const std::string& scheme) {
    const ArrayConfig arr{cfg.m};
    const int cells =
        static_cast<int>(std::lround(2.0 * cfg.grid_half_width / cfg.grid_spacing)) + 1;
    Heatmap hm;
    hm.scheme = scheme;
    hm.xs.resize(static_cast<std::size_t>(cells));
    hm.ys.resize(static_cast<std::size_t>(cells));
    for (int k = 0; k < cells; ++k)
        hm.xs[static_cast<std::size_t>(k)] = hm.ys[static_cast<std::size_t>(k)] =
            -cfg.grid_half_width + k * cfg.grid_spacing;
    hm.values_dbm.assign(static_cast<std::size_t>(cells) * cells,
                         std::numeric_limits<double>::quiet_NaN());
    for (int iy = 0; iy < cells; ++iy) {
        for (int ix = 0; ix < cells; ++ix) {
            const double x = hm.xs[static_cast<std::size_t>(ix)];
            const double y = hm.ys[static_cast<std::size_t>(iy)];
            const double d = std::hypot(x, y);
            if (d < cfg.exclusion_radius || d <= 0.0) continue;
            const double g = average_directional_gain(scheme, arr, std::atan2(y, x));
            const double watts = path_loss(d, cfg.alpha, cfg.ref_loss) * cfg.p_T * g;
            const double dbm = std::clamp(dbm_from_watts(watts), -100.0, 40.0);
            hm.values_dbm[static_cast<std::size_t>(iy) * cells + ix] = dbm;
        }
    }
    return hm;
}

inline double coverage_fraction(const Heatmap& hm, double threshold_dbm) {
    long long valid = 0, hit = 0;
    for (double v : hm.values_dbm) {
        if (std::isnan(v)) continue;
        ++valid;
        if (v >= threshold_dbm) ++hit;
    }
    if (valid == 0) throw std::runtime_error("coverage_fraction: empty grid");
    return static_cast<double>(hit) / static_cast<double>(valid);
}

inline MetricReport heatmap_report(const ScenarioConfig& cfg, const Heatmap& hm) {
    MetricReport rep;
    rep.columns = {"x_m", "y_m", "scheme", "power_dbm"};
    rep.meta["experiment"] = "heatmap";
    rep.meta["config_echo"] = render_config(cfg);
    const std::size_t nx = hm.xs.size();
    for (std::size_t iy = 0; iy < hm.ys.size(); ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double v = hm.values_dbm[iy * nx + ix];
            if (std::isnan(v)) continue;
            rep.add_row({format_number(hm.xs[ix]), format_number(hm.ys[iy]), hm.scheme,
                         format_number(v)});
        }
    return rep;
}

// Coverage is deterministic (trials column is 0): the field itself is an
// expectation, so the fraction needs no Monte Carlo.
inline MetricReport coverage_report(const ScenarioConfig& cfg) {
    MetricReport rep;
    rep.columns = {"sweep_value", "scheme", "metric", "unit", "trials", "seed"};
    rep.meta["experiment"] = "coverage";
    rep.meta["config_echo"] = render_config(cfg);
    for (double thr : cfg.thresholds_dbm)
        for (const auto& scheme : cfg.schemes) {
            const Heatmap hm = compute_heatmap(cfg, scheme);
            rep.add_row({format_number(thr), scheme, format_number(coverage_fraction(hm, thr)),
                         "fraction", "0", format_number(cfg.master_seed)});
        }
    return rep;
}

// Monte Carlo worst-device sweep over deployment sizes. Device sets are
// nested across sizes within a trial (prefixes of one stream), so curves
// share their randomness and per-deployment comparisons are paired.
struct WorstCaseResult {
    std::vector<int> sizes;
    std::vector<std::string> labels;
    std::vector<Eigen::MatrixXd> samples; // per label: trials x sizes, watts
};

inline WorstCaseResult run_worst_case_sweep(const ScenarioConfig& cfg) {
    const ArrayConfig arr{cfg.m};
    const bool rician = cfg.channel == "rician";
    const double kappa = std::pow(10.0, cfg.kappa_db / 10.0);

    WorstCaseResult res;
    res.sizes = cfg.sizes;
    std::sort(res.sizes.begin(), res.sizes.end());
    res.sizes.erase(std::unique(res.sizes.begin(), res.sizes.end()), res.sizes.end());
    const int nmax = res.sizes.back();
    const int ns = static_cast<int>(res.sizes.size());

    for (const auto& mode : cfg.modes) {
        if (mode == "uniform") res.labels.push_back("RAB-UNIF");
        else if (mode == "heuristic") res.labels.push_back("RAB-HEUR");
        else res.labels.push_back("RAB-LP");
    }
    if (cfg.include_sa) res.labels.push_back("SA");
    if (cfg.include_full_csi) res.labels.push_back("FULL-CSI");
    for (std::size_t l = 0; l < res.labels.size(); ++l)
        res.samples.emplace_back(cfg.trials, ns);

    const Eigen::VectorXd p_unif =
        Eigen::VectorXd::Constant(arr.M, cfg.p_T / static_cast<double>(arr.M));

    for (long long tr = 0; tr < cfg.trials; ++tr) {
        RngStream dep_rng(cfg.master_seed, detail::deployment_stream(tr));
        const Deployment dep = sample_deployment(nmax, cfg.region_radius, dep_rng);
        const Eigen::MatrixXd A = exposure_coefficients<double>(dep, arr, cfg.alpha);
        Eigen::VectorXd betas(nmax);
        for (int i = 0; i < nmax; ++i)
            betas[i] = path_loss(dep.devices[static_cast<std::size_t>(i)].distance, cfg.alpha,
                                 cfg.ref_loss);

        // Realized per-step channel gains (rotation plans on the expected
        // exposure; delivery happens on the fading channel). The full-CSI
        // benchmark sees one realization per trial and optimizes against it.
        Eigen::MatrixXd g_real;
        std::vector<std::pair<double, Eigen::VectorXcd>> fc_channels(
            static_cast<std::size_t>(nmax));
        if (rician) {
            RngStream fad(cfg.master_seed, detail::fading_stream(tr));
            g_real.resize(nmax, arr.M);
            const Eigen::VectorXcd v = make_precoder<double>(Scheme::AA_SS_II, arr, 1.0).weights.col(0);
            for (int j = 1; j <= arr.M; ++j) {
                const double off = kPi * static_cast<double>(j) / arr.M;
                for (int i = 0; i < nmax; ++i) {
                    const auto ch = sample_rician<double>(
                        arr, dep.devices[static_cast<std::size_t>(i)].theta + off, kappa, fad);
                    const std::complex<double> amp = v.transpose() * ch.vector;
                    g_real(i, j - 1) = std::norm(amp);
                }
            }
            for (int i = 0; i < nmax; ++i)
                fc_channels[static_cast<std::size_t>(i)] = {
                    betas[i],
                    sample_rician<double>(arr, dep.devices[static_cast<std::size_t>(i)].theta,
                                          kappa, fad)
                        .vector};
        } else {
            for (int i = 0; i < nmax; ++i)
                fc_channels[static_cast<std::size_t>(i)] = {
                    betas[i],
                    steering_vector<double>(arr, dep.devices[static_cast<std::size_t>(i)].theta)
                        .vector};
        }

        const auto worst_watts = [&](const Eigen::VectorXd& p, int n) {
            if (!rician) return cfg.ref_loss * arr.M * (A.topRows(n) * p).minCoeff();
            return ((g_real.topRows(n) * p).array() * betas.head(n).array()).minCoeff();
        };

        for (int s = 0; s < ns; ++s) {
            const int n = res.sizes[static_cast<std::size_t>(s)];
            std::size_t l = 0;
            for (const auto& mode : cfg.modes) {
                if (mode == "uniform") {
                    res.samples[l](tr, s) = worst_watts(p_unif, n);
                } else if (mode == "heuristic") {
                    Deployment head{{dep.devices.begin(), dep.devices.begin() + n},
                                    dep.region_radius};
                    const auto alloc = heuristic_allocation<double>(head, arr, cfg.alpha, cfg.p_T);
                    res.samples[l](tr, s) = worst_watts(alloc.p, n);
                } else {
                    const auto lp = solve_lp_maximin(build_lp(A.topRows(n), cfg.p_T));
                    if (!lp.certified)
                        throw NumericalFailure("rotation power program lost its certificate");
                    res.samples[l](tr, s) = worst_watts(lp.alloc.p, n);
                }
                ++l;
            }
            if (cfg.include_sa) {
                res.samples[l](tr, s) = betas.head(n).minCoeff() * cfg.p_T;
                ++l;
            }
            if (cfg.include_full_csi) {
                const std::vector<std::pair<double, Eigen::VectorXcd>> head(
                    fc_channels.begin(), fc_channels.begin() + n);
                const auto sol = solve_maximin_covariance(head, cfg.p_T);
                if (sol.status != SolverStatus::Converged)
                    throw NumericalFailure("covariance program did not converge");
                res.samples[l](tr, s) = sol.achieved_xi;
            }
        }
    }
    return res;
}

// Worst-case curves: the reported point is the dBm of the mean (in watts)
// of the per-deployment worst-device average power.
inline MetricReport worst_case_report(const ScenarioConfig& cfg, const WorstCaseResult& res) {
    MetricReport rep;
    rep.columns = {"sweep_value", "scheme", "metric", "unit", "trials", "seed"};
    rep.meta["experiment"] = "worst-case";
    rep.meta["config_echo"] = render_config(cfg);
    for (std::size_t s = 0; s < res.sizes.size(); ++s)
        for (std::size_t l = 0; l < res.labels.size(); ++l) {
            const double mean_watts = res.samples[l].col(static_cast<Eigen::Index>(s)).mean();
            rep.add_row({format_number(res.sizes[s]), res.labels[l],
                         format_number(dbm_from_watts(mean_watts)), "dbm",
                         format_number(cfg.trials), format_number(cfg.master_seed)});
        }
    return rep;
}

// Exposure-limit sweep at the largest configured deployment size, LOS. The
// rotating beacon meets the limit through per-step power caps on the
// restricted steps; the full-CSI benchmark through the trace constraint.
struct SarSweepResult {
    std::vector<double> deltas;
    int devices = 0;
    std::vector<std::string> labels;
    std::vector<Eigen::MatrixXd> samples; // per label: trials x deltas, watts
};

inline SarSweepResult run_sar_sweep(const ScenarioConfig& cfg, const SarModel& base) {
    const ArrayConfig arr{cfg.m};
    if (static_cast<int>(base.S.rows()) != arr.M)
        throw ConfigError("SAR matrix order does not match the array size");
    SarSweepResult res;
    res.deltas = cfg.deltas;
    res.devices = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    res.labels.push_back("RAB-LP");
    if (cfg.include_full_csi) res.labels.push_back("FULL-CSI");
    const int nd = static_cast<int>(res.deltas.size());
    for (std::size_t l = 0; l < res.labels.size(); ++l)
        res.samples.emplace_back(cfg.trials, nd);

    for (long long tr = 0; tr < cfg.trials; ++tr) {
        RngStream dep_rng(cfg.master_seed, detail::deployment_stream(tr));
        const Deployment dep = sample_deployment(res.devices, cfg.region_radius, dep_rng);
        const Eigen::MatrixXd A = exposure_coefficients<double>(dep, arr, cfg.alpha);
        std::vector<std::pair<double, Eigen::VectorXcd>> channels;
        channels.reserve(dep.devices.size());
        for (const auto& dev : dep.devices)
            channels.emplace_back(path_loss(dev.distance, cfg.alpha, cfg.ref_loss),
                                  steering_vector<double>(arr, dev.theta).vector);

        for (int d = 0; d < nd; ++d) {
            SarModel model = base;
            model.delta = res.deltas[static_cast<std::size_t>(d)];
            const Eigen::VectorXd caps = sar_power_caps({model}, cfg.sar_steps, arr.M);
            const auto lp = solve_lp_maximin(build_lp(A, cfg.p_T, caps));
            if (!lp.certified)
                throw NumericalFailure("rotation power program lost its certificate");
            res.samples[0](tr, d) = cfg.ref_loss * arr.M * lp.objective;
            if (cfg.include_full_csi) {
                const auto sol = solve_maximin_covariance(channels, cfg.p_T, &model);
                if (sol.status == SolverStatus::NotConverged)
                    throw NumericalFailure("covariance program did not converge");
                res.samples[1](tr, d) = sol.achieved_xi;
            }
        }
    }
    return res;
}

inline MetricReport sar_sweep_report(const ScenarioConfig& cfg, const SarSweepResult& res) {
    MetricReport rep;
    rep.columns = {"sweep_value", "scheme", "metric", "unit", "trials", "seed"};
    rep.meta["experiment"] = "sar-sweep";
    rep.meta["devices"] = res.devices;
    rep.meta["config_echo"] = render_config(cfg);
    for (std::size_t d = 0; d < res.deltas.size(); ++d)
        for (std::size_t l = 0; l < res.labels.size(); ++l) {
            const double mean_watts = res.samples[l].col(static_cast<Eigen::Index>(d)).mean();
            rep.add_row({format_number(res.deltas[d]), res.labels[l],
                         format_number(dbm_from_watts(mean_watts)), "dbm",
                         format_number(cfg.trials), format_number(cfg.master_seed)});
        }
    return rep;
}

}  // namespace rabwet

#endif  // RABWET_HARNESS_HPP
