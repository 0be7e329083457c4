// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#include "rabwet/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace rabwet;

#ifndef RABWET_DATA_DIR
#define RABWET_DATA_DIR "data"
#endif

struct CommonOpts {
    std::string config;
    std::vector<std::string> sets;
    std::string out = ".";
    std::uint64_t seed = 0;
    long long trials = 0;
    bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "scenario config file");
    cmd->add_option("--set", o.sets, "override as KEY=VALUE or section.KEY=VALUE");
    cmd->add_option("--out", o.out, "output directory (created if missing)");
    cmd->add_option("--seed", o.seed, "master seed for all random streams");
    cmd->add_option("--trials", o.trials, "Monte Carlo trial count");
    cmd->add_flag("--plot", o.plot, "also emit a standalone SVG plot");
}

// Defaults, then file, then --set in order, then the dedicated flags.
ScenarioConfig effective_config(const CLI::App* cmd, const CommonOpts& o) {
    ScenarioConfig cfg;
    if (!o.config.empty()) apply_config_file(cfg, o.config);
    for (const auto& s : o.sets) apply_override(cfg, s);
    if (cmd->count("--seed")) cfg.master_seed = o.seed;
    if (cmd->count("--trials")) cfg.trials = o.trials;
    return cfg;
}

template <typename PlotFn>
void emit(const CommonOpts& o, const ScenarioConfig& cfg, const std::string& name,
          const MetricReport& rep, PlotFn&& plot) {
    std::filesystem::create_directories(o.out);
    const std::string base = o.out + "/" + name;
    write_csv(rep, base + ".csv");
    write_json(rep, base + ".json");
    write_effective_config(cfg, base + "_effective.ini");
    std::cout << "wrote " << base << ".csv, " << base << ".json, " << base
              << "_effective.ini";
    if (o.plot) {
        plot(base + ".svg");
        std::cout << ", " << base << ".svg";
    }
    std::cout << "\n";
}

std::vector<double> theta_grid(int segments) {
    std::vector<double> t(static_cast<std::size_t>(segments) + 1);
    for (int k = 0; k <= segments; ++k) t[static_cast<std::size_t>(k)] = kTwoPi * k / segments;
    return t;
}

const char* kMetricColumns[6] = {"sweep_value", "scheme", "metric", "unit", "trials", "seed"};

MetricReport metric_frame(const ScenarioConfig& cfg, const std::string& experiment) {
    MetricReport rep;
    rep.columns.assign(std::begin(kMetricColumns), std::end(kMetricColumns));
    rep.meta["experiment"] = experiment;
    rep.meta["config_echo"] = render_config(cfg);
    return rep;
}

void cmd_pattern(const CommonOpts& o, const ScenarioConfig& cfg) {
    const ArrayConfig arr{cfg.m};
    MetricReport rep = metric_frame(cfg, "pattern");
    PlotSeries series{"AA-SS-II, M=" + std::to_string(cfg.m), {}, {}};
    for (double th : theta_grid(1440)) {
        const double g = rab_gain_closed_form<double>(arr, th);
        rep.add_row({format_number(th), "AA-SS-II", format_number(g), "gain_linear", "0",
                     format_number(cfg.master_seed)});
        series.x.push_back(th);
        series.y.push_back(g);
    }
    emit(o, cfg, "pattern", rep, [&](const std::string& path) {
        write_line_chart_svg(path, "Alternating-sign pattern", "azimuth (rad)", "gain",
                             {series});
    });
}

void cmd_gain_scaling(const CommonOpts& o, const ScenarioConfig& cfg, int m_max) {
    MetricReport rep = metric_frame(cfg, "gain-scaling");
    PlotSeries exact{"rotation average", {}, {}}, fit{"0.85 sqrt(M)", {}, {}};
    for (const auto& [m, gbar, model] : scaling_fit<double>(1, m_max)) {
        rep.add_row({format_number(m), "RAB", format_number(gbar), "gain_linear", "0",
                     format_number(cfg.master_seed)});
        rep.add_row({format_number(m), "SQRT-FIT", format_number(model), "gain_linear", "0",
                     format_number(cfg.master_seed)});
        exact.x.push_back(m);
        exact.y.push_back(gbar);
        fit.x.push_back(m);
        fit.y.push_back(model);
    }
    emit(o, cfg, "gain-scaling", rep, [&](const std::string& path) {
        write_line_chart_svg(path, "Average harvesting gain vs array size", "antennas M",
                             "average gain", {exact, fit});
    });
}

void cmd_rotation_pattern(const CommonOpts& o, const ScenarioConfig& cfg) {
    const ArrayConfig arr{cfg.m};
    MetricReport rep = metric_frame(cfg, "rotation-pattern");
    std::vector<PlotSeries> series;
    const auto grid = theta_grid(720);
    for (int j = 1; j <= arr.M; ++j) {
        PlotSeries s{"step " + std::to_string(j), {}, {}};
        for (double th : grid) {
            const double g = rotated_gain<double>(arr, th, j);
            rep.add_row({format_number(th), "RAB-STEP-" + std::to_string(j), format_number(g),
                         "gain_linear", "0", format_number(cfg.master_seed)});
            s.x.push_back(th);
            s.y.push_back(g);
        }
        series.push_back(std::move(s));
    }
    PlotSeries avg{"schedule average", {}, {}};
    for (double th : grid) {
        const double g = average_rotated_gain<double>(arr, th);
        rep.add_row({format_number(th), "RAB", format_number(g), "gain_linear", "0",
                     format_number(cfg.master_seed)});
        avg.x.push_back(th);
        avg.y.push_back(g);
    }
    series.push_back(std::move(avg));
    emit(o, cfg, "rotation-pattern", rep, [&](const std::string& path) {
        write_line_chart_svg(path, "Rotated patterns and schedule average", "azimuth (rad)",
                             "gain", series);
    });
}

void cmd_heatmap(const CommonOpts& o, const ScenarioConfig& cfg, const std::string& scheme) {
    const Heatmap hm = compute_heatmap(cfg, scheme);
    MetricReport rep = heatmap_report(cfg, hm);
    emit(o, cfg, "heatmap", rep, [&](const std::string& path) {
        double lo = 40.0, hi = -100.0;
        for (double v : hm.values_dbm)
            if (!std::isnan(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        write_heatmap_svg(path, "Average received power (dBm), " + scheme,
                          static_cast<int>(hm.xs.size()), static_cast<int>(hm.ys.size()),
                          hm.values_dbm, lo, hi);
    });
}

void cmd_coverage(const CommonOpts& o, const ScenarioConfig& cfg) {
    MetricReport rep = coverage_report(cfg);
    emit(o, cfg, "coverage", rep, [&](const std::string& path) {
        std::vector<PlotSeries> series;
        for (const auto& scheme : cfg.schemes) {
            PlotSeries s{scheme, {}, {}};
            const Heatmap hm = compute_heatmap(cfg, scheme);
            for (double thr : cfg.thresholds_dbm) {
                s.x.push_back(thr);
                s.y.push_back(coverage_fraction(hm, thr));
            }
            series.push_back(std::move(s));
        }
        write_line_chart_svg(path, "Coverage vs activation threshold", "threshold (dBm)",
                             "covered fraction", series);
    });
}

void cmd_worst_case(const CommonOpts& o, const ScenarioConfig& cfg) {
    const WorstCaseResult res = run_worst_case_sweep(cfg);
    MetricReport rep = worst_case_report(cfg, res);
    emit(o, cfg, "worst-case", rep, [&](const std::string& path) {
        std::vector<PlotSeries> series;
        for (std::size_t l = 0; l < res.labels.size(); ++l) {
            PlotSeries s{res.labels[l], {}, {}};
            for (std::size_t k = 0; k < res.sizes.size(); ++k) {
                s.x.push_back(res.sizes[k]);
                s.y.push_back(
                    dbm_from_watts(res.samples[l].col(static_cast<Eigen::Index>(k)).mean()));
            }
            series.push_back(std::move(s));
        }
        write_line_chart_svg(path, "Worst-device average power", "deployment size",
                             "power (dBm)", series);
    });
}

std::string resolve_sar_file(const ScenarioConfig& cfg) {
    return cfg.sar_file.empty() ? std::string(RABWET_DATA_DIR) + "/sar_4x4_example.txt"
                                : cfg.sar_file;
}

void cmd_sar_sweep(const CommonOpts& o, ScenarioConfig cfg) {
    cfg.sar_file = resolve_sar_file(cfg);
    const SarModel base = load_sar_model(cfg.sar_file);
    const SarSweepResult res = run_sar_sweep(cfg, base);
    MetricReport rep = sar_sweep_report(cfg, res);
    emit(o, cfg, "sar-sweep", rep, [&](const std::string& path) {
        std::vector<PlotSeries> series;
        for (std::size_t l = 0; l < res.labels.size(); ++l) {
            PlotSeries s{res.labels[l], {}, {}};
            for (std::size_t d = 0; d < res.deltas.size(); ++d) {
                if (!std::isfinite(res.deltas[d])) continue;
                s.x.push_back(res.deltas[d]);
                s.y.push_back(
                    dbm_from_watts(res.samples[l].col(static_cast<Eigen::Index>(d)).mean()));
            }
            series.push_back(std::move(s));
        }
        write_line_chart_svg(path, "Worst-device power vs exposure limit", "limit (W)",
                             "power (dBm)", series);
    });
}

void cmd_solve_lp(const CommonOpts& o, const ScenarioConfig& cfg) {
    const ArrayConfig arr{cfg.m};
    const int n = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    const Deployment dep = sample_deployment(n, cfg.region_radius, cfg.master_seed);
    const Eigen::MatrixXd A = exposure_coefficients<double>(dep, arr, cfg.alpha);
    LpInstance inst = build_lp(A, cfg.p_T);
    if (!cfg.sar_file.empty())
        inst.caps = sar_power_caps({load_sar_model(cfg.sar_file)}, cfg.sar_steps, arr.M);
    const LpSolution sol = solve_lp_maximin(inst);
    if (!sol.certified) throw NumericalFailure("rotation power program lost its certificate");

    MetricReport rep = metric_frame(cfg, "solve-lp");
    rep.meta["devices"] = n;
    rep.meta["pivots"] = sol.pivots;
    rep.meta["duality_gap"] = sol.duality_gap;
    rep.meta["worst_device_watts"] = cfg.ref_loss * arr.M * sol.objective;
    PlotSeries s{"per-step power", {}, {}};
    for (int j = 0; j < arr.M; ++j) {
        rep.add_row({format_number(j + 1), "RAB-LP", format_number(sol.alloc.p[j]),
                     "watts_step", "1", format_number(cfg.master_seed)});
        s.x.push_back(j + 1);
        s.y.push_back(sol.alloc.p[j]);
    }
    rep.add_row({"0", "RAB-LP", format_number(cfg.ref_loss * arr.M * sol.objective),
                 "watts_worst_device", "1", format_number(cfg.master_seed)});
    emit(o, cfg, "solve-lp", rep, [&](const std::string& path) {
        write_line_chart_svg(path, "Optimized rotation powers", "rotation step", "power (W)",
                             {s});
    });
}

void cmd_solve_fullcsi(const CommonOpts& o, const ScenarioConfig& cfg) {
    const ArrayConfig arr{cfg.m};
    const int n = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
    const Deployment dep = sample_deployment(n, cfg.region_radius, cfg.master_seed);
    const bool rician = cfg.channel == "rician";
    const double kappa = std::pow(10.0, cfg.kappa_db / 10.0);
    RngStream fad(cfg.master_seed, (std::uint64_t{1} << 48));
    std::vector<std::pair<double, Eigen::VectorXcd>> channels;
    channels.reserve(dep.devices.size());
    for (const auto& dev : dep.devices) {
        const double beta = path_loss(dev.distance, cfg.alpha, cfg.ref_loss);
        const Eigen::VectorXcd h =
            rician ? sample_rician<double>(arr, dev.theta, kappa, fad).vector
                   : steering_vector<double>(arr, dev.theta).vector;
        channels.emplace_back(beta, h);
    }
    SarModel model;
    const SarModel* sar = nullptr;
    if (!cfg.sar_file.empty()) {
        model = load_sar_model(cfg.sar_file);
        sar = &model;
    }
    const CovarianceSolution sol = solve_maximin_covariance(channels, cfg.p_T, sar);
    if (sol.status == SolverStatus::NotConverged)
        throw NumericalFailure("covariance program did not converge");

    MetricReport rep = metric_frame(cfg, "solve-fullcsi");
    rep.meta["devices"] = n;
    rep.meta["newton_iterations"] = sol.newton_iterations;
    rep.meta["worst_device_watts"] = sol.achieved_xi;
    rep.meta["trace_watts"] = sol.V.trace().real();
    rep.meta["sar_limited"] = sol.status == SolverStatus::SarInfeasible;
    PlotSeries s{"per-device power", {}, {}};
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto& [beta, h] = channels[i];
        const double watts = beta * (h.adjoint() * sol.V * h).real()(0, 0);
        rep.add_row({format_number(static_cast<int>(i) + 1), "FULL-CSI", format_number(watts),
                     "watts_device", "1", format_number(cfg.master_seed)});
        s.x.push_back(static_cast<double>(i) + 1);
        s.y.push_back(watts);
    }
    emit(o, cfg, "solve-fullcsi", rep, [&](const std::string& path) {
        write_line_chart_svg(path, "Per-device delivered power", "device index", "power (W)",
                             {s});
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotary antenna beamforming toolkit for wireless energy transfer"};
    app.require_subcommand(1);

    CommonOpts opt_pattern, opt_scaling, opt_rotation, opt_heatmap, opt_coverage, opt_worst,
        opt_sar, opt_lp, opt_fullcsi;
    int pattern_m = 0;
    int m_max = 32;
    std::string heatmap_scheme = "RAB";

    CLI::App* c_pattern = app.add_subcommand("pattern", "directional pattern of the static array");
    add_common(c_pattern, opt_pattern);
    c_pattern->add_option("--M", pattern_m, "antenna count override");

    CLI::App* c_scaling =
        app.add_subcommand("gain-scaling", "average gain vs array size with sqrt growth model");
    add_common(c_scaling, opt_scaling);
    c_scaling->add_option("--M-max", m_max, "largest array size")->check(CLI::Range(1, 512));

    CLI::App* c_rotation =
        app.add_subcommand("rotation-pattern", "per-step patterns and the schedule average");
    add_common(c_rotation, opt_rotation);
    CLI::App* c_heatmap = app.add_subcommand("heatmap", "received power field on a square grid");
    add_common(c_heatmap, opt_heatmap);
    c_heatmap->add_option("--scheme", heatmap_scheme, "scheme label (default RAB)");
    CLI::App* c_coverage =
        app.add_subcommand("coverage", "fraction of the grid above activation thresholds");
    add_common(c_coverage, opt_coverage);
    CLI::App* c_worst =
        app.add_subcommand("worst-case", "worst-device power vs deployment size (Monte Carlo)");
    add_common(c_worst, opt_worst);
    CLI::App* c_sar =
        app.add_subcommand("sar-sweep", "worst-device power vs exposure limit (Monte Carlo)");
    add_common(c_sar, opt_sar);
    CLI::App* c_lp = app.add_subcommand("solve-lp", "rotation power program on one deployment");
    add_common(c_lp, opt_lp);
    CLI::App* c_fullcsi =
        app.add_subcommand("solve-fullcsi", "covariance program on one deployment");
    add_common(c_fullcsi, opt_fullcsi);

    c_pattern->callback([&] {
        ScenarioConfig cfg = effective_config(c_pattern, opt_pattern);
        if (c_pattern->count("--M")) cfg.m = pattern_m;
        validate_config(cfg);
        cmd_pattern(opt_pattern, cfg);
    });
    c_scaling->callback([&] {
        ScenarioConfig cfg = effective_config(c_scaling, opt_scaling);
        validate_config(cfg);
        cmd_gain_scaling(opt_scaling, cfg, m_max);
    });
    c_rotation->callback([&] {
        ScenarioConfig cfg = effective_config(c_rotation, opt_rotation);
        validate_config(cfg);
        cmd_rotation_pattern(opt_rotation, cfg);
    });
    c_heatmap->callback([&] {
        ScenarioConfig cfg = effective_config(c_heatmap, opt_heatmap);
        validate_config(cfg);
        cmd_heatmap(opt_heatmap, cfg, rabwet::detail::to_upper(heatmap_scheme));
    });
    c_coverage->callback([&] {
        ScenarioConfig cfg = effective_config(c_coverage, opt_coverage);
        validate_config(cfg);
        cmd_coverage(opt_coverage, cfg);
    });
    c_worst->callback([&] {
        ScenarioConfig cfg = effective_config(c_worst, opt_worst);
        validate_config(cfg);
        cmd_worst_case(opt_worst, cfg);
    });
    c_sar->callback([&] {
        ScenarioConfig cfg = effective_config(c_sar, opt_sar);
        validate_config(cfg);
        cmd_sar_sweep(opt_sar, cfg);
    });
    c_lp->callback([&] {
        ScenarioConfig cfg = effective_config(c_lp, opt_lp);
        validate_config(cfg);
        cmd_solve_lp(opt_lp, cfg);
    });
    c_fullcsi->callback([&] {
        ScenarioConfig cfg = effective_config(c_fullcsi, opt_fullcsi);
        validate_config(cfg);
        cmd_solve_fullcsi(opt_fullcsi, cfg);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const rabwet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const rabwet::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
