// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_REPORT_HPP
#define RABWET_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

namespace rabwet {

// Tabular result of one experiment. Cells are pre-formatted strings so the
// CSV and JSON emissions are byte-identical across runs; meta carries the
// effective experiment parameters.
struct MetricReport {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json meta = nlohmann::json::object();

    void add_row(std::initializer_list<std::string> cells) {
        std::vector<std::string> row(cells);
        if (row.size() != columns.size())
            throw std::invalid_argument("MetricReport: row width does not match header");
        rows.push_back(std::move(row));
    }
};

// Locale-independent numeric cell: ten significant digits, '.' separator.
inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return std::string(buf);
}

template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
std::string format_number(T value) {
    return std::to_string(value);
}

// Shortest decimal form that parses back to the same double; used where a
// value must survive a write/read round trip exactly (config echoes).
inline std::string format_number_exact(double value) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return std::string(buf);
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::ofstream open_text_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

inline std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace detail

inline void write_csv(const MetricReport& report, const std::string& path) {
    std::ofstream out = detail::open_text_out(path);
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        if (c) out << ',';
        out << detail::csv_escape(report.columns[c]);
    }
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << detail::csv_escape(row[c]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("short write: " + path);
}

// JSON mirror of the same table: {"meta": ..., "columns": [...], "rows": [[...]]}.
inline void write_json(const MetricReport& report, const std::string& path) {
    nlohmann::json j;
    j["meta"] = report.meta;
    j["columns"] = report.columns;
    j["rows"] = report.rows;
    std::ofstream out = detail::open_text_out(path);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("short write: " + path);
}

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

struct AxisScale {
    double lo, hi;
    double to_px(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

inline AxisScale axis_bounds(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::max(1.0, std::abs(lo) * 0.1);
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
}

inline const char* series_color(std::size_t k) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[k % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

// Self-contained SVG line chart; no renderer dependency, fixed 720x480 canvas.
inline void write_line_chart_svg(const std::string& path, const std::string& title,
                                 const std::string& x_label, const std::string& y_label,
                                 const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("write_line_chart_svg: no series");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_line_chart_svg: ragged series");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin))
        throw std::invalid_argument("write_line_chart_svg: no finite points");
    const detail::AxisScale xs = detail::axis_bounds(xmin, xmax);
    const detail::AxisScale ys = detail::axis_bounds(ymin, ymax);

    const double W = 720, H = 480, L = 76, R = 24, T = 44, B = 58;
    std::ofstream out = detail::open_text_out(path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n"
        << "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
    out << "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << detail::xml_escape(title) << "</text>\n";

    // frame and ticks
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  L, T, W - L - R, H - T - B);
    out << buf;
    for (int k = 0; k <= 4; ++k) {
        const double fx = xs.lo + (xs.hi - xs.lo) * k / 4.0;
        const double fy = ys.lo + (ys.hi - ys.lo) * k / 4.0;
        const double px = xs.to_px(fx, L, W - R);
        const double py = ys.to_px(fy, H - B, T);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#cccccc\"/>\n", px, T,
                      px, H - B);
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#cccccc\"/>\n", L, py,
                      W - R, py);
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                      "font-size=\"11\">%s</text>\n",
                      px, H - B + 16, detail::tick_label(fx).c_str());
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-family=\"sans-serif\" "
                      "font-size=\"11\">%s</text>\n",
                      L - 6, py + 4, detail::tick_label(fy).c_str());
        out << buf;
    }
    out << "<text x=\"360\" y=\"470\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << detail::xml_escape(x_label) << "</text>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"13\" transform=\"rotate(-90 16 %g)\">",
                  (T + H - B) / 2, (T + H - B) / 2);
    out << buf << detail::xml_escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(k)
            << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", xs.to_px(s.x[i], L, W - R),
                          ys.to_px(s.y[i], H - B, T));
            out << buf;
        }
        out << "\"/>\n";
        const double ly = T + 14 + 16 * double(k);
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" "
                      "stroke-width=\"2\"/>\n",
                      L + 10, ly, L + 34, ly, detail::series_color(k));
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\">", L + 40,
                      ly + 4);
        out << buf << detail::xml_escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error("short write: " + path);
}

namespace detail {

// Five-stop perceptual ramp, dark violet to yellow; t in [0, 1].
inline std::string ramp_color(double t) {
    static const double stops[5][3] = {{0.267, 0.005, 0.329},
                                       {0.229, 0.322, 0.545},
                                       {0.127, 0.566, 0.551},
                                       {0.369, 0.789, 0.383},
                                       {0.993, 0.906, 0.144}};
    t = std::min(1.0, std::max(0.0, t));
    const double u = t * 4.0;
    const int k = std::min(3, static_cast<int>(u));
    const double f = u - k;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(255 * (stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                  static_cast<int>(255 * (stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                  static_cast<int>(255 * (stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
    return std::string(buf);
}

}  // namespace detail

// Dense scalar field as an SVG cell grid; values row-major with ny rows of
// nx columns, NaN cells drawn light gray (masked regions).
inline void write_heatmap_svg(const std::string& path, const std::string& title, int nx, int ny,
                              const std::vector<double>& values, double vmin, double vmax) {
    if (nx < 1 || ny < 1 || values.size() != static_cast<std::size_t>(nx) * ny)
        throw std::invalid_argument("write_heatmap_svg: bad grid shape");
    if (!(vmax > vmin)) vmax = vmin + 1.0;
    const double side = 600.0;
    const double cw = side / nx, ch = side / ny;
    const double L = 40, T = 44;
    std::ofstream out = detail::open_text_out(path);
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\">\n",
                  L + side + 90, T + side + 24, L + side + 90, T + side + 24);
    out << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (L + side / 2)
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << detail::xml_escape(title) << "</text>\n";
    for (int r = 0; r < ny; ++r) {
        for (int c = 0; c < nx; ++c) {
            const double v = values[static_cast<std::size_t>(r) * nx + c];
            const std::string color =
                std::isnan(v) ? "#dddddd" : detail::ramp_color((v - vmin) / (vmax - vmin));
            // row 0 is the minimum y coordinate, drawn at the bottom
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                          "fill=\"%s\"/>\n",
                          L + c * cw, T + (ny - 1 - r) * ch, cw + 0.5, ch + 0.5, color.c_str());
            out << buf;
        }
    }
    // color bar with end labels
    for (int k = 0; k < 64; ++k) {
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%g\" y=\"%.2f\" width=\"18\" height=\"%.2f\" fill=\"%s\"/>\n",
                      L + side + 24, T + side - (k + 1) * side / 64.0, side / 64.0 + 0.5,
                      detail::ramp_color((k + 0.5) / 64.0).c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
                  L + side + 46, T + 10.0, detail::tick_label(vmax).c_str());
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
                  L + side + 46, T + side, detail::tick_label(vmin).c_str());
    out << buf;
    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace rabwet

#endif  // RABWET_REPORT_HPP
