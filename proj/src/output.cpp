#include "ststoa/scenario.hpp"

#include "ststoa/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ststoa {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string fixed(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    std::string s(buf, res.ptr);
    return s == "-0.00" || s == "-0.0" || s == "-0" ? s.substr(1) : s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::string csv_table(const std::vector<double>& t, const PanelResult& p) {
    std::string s = "t,rho_sts,rho_kijowski_transmitted,rho_kijowski_free,flux\n";
    auto cell = [&](const std::optional<TOADistribution>& d, std::size_t i) {
        s += ',';
        if (d) {
            s += format_double(d->density[i]);
        }
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        s += format_double(t[i]);
        cell(p.sts, i);
        cell(p.kijowski_transmitted, i);
        cell(p.kijowski_free, i);
        s += ',';
        if (p.flux) {
            s += format_double((*p.flux)[i]);
        }
        s += '\n';
    }
    return s;
}

} // namespace

std::vector<std::filesystem::path> emit_csv(const ResultBundle& bundle,
                                            const std::filesystem::path& path) {
    if (bundle.t.empty()) {
        throw ConfigError("tgrid", "empty time grid; nothing to write to " + path.string());
    }
    if (bundle.panels.empty()) {
        throw ConfigError("potential.v0", "no panels; nothing to write to " + path.string());
    }
    std::vector<std::filesystem::path> written;
    if (bundle.panels.size() == 1) {
        write_file(path, csv_table(bundle.t, bundle.panels.front()));
        written.push_back(path);
        return written;
    }
    for (const auto& panel : bundle.panels) {
        auto target = path;
        target.replace_filename(path.stem().string() + "_v0_" + shortest(panel.v0) +
                                path.extension().string());
        write_file(target, csv_table(bundle.t, panel));
        written.push_back(target);
    }
    return written;
}

namespace {

// 1, 2 or 5 times a power of ten giving about five intervals.
double tick_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double f : {1.0, 2.0, 5.0}) {
        if (f * mag >= raw) {
            return f * mag;
        }
    }
    return 10.0 * mag;
}

struct Curve {
    const std::vector<double>* y;
    double scale;
    const char* style;
    const char* label;
};

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 300.0;
constexpr double kLeft = 62.0;
constexpr double kRight = 16.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 44.0;

void draw_panel(std::ostringstream& svg, const ResultBundle& bundle, const PanelResult& p,
                double ox, double oy) {
    const auto& t = bundle.t;
    const double t0 = bundle.config.t_min;
    const double t1 = std::min(bundle.config.plot_t_max, bundle.config.t_max);

    std::vector<Curve> curves;
    if (p.sts) {
        curves.push_back({&p.sts->density, 1.0, "stroke=\"#1f4e9c\" stroke-width=\"1.6\"", "STS"});
    }
    if (p.kijowski_transmitted) {
        curves.push_back({&p.kijowski_transmitted->density, 1.0,
                          "stroke=\"#b22222\" stroke-width=\"1.6\" stroke-dasharray=\"6 4\"",
                          "Kijowski (transmitted)"});
    }
    if (p.kijowski_free) {
        curves.push_back({&p.kijowski_free->density, 1.0,
                          "stroke=\"#555555\" stroke-width=\"1.2\" stroke-dasharray=\"2 3\"",
                          "Kijowski (free)"});
    }
    if (p.flux && p.flux_integral && std::abs(*p.flux_integral) > 0.0) {
        curves.push_back({&*p.flux, 1.0 / *p.flux_integral,
                          "stroke=\"#2e8b57\" stroke-width=\"0.9\"", "flux J / ∫J"});
    }

    double ymax = 0.0;
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] >= t0 && t[i] <= t1) {
                ymax = std::max(ymax, (*c.y)[i] * c.scale);
            }
        }
    }
    if (!(ymax > 0.0)) {
        ymax = 1.0;
    }
    const double ystep = tick_step(ymax * 1.08);
    const double ytop = std::ceil(ymax * 1.08 / ystep) * ystep;

    const double w = kPanelW - kLeft - kRight;
    const double h = kPanelH - kTop - kBottom;
    auto sx = [&](double tv) { return kLeft + (tv - t0) / (t1 - t0) * w; };
    auto sy = [&](double yv) { return kTop + h - std::clamp(yv / ytop, -0.05, 1.0) * h; };

    svg << "<g transform=\"translate(" << fixed(ox, 1) << ',' << fixed(oy, 1) << ")\">\n";
    svg << "<text x=\"" << fixed(kLeft + w / 2, 1) << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-size=\"14\">V₀ = " << shortest(p.v0) << "</text>\n";
    svg << "<rect x=\"" << fixed(kLeft, 1) << "\" y=\"" << fixed(kTop, 1) << "\" width=\""
        << fixed(w, 1) << "\" height=\"" << fixed(h, 1)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    const double xstep = tick_step(t1 - t0);
    for (double tv = std::ceil(t0 / xstep) * xstep; tv <= t1 + 1e-9 * xstep; tv += xstep) {
        const double px = sx(tv);
        svg << "<line x1=\"" << fixed(px, 2) << "\" y1=\"" << fixed(kTop + h, 2) << "\" x2=\""
            << fixed(px, 2) << "\" y2=\"" << fixed(kTop + h + 4, 2) << "\" stroke=\"#000000\"/>\n";
        svg << "<text x=\"" << fixed(px, 2) << "\" y=\"" << fixed(kTop + h + 16, 2)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << shortest(tv) << "</text>\n";
    }
    for (double yv = 0.0; yv <= ytop + 1e-9 * ystep; yv += ystep) {
        const double py = sy(yv);
        svg << "<line x1=\"" << fixed(kLeft - 4, 2) << "\" y1=\"" << fixed(py, 2) << "\" x2=\""
            << fixed(kLeft, 2) << "\" y2=\"" << fixed(py, 2) << "\" stroke=\"#000000\"/>\n";
        svg << "<text x=\"" << fixed(kLeft - 6, 2) << "\" y=\"" << fixed(py + 3, 2)
            << "\" text-anchor=\"end\" font-size=\"10\">" << shortest(std::round(yv / ystep) * ystep)
            << "</text>\n";
    }
    svg << "<text x=\"" << fixed(kLeft + w / 2, 1) << "\" y=\"" << fixed(kPanelH - 8, 1)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-style=\"italic\">t</text>\n";
    svg << "<text x=\"14\" y=\"" << fixed(kTop + h / 2, 1) << "\" text-anchor=\"middle\" "
        << "font-size=\"12\" transform=\"rotate(-90 14 " << fixed(kTop + h / 2, 1)
        << ")\">\U0001D4AB(t|x)</text>\n";

    for (const auto& c : curves) {
        svg << "<polyline fill=\"none\" " << c.style << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] < t0 || t[i] > t1) {
                continue;
            }
            svg << (first ? "" : " ") << fixed(sx(t[i]), 2) << ',' << fixed(sy((*c.y)[i] * c.scale), 2);
            first = false;
        }
        svg << "\"/>\n";
    }

    double ly = kTop + 14;
    for (const auto& c : curves) {
        const double lx = kLeft + w - 150;
        svg << "<line x1=\"" << fixed(lx, 1) << "\" y1=\"" << fixed(ly - 4, 1) << "\" x2=\""
            << fixed(lx + 24, 1) << "\" y2=\"" << fixed(ly - 4, 1) << "\" " << c.style << "/>\n";
        svg << "<text x=\"" << fixed(lx + 30, 1) << "\" y=\"" << fixed(ly, 1)
            << "\" font-size=\"10\">" << c.label << "</text>\n";
        ly += 14;
    }
    svg << "</g>\n";
}

} // namespace

void emit_svg(const ResultBundle& bundle, const std::filesystem::path& path) {
    if (bundle.t.empty() || bundle.panels.empty()) {
        throw ConfigError("tgrid", "empty result; nothing to plot to " + path.string());
    }
    const std::size_t n = bundle.panels.size();
    const std::size_t cols = n == 1 ? 1 : 2;
    const std::size_t rows = (n + cols - 1) / cols;
    const double width = kPanelW * static_cast<double>(cols);
    const double height = kPanelH * static_cast<double>(rows);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
        << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0)
        << "\" font-family=\"sans-serif\">\n";
    svg << "<title>Arrival-time distributions at x = " << shortest(bundle.config.detector_x)
        << "</title>\n";
    svg << "<desc>Units: hbar = " << shortest(bundle.config.packet.hbar)
        << ", m = " << shortest(bundle.config.packet.m)
        << "; dimensionless. Densities are normalized per unit time.</desc>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (std::size_t k = 0; k < n; ++k) {
        draw_panel(svg, bundle, bundle.panels[k], kPanelW * static_cast<double>(k % cols),
                   kPanelH * static_cast<double>(k / cols));
    }
    svg << "</svg>\n";
    write_file(path, svg.str());
}

namespace {

json describe(const TOADistribution& d) {
    return {{"arrival_probability", d.arrival_probability},
            {"integral", d.integral()},
            {"mean_arrival_time", d.mean_arrival_time()},
            {"peak_time", d.peak_time()},
            {"min_density", *std::min_element(d.density.begin(), d.density.end())},
            {"partial_penetration", d.partial_penetration}};
}

} // namespace

json summary_json(const ResultBundle& bundle) {
    const auto& cfg = bundle.config;
    json panels = json::array();
    for (const auto& p : bundle.panels) {
        json j = {{"v0", p.v0}};
        if (p.sts) {
            j["sts"] = describe(*p.sts);
        }
        if (p.kijowski_transmitted) {
            j["kijowski_transmitted"] = describe(*p.kijowski_transmitted);
        }
        if (p.kijowski_free) {
            j["kijowski_free"] = describe(*p.kijowski_free);
        }
        if (p.flux) {
            j["flux_oracle"] = {
                {"integral", *p.flux_integral},
                {"min", *std::min_element(p.flux->begin(), p.flux->end())}};
        }
        if (p.distance) {
            j["model_distance"] = *p.distance;
        }
        panels.push_back(std::move(j));
    }
    return {
        {"units",
         {{"system", "dimensionless"},
          {"hbar", cfg.packet.hbar},
          {"mass", cfg.packet.m},
          {"time", "t"},
          {"position", "x"},
          {"density", "1/t"},
          {"flux", "1/t"}}},
        {"mean_window", {cfg.t_min, cfg.t_max}},
        {"config", to_json(cfg)},
        {"panels", panels},
    };
}

} // namespace ststoa
