#include "nvcav/app/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "nvcav/app/config.hpp"

namespace nvcav::app {

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "amplification") return PlotKind::amplification;
    if (name == "populations") return PlotKind::populations;
    if (name == "red") return PlotKind::red_dependence;
    throw SchemaMismatch("unknown plot kind '" + name + "'");
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;
};

struct Panel {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    std::optional<double> reference;  // horizontal dotted line
};

constexpr double kWidth = 800;
constexpr double kPanelHeight = 340;
constexpr double kLeft = 90, kRight = 180, kTop = 40, kBottom = 60;

std::vector<double> nice_ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

std::string tick_label(double v) { return fmt::format("{:g}", v); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

void render_panel(std::ostringstream& svg, const Panel& panel, double y0) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : panel.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (panel.reference) {
        ymin = std::min(ymin, *panel.reference);
        ymax = std::max(ymax, *panel.reference);
    }
    if (!std::isfinite(xmin)) throw SchemaMismatch("no finite data to plot");
    if (xmax - xmin <= 0) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin <= 0) { ymin -= 0.5; ymax += 0.5; }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double w = kWidth - kLeft - kRight;
    const double h = kPanelHeight - kTop - kBottom;
    const double top = y0 + kTop;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * w; };
    auto py = [&](double y) { return top + h - (y - ymin) / (ymax - ymin) * h; };

    svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + w / 2, top - 14, escape(panel.title));
    svg << fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                       kLeft, top, w, h);

    for (double t : nice_ticks(xmin, xmax)) {
        svg << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                           px(t), top + h, top + h + 5);
        svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                           px(t), top + h + 19, tick_label(t));
    }
    for (double t : nice_ticks(ymin, ymax)) {
        svg << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
                           kLeft - 5, py(t), kLeft);
        svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
                           kLeft - 8, py(t) + 4, tick_label(t));
    }
    svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + w / 2, top + h + 42, escape(panel.x_label));
    svg << fmt::format("<text x=\"{0:.2f}\" y=\"{1:.2f}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 {0:.2f} {1:.2f})\">{2}</text>\n",
                       kLeft - 60, top + h / 2, escape(panel.y_label));

    if (panel.reference) {
        svg << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n",
                           kLeft, py(*panel.reference), kLeft + w, py(*panel.reference));
    }

    for (std::size_t k = 0; k < panel.series.size(); ++k) {
        const auto& s = panel.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            points += fmt::format("{}{:.2f},{:.2f}", points.empty() ? "" : " ", px(s.x[i]), py(s.y[i]));
        }
        svg << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{} points=\"{}\"/>\n",
                           color, s.dashed ? " stroke-dasharray=\"6,4\"" : "", points);
        const double ly = top + 14 + 18 * static_cast<double>(k);
        svg << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"1.8\"{}/>\n",
                           kLeft + w + 12, ly, kLeft + w + 36, ly, color,
                           s.dashed ? " stroke-dasharray=\"6,4\"" : "");
        svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\">{}</text>\n",
                           kLeft + w + 42, ly + 4, escape(s.label));
    }
}

std::string render_panels(const std::vector<Panel>& panels) {
    std::ostringstream svg;
    const double height = kPanelHeight * static_cast<double>(panels.size());
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\">\n",
                       kWidth, height, kWidth, height);
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
        render_panel(svg, panels[i], kPanelHeight * static_cast<double>(i));
    svg << "</svg>\n";
    return svg.str();
}

Series column_series(const CsvTable& t, const std::string& xcol, const std::string& ycol,
                     std::string label, bool dashed = false) {
    const auto xi = t.column(xcol), yi = t.column(ycol);
    Series s{std::move(label), {}, {}, dashed};
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        s.x.push_back(t.number(r, xi));
        s.y.push_back(t.number(r, yi));
    }
    return s;
}

std::vector<Panel> red_dependence_panels(const CsvTable& t) {
    const auto gi = t.column("green_power_mW"), ri = t.column("red_power_mW"),
               fi = t.column("f_amp");
    std::map<double, Series> by_red;
    std::map<double, Series> by_green;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double g = t.number(r, gi), red = t.number(r, ri), f = t.number(r, fi);
        auto& sr = by_red[red];
        sr.x.push_back(g);
        sr.y.push_back(f);
        auto& sg = by_green[g];
        sg.x.push_back(red);
        sg.y.push_back(f);
    }

    Panel a{"Amplification factor per red power", "green power (mW)", "f_amp", {}, 1.0};
    for (auto& [red, s] : by_red) {
        s.label = fmt::format("{:g} mW", red);
        a.series.push_back(std::move(s));
    }

    Panel b{"Line cuts at fixed green power", "red power (mW)", "f_amp", {}, 1.0};
    std::vector<double> chosen;
    for (double target : {25.0, 50.0, 75.0, 100.0}) {
        double best = NAN;
        for (const auto& [g, s] : by_green)
            if (std::isnan(best) || std::abs(g - target) < std::abs(best - target)) best = g;
        if (!std::isnan(best) && std::find(chosen.begin(), chosen.end(), best) == chosen.end())
            chosen.push_back(best);
    }
    for (double g : chosen) {
        auto s = by_green[g];
        s.label = fmt::format("{:g} mW green", g);
        b.series.push_back(std::move(s));
    }
    return {a, b};
}

}  // namespace

std::string render_plot(const CsvTable& table, PlotKind kind) {
    if (table.rows.empty()) throw SchemaMismatch("CSV has no data rows");
    std::vector<Panel> panels;
    switch (kind) {
        case PlotKind::amplification:
            panels.push_back({"Amplification factor", "green power (mW)", "f_amp",
                              {column_series(table, "green_power_mW", "f_amp", "f_amp")}, 1.0});
            panels.push_back({"Spontaneous-emission factor", "green power (mW)", "f_sp",
                              {column_series(table, "green_power_mW", "f_sp", "f_sp")}, 1.0});
            break;
        case PlotKind::populations:
            panels.push_back({"Excited-state fractions", "green power (mW)", "fraction",
                              {column_series(table, "green_power_mW", "p_minus_excited", "NV- excited"),
                               column_series(table, "green_power_mW", "p_zero_excited", "NV0 excited", true)},
                              std::nullopt});
            panels.push_back({"Charge-state fractions", "green power (mW)", "fraction",
                              {column_series(table, "green_power_mW", "nv_minus_total", "NV- total"),
                               column_series(table, "green_power_mW", "nv_zero_total", "NV0 total", true)},
                              std::nullopt});
            break;
        case PlotKind::red_dependence:
            panels = red_dependence_panels(table);
            break;
    }
    return render_panels(panels);
}

void emit_plot(const std::filesystem::path& csv_path, PlotKind kind,
               const std::filesystem::path& svg_path) {
    const auto svg = render_plot(read_csv_file(csv_path), kind);
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + svg_path.string());
    out << svg;
    if (!out) throw IoError("write failed for " + svg_path.string());
}

}  // namespace nvcav::app
