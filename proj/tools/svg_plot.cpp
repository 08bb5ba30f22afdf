#include "svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "dse/errors.hpp"

namespace dse::plot {

namespace {

constexpr std::array kChannels{Channel::delta, Channel::domega, Channel::eq_prime, Channel::ed_prime,
                               Channel::y,     Channel::g,      Channel::d};

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 30.0;

constexpr std::array<const char*, 4> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Series {
    std::string label;
    std::string color;
    std::vector<double> values;
    bool dashed = false;
};

std::string label_of(Channel c) {
    switch (c) {
    case Channel::delta:
        return "rotor angle (rad)";
    case Channel::domega:
        return "speed deviation (pu)";
    case Channel::eq_prime:
        return "e_q' (pu)";
    case Channel::ed_prime:
        return "e_d' (pu)";
    case Channel::y:
        return "electrical torque (pu)";
    case Channel::g:
        return "chi-square statistic g";
    case Channel::d:
        return "Euclidean statistic d";
    }
    return {};
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

void draw_panel(std::ostringstream& svg, double y0, const std::string& title, const std::vector<double>& t,
                const std::vector<Series>& series, std::optional<double> threshold) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Series& s : series) {
        for (double v : s.values) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (threshold) {
        lo = std::min(lo, *threshold);
        hi = std::max(hi, *threshold);
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const double t0 = t.empty() ? 0.0 : t.front();
    const double t1 = t.size() < 2 ? t0 + 1.0 : t.back();
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kPanelHeight - kTop - kBottom;
    const auto px = [&](double tv) { return kLeft + (tv - t0) / (t1 - t0) * plot_w; };
    const auto py = [&](double v) { return y0 + kTop + (hi - v) / (hi - lo) * plot_h; };

    svg << "<g class=\"panel\">\n";
    svg << "<text x=\"" << kLeft << "\" y=\"" << y0 + 18 << "\" font-size=\"13\">" << title << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << y0 + kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * i / 4.0;
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4 << "\" font-size=\"10\" text-anchor=\"end\">"
            << fmt(v) << "</text>\n";
        const double tv = t0 + (t1 - t0) * i / 4.0;
        svg << "<text x=\"" << px(tv) << "\" y=\"" << y0 + kTop + plot_h + 14
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(tv) << "</text>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\""
            << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
        for (std::size_t k = 0; k < t.size() && k < s.values.size(); ++k) {
            if (std::isfinite(s.values[k])) {
                svg << fmt(px(t[k])) << ',' << fmt(py(std::clamp(s.values[k], lo, hi))) << ' ';
            }
        }
        svg << "\"/>\n";
        const double ly = y0 + kTop + 12 + 14 * static_cast<double>(si);
        svg << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\"/>"
            << "<text x=\"" << kWidth - kRight + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"10\">" << s.label
            << "</text>\n";
    }
    if (threshold) {
        svg << "<line class=\"threshold\" x1=\"" << kLeft << "\" y1=\"" << py(*threshold) << "\" x2=\""
            << kLeft + plot_w << "\" y2=\"" << py(*threshold)
            << "\" stroke=\"#000\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 10 << "\" y=\"" << py(*threshold) + 4
            << "\" font-size=\"10\">threshold " << fmt(*threshold) << "</text>\n";
    }
    svg << "</g>\n";
}

} // namespace

std::string channel_name(Channel channel) {
    switch (channel) {
    case Channel::delta:
        return "delta";
    case Channel::domega:
        return "domega";
    case Channel::eq_prime:
        return "eq_prime";
    case Channel::ed_prime:
        return "ed_prime";
    case Channel::y:
        return "y";
    case Channel::g:
        return "g";
    case Channel::d:
        return "d";
    }
    return {};
}

std::string channel_list() {
    std::string out;
    for (Channel c : kChannels) {
        out += (out.empty() ? "" : ", ") + channel_name(c);
    }
    return out;
}

std::vector<Channel> parse_channels(const std::vector<std::string>& names) {
    if (names.empty()) {
        return {Channel::delta, Channel::domega, Channel::eq_prime, Channel::ed_prime};
    }
    std::vector<Channel> out;
    for (const std::string& name : names) {
        const auto it = std::find_if(kChannels.begin(), kChannels.end(),
                                     [&](Channel c) { return channel_name(c) == name; });
        if (it == kChannels.end()) {
            throw ConfigError("unknown channel '" + name + "'; valid channels: " + channel_list());
        }
        out.push_back(*it);
    }
    return out;
}

std::string render_svg(const ScenarioTrace& trace, const std::vector<Channel>& channels,
                       const DetectorConfig& detector) {
    std::vector<double> t;
    t.reserve(trace.rows.size());
    for (const TraceRow& row : trace.rows) {
        t.push_back(row.t);
    }
    const auto column = [&](auto&& get) {
        std::vector<double> v;
        v.reserve(trace.rows.size());
        for (const TraceRow& row : trace.rows) {
            v.push_back(get(row));
        }
        return v;
    };

    std::ostringstream svg;
    const double height = kPanelHeight * static_cast<double>(channels.size());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
        << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t p = 0; p < channels.size(); ++p) {
        const Channel ch = channels[p];
        std::vector<Series> series;
        std::optional<double> threshold;
        switch (ch) {
        case Channel::delta:
        case Channel::domega:
        case Channel::eq_prime:
        case Channel::ed_prime: {
            const int i = static_cast<int>(ch);
            series.push_back({"true", "#000000", column([&](const TraceRow& r) { return r.x_true(i); }), false});
            for (std::size_t f = 0; f < trace.filters.size(); ++f) {
                series.push_back({std::string(filter_name(trace.filters[f])), kPalette[f % kPalette.size()],
                                  column([&](const TraceRow& r) { return r.filters[f].estimate(i); }), true});
            }
            break;
        }
        case Channel::y:
            series.push_back({"clean", "#000000", column([](const TraceRow& r) { return r.y_clean; }), false});
            series.push_back({"attacked", kPalette[1], column([](const TraceRow& r) { return r.y_attacked; }), true});
            break;
        case Channel::g:
        case Channel::d:
            for (std::size_t f = 0; f < trace.filters.size(); ++f) {
                series.push_back({std::string(filter_name(trace.filters[f])), kPalette[f % kPalette.size()],
                                  column([&](const TraceRow& r) {
                                      return ch == Channel::g ? r.filters[f].g : r.filters[f].d;
                                  }),
                                  false});
            }
            threshold = ch == Channel::g ? detector.chi2_threshold : detector.euclid_threshold;
            break;
        }
        draw_panel(svg, kPanelHeight * static_cast<double>(p), label_of(ch), t, series, threshold);
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace dse::plot
