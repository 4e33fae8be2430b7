#include "tcsde/repro/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tcsde/errors.hpp"

namespace tcsde::repro {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("bad CSV cell '" + s + "'");
    return v;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    if (std::abs(v) < 1e-12) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return columns[i];
    }
    throw UsageError("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (table.provenance.empty()) table.provenance = line.substr(1);
            continue;
        }
        const auto cells = split(line, ',');
        if (!have_header) {
            table.header = cells;
            table.columns.assign(cells.size(), {});
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) throw UsageError("ragged CSV row: " + line);
        for (std::size_t i = 0; i < cells.size(); ++i) table.columns[i].push_back(parse_cell(cells[i]));
    }
    if (!have_header) throw UsageError("CSV without header");
    return table;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / std::max(target, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
        ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return ticks;
}

std::string render_svg(const LinePlot& plot) {
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double w = plot.width - left - right;
    const double h = plot.height - top - bottom;

    // every stride-th point, plus the last one
    const std::size_t n = std::min(plot.x.size(), plot.y.size());
    const std::size_t stride = std::max<std::size_t>(1, (n + plot.max_points - 1) / std::max<std::size_t>(plot.max_points, 1));
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; i += stride) keep.push_back(i);
    if (n > 0 && keep.back() != n - 1) keep.push_back(n - 1);

    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto i : keep) {
        if (!std::isfinite(plot.x[i]) || !std::isfinite(plot.y[i])) continue;
        xlo = std::min(xlo, plot.x[i]);
        xhi = std::max(xhi, plot.x[i]);
    }
    const double y_from = xlo + plot.y_range_skip * (xhi - xlo);
    for (const auto i : keep) {
        if (!std::isfinite(plot.x[i]) || !std::isfinite(plot.y[i]) || plot.x[i] < y_from) continue;
        ylo = std::min(ylo, plot.y[i]);
        yhi = std::max(yhi, plot.y[i]);
    }
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1;
    if (!std::isfinite(ylo)) ylo = -1, yhi = 1;
    if (xhi <= xlo) xhi = xlo + 1.0;
    if (yhi <= ylo) {
        ylo -= 0.5;
        yhi += 0.5;
    }
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;

    auto px = [&](double x) { return left + (x - xlo) / (xhi - xlo) * w; };
    auto py = [&](double y) { return top + (yhi - std::clamp(y, ylo, yhi)) / (yhi - ylo) * h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!plot.comment.empty()) out << "<!--" << escape(plot.comment) << " -->\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
        << "\" viewBox=\"0 0 " << plot.width << " " << plot.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(left + w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << escape(plot.title) << "</text>\n";

    out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    const auto xt = nice_ticks(xlo, xhi);
    const auto yt = nice_ticks(ylo, yhi);
    for (const double t : xt) {
        out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(t)) << "\" y2=\""
            << num(top + h) << "\"/>\n";
    }
    for (const double t : yt) {
        out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + w) << "\" y2=\""
            << num(py(t)) << "\"/>\n";
    }
    out << "</g>\n";
    if (ylo < 0.0 && yhi > 0.0) {
        out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(left + w) << "\" y2=\""
            << num(py(0)) << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    }
    out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const double t : xt) {
        out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + h + 16) << "\" text-anchor=\"middle\">"
            << tick_label(t) << "</text>\n";
    }
    for (const double t : yt) {
        out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
            << tick_label(t) << "</text>\n";
    }
    out << "</g>\n";
    out << "<text x=\"" << num(left + w / 2) << "\" y=\"" << num(plot.height - 12.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(plot.x_label)
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(top + h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 16 " << num(top + h / 2) << ")\">" << escape(plot.y_label)
        << "</text>\n";

    std::string points;
    auto flush = [&] {
        if (!points.empty()) {
            out << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.2\" points=\"" << points << "\"/>\n";
            points.clear();
        }
    };
    for (const auto i : keep) {
        if (!std::isfinite(plot.x[i]) || !std::isfinite(plot.y[i])) {
            flush();
            continue;
        }
        if (!points.empty()) points += ' ';
        points += num(px(plot.x[i])) + "," + num(py(plot.y[i]));
    }
    flush();
    out << "</svg>\n";
    return out.str();
}

std::string ratio_figure(const std::string& ratio_csv_text, bool operational) {
    const auto table = parse_csv(ratio_csv_text);
    LinePlot plot;
    plot.title = operational ? "log|X(t)| / E_t" : "log|X(t)| / t";
    plot.x_label = "t";
    plot.y_label = operational ? "log|X(t)| / E_t" : "log|X(t)| / t";
    plot.x = table.column("t");
    plot.y = table.column(operational ? "op_ratio" : "real_ratio");
    plot.comment = table.provenance;
    plot.y_range_skip = 0.02;
    return render_svg(plot);
}

}  // namespace tcsde::repro
