#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

namespace lab {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 150, kTop = 30, kBottom = 60;

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

// The correction column holds the term alone; the plotted line adds it to
// the asymptotic value.
std::optional<double> corrected(const ResultRow& r) {
    if (!r.correction_term || !r.asymptotic_no_correction) return std::nullopt;
    return *r.asymptotic_no_correction + *r.correction_term;
}

Frame make_frame(const std::vector<ResultRow>& rows) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto take = [&](double y) {
        if (std::isfinite(y)) { y0 = std::min(y0, y); y1 = std::max(y1, y); }
    };
    for (const auto& r : rows) {
        x0 = std::min(x0, r.grid_value);
        x1 = std::max(x1, r.grid_value);
        take(r.theory_total);
        if (r.empirical_mean) {
            const double se = r.empirical_stderr.value_or(0.0);
            take(*r.empirical_mean - 2 * se);
            take(*r.empirical_mean + 2 * se);
        }
        if (const auto y = corrected(r)) take(*y);
        if (r.asymptotic_no_correction) take(*r.asymptotic_no_correction);
    }
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!std::isfinite(y0)) { y0 = 0; y1 = 1; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    const double pad = 0.05 * (y1 - y0);
    return {x0, x1, y0 - pad, y1 + pad};
}

void polyline(std::ostringstream& out, const Frame& f, const std::vector<ResultRow>& rows,
              const std::string& colour, std::optional<double> (*pick)(const ResultRow&), const char* dash) {
    std::string pts;
    for (const auto& r : rows) {
        const auto y = pick(r);
        if (!y || !std::isfinite(*y)) continue;
        pts += fmt("%.2f", f.px(r.grid_value)) + "," + fmt("%.2f", f.py(*y)) + " ";
    }
    if (pts.empty()) return;
    pts.pop_back();
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"";
    if (dash) out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"" << pts << "\"/>\n";
}

}  // namespace

std::string render_svg(const std::vector<ResultRow>& rows) {
    const Frame f = make_frame(rows);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";

    const double bx0 = kLeft, bx1 = kWidth - kRight, by0 = kTop, by1 = kHeight - kBottom;
    out << "<rect x=\"" << bx0 << "\" y=\"" << by0 << "\" width=\"" << bx1 - bx0 << "\" height=\"" << by1 - by0
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
        const std::string px = fmt("%.2f", f.px(xv)), py = fmt("%.2f", f.py(yv));
        out << "<line x1=\"" << px << "\" y1=\"" << by1 << "\" x2=\"" << px << "\" y2=\"" << by1 + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << by1 + 20 << "\" text-anchor=\"middle\">" << fmt("%.4g", xv)
            << "</text>\n";
        out << "<line x1=\"" << bx0 - 5 << "\" y1=\"" << py << "\" x2=\"" << bx0 << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << bx0 - 8 << "\" y=\"" << py << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
            << fmt("%.4g", yv) << "</text>\n";
    }
    out << "<text x=\"" << (bx0 + bx1) / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">grid value</text>\n";
    out << "<text x=\"20\" y=\"" << (by0 + by1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (by0 + by1) / 2 << ")\">test risk</text>\n";
    out << "</g>\n";

    const bool spn = std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.correction_term.has_value(); });
    const bool empirical = std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.empirical_mean.has_value(); });

    polyline(out, f, rows, "#ff7f0e", [](const ResultRow& r) { return std::optional<double>(r.theory_total); }, nullptr);
    if (spn) {
        polyline(out, f, rows, "#2ca02c", corrected, "6 4");
        polyline(out, f, rows, "#d62728", [](const ResultRow& r) { return r.asymptotic_no_correction; }, "2 3");
    }
    for (const auto& r : rows) {
        if (!r.empirical_mean) continue;
        const double se = r.empirical_stderr.value_or(0.0);
        const std::string px = fmt("%.2f", f.px(r.grid_value));
        out << "<line x1=\"" << px << "\" y1=\"" << fmt("%.2f", f.py(*r.empirical_mean - 2 * se)) << "\" x2=\""
            << px << "\" y2=\"" << fmt("%.2f", f.py(*r.empirical_mean + 2 * se))
            << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
        out << "<circle cx=\"" << px << "\" cy=\"" << fmt("%.2f", f.py(*r.empirical_mean))
            << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }

    // Legend
    struct Entry { const char* label; const char* colour; bool show; };
    const Entry entries[] = {{"empirical", "#1f77b4", empirical},
                             {"theory", "#ff7f0e", true},
                             {"with correction", "#2ca02c", spn},
                             {"no correction", "#d62728", spn}};
    double ly = kTop + 10;
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (const auto& e : entries) {
        if (!e.show) continue;
        out << "<line x1=\"" << bx1 + 12 << "\" y1=\"" << ly << "\" x2=\"" << bx1 + 36 << "\" y2=\"" << ly
            << "\" stroke=\"" << e.colour << "\" stroke-width=\"3\"/>\n";
        out << "<text x=\"" << bx1 + 42 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">" << e.label
            << "</text>\n";
        ly += 20;
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace lab
