#include "khorbits/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace khorbits {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Box {
    double x_min, x_max, y_min, y_max;
};

struct Mapper {
    Box box;
    double scale;
    double ox, oy;  // SVG coordinates of (box.x_min, box.y_max)

    double sx(double x) const { return ox + (x - box.x_min) * scale; }
    double sy(double y) const { return oy + (box.y_max - y) * scale; }
};

Mapper make_mapper(Box box, const SvgOptions& opts) {
    const double pad_x = 0.05 * (box.x_max - box.x_min + 1e-300);
    const double pad_y = 0.05 * (box.y_max - box.y_min + 1e-300);
    box.x_min -= pad_x;
    box.x_max += pad_x;
    box.y_min -= pad_y;
    box.y_max += pad_y;
    const double avail_w = opts.width - 2.0 * opts.margin;
    const double avail_h = opts.height - 2.0 * opts.margin;
    const double scale = std::min(avail_w / (box.x_max - box.x_min), avail_h / (box.y_max - box.y_min));
    const double ox = opts.margin + 0.5 * (avail_w - (box.x_max - box.x_min) * scale);
    const double oy = opts.margin + 0.5 * (avail_h - (box.y_max - box.y_min) * scale);
    return {box, scale, ox, oy};
}

void open_svg(std::ostream& out, const SvgOptions& opts) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
        << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

void write_orbit_svg(std::ostream& out, const Trajectory& traj, Projection proj, const SvgOptions& opts) {
    if (traj.states.empty()) throw std::invalid_argument("write_orbit_svg: empty trajectory");

    const auto coord = [proj](const PhaseState& s) {
        return proj == Projection::xy ? std::pair{s.x, s.y} : std::pair{s.x, s.z};
    };

    Box box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : traj.states) {
        const auto [u, v] = coord(s);
        box.x_min = std::min(box.x_min, u);
        box.x_max = std::max(box.x_max, u);
        box.y_min = std::min(box.y_min, v);
        box.y_max = std::max(box.y_max, v);
    }
    if (proj == Projection::xy) {
        box.x_min = std::min(box.x_min, 0.0);
        box.x_max = std::max(box.x_max, 0.0);
        box.y_min = std::min(box.y_min, 0.0);
        box.y_max = std::max(box.y_max, 0.0);
    }
    const Mapper m = make_mapper(box, opts);

    open_svg(out, opts);
    const std::size_t stride = std::max<std::size_t>(1, traj.states.size() / opts.max_points);
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < traj.states.size(); i += stride) {
        const auto [u, v] = coord(traj.states[i]);
        out << fmt(m.sx(u)) << ',' << fmt(m.sy(v)) << ' ';
    }
    const auto [u_last, v_last] = coord(traj.states.back());
    out << fmt(m.sx(u_last)) << ',' << fmt(m.sy(v_last)) << "\"/>\n";

    if (proj == Projection::xy)
        out << "<circle cx=\"" << fmt(m.sx(0.0)) << "\" cy=\"" << fmt(m.sy(0.0))
            << "\" r=\"3\" fill=\"black\"/>\n";

    const char* x_label = "x";
    const char* y_label = proj == Projection::xy ? "y" : "z";
    out << "<text x=\"" << opts.width / 2 << "\" y=\"" << opts.height - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << ": [" << fmt(box.x_min) << ", "
        << fmt(box.x_max) << "]</text>\n";
    out << "<text x=\"12\" y=\"" << opts.height / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 12 " << opts.height / 2 << ")\">" << y_label << ": [" << fmt(box.y_min)
        << ", " << fmt(box.y_max) << "]</text>\n";
    out << "</svg>\n";
}

void write_heatmap_svg(std::ostream& out, const PlaneSpec& spec, const std::vector<ScanRecord>& records,
                       const SvgOptions& opts) {
    if (records.size() != spec.size())
        throw std::invalid_argument("write_heatmap_svg: record count does not match the grid");

    // Log-scale color range from the abortive objectives actually present.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        if (r.status == ScanStatus::candidate || r.status == ScanStatus::closed) continue;
        if (!r.objective) continue;
        const double v = std::log10(std::max(*r.objective, 1e-12));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo < hi)) {
        lo = -3.0;
        hi = 3.0;
    }

    open_svg(out, opts);
    const double cw = (opts.width - 2.0 * opts.margin) / static_cast<double>(spec.n_p_theta);
    const double ch = (opts.height - 2.0 * opts.margin) / static_cast<double>(spec.n_j);
    for (std::size_t ip = 0; ip < spec.n_p_theta; ++ip) {
        for (std::size_t ij = 0; ij < spec.n_j; ++ij) {
            const ScanRecord& r = records[ip * spec.n_j + ij];
            std::string fill = "#909090";
            if (r.status == ScanStatus::candidate || r.status == ScanStatus::closed) {
                fill = "#ffd700";
            } else if (r.objective) {
                const double t =
                    std::clamp((std::log10(std::max(*r.objective, 1e-12)) - lo) / (hi - lo), 0.0, 1.0);
                char buf[8];
                std::snprintf(buf, sizeof(buf), "#%02x00%02x", static_cast<int>(255.0 * t + 0.5),
                              static_cast<int>(255.0 * (1.0 - t) + 0.5));
                fill = buf;
            }
            // J increases upward: row 0 (j_min) sits at the bottom edge.
            const double x = opts.margin + static_cast<double>(ip) * cw;
            const double y = opts.margin + static_cast<double>(spec.n_j - 1 - ij) * ch;
            out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cw + 0.5)
                << "\" height=\"" << fmt(ch + 0.5) << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    out << "<text x=\"" << opts.width / 2 << "\" y=\"" << opts.height - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">p_theta: [" << fmt(spec.p_theta_min) << ", "
        << fmt(spec.p_theta_max) << "]</text>\n";
    out << "<text x=\"12\" y=\"" << opts.height / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 12 " << opts.height / 2 << ")\">J: [" << fmt(spec.j_min) << ", "
        << fmt(spec.j_max) << "]</text>\n";
    out << "</svg>\n";
}

}  // namespace khorbits
