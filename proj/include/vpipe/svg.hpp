#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vpipe/errors.hpp"

namespace vpipe {
namespace svg {

// Minimal deterministic SVG plotting. Everything is emitted inline (shapes,
// styles, generic font families), so the files are self-contained.

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

inline std::string rgb(int r, int g, int b) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

/// Linear blend of two colors, t in [0, 1].
inline std::string blend(int r0, int g0, int b0, int r1, int g1, int b1, double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto mix = [t](int a, int b) { return static_cast<int>(std::lround(a + t * (b - a))); };
    return rgb(mix(r0, r1), mix(g0, g1), mix(b0, b1));
}

class Document {
public:
    Document(int width, int height) : width_(width), height_(height) {}

    void add(const std::string& element) { body_ += element; }

    std::string str() const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
            << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
            << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_
            << "\" fill=\"white\"/>\n"
            << body_ << "</svg>\n";
        return out.str();
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw ValidationError("cannot_open_file", "cannot open for writing: " + path);
        }
        out << str();
    }

private:
    int width_;
    int height_;
    std::string body_;
};

/// Maps a data rectangle onto a pixel rectangle (y axis flipped).
struct Frame {
    double px0 = 0.0, py0 = 0.0, pw = 0.0, ph = 0.0;  ///< pixel rect (top-left origin)
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;    ///< data range

    double x(double v) const { return px0 + (v - x0) / (x1 - x0) * pw; }
    double y(double v) const { return py0 + ph - (v - y0) / (y1 - y0) * ph; }
};

inline std::string line(double x1, double y1, double x2, double y2, const std::string& color,
                        double width, const std::string& dash = "") {
    std::string s = "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) +
                    "\" y2=\"" + px(y2) + "\" stroke=\"" + color + "\" stroke-width=\"" +
                    px(width) + "\"";
    if (!dash.empty()) {
        s += " stroke-dasharray=\"" + dash + "\"";
    }
    return s + "/>\n";
}

inline std::string rect(double x, double y, double w, double h, const std::string& fill) {
    return "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) + "\" height=\"" +
           px(h) + "\" fill=\"" + fill + "\"/>\n";
}

inline std::string circle(double x, double y, double r, const std::string& fill,
                          const std::string& stroke) {
    return "<circle cx=\"" + px(x) + "\" cy=\"" + px(y) + "\" r=\"" + px(r) + "\" fill=\"" +
           fill + "\" stroke=\"" + stroke + "\" stroke-width=\"1.5\"/>\n";
}

inline std::string text(double x, double y, const std::string& content, int size,
                        const std::string& anchor = "start", const std::string& color = "#222222") {
    return "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           std::to_string(size) + "\" text-anchor=\"" + anchor + "\" fill=\"" + color + "\">" +
           content + "</text>\n";
}

inline std::string polyline(const Frame& f, const std::vector<double>& xs,
                            const std::vector<double>& ys, const std::string& color,
                            double width, const std::string& dash = "") {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            pts += ' ';
        }
        pts += px(f.x(xs[i])) + "," + px(f.y(ys[i]));
    }
    std::string s = "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
                    "\" stroke-width=\"" + px(width) + "\"";
    if (!dash.empty()) {
        s += " stroke-dasharray=\"" + dash + "\"";
    }
    return s + "/>\n";
}

/// Frame border, evenly spaced ticks with labels, axis titles, figure title.
inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel,
                        const std::string& title, int xticks = 6, int yticks = 6) {
    std::string s;
    s += "<rect x=\"" + px(f.px0) + "\" y=\"" + px(f.py0) + "\" width=\"" + px(f.pw) +
         "\" height=\"" + px(f.ph) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (int i = 0; i < xticks; ++i) {
        const double v = f.x0 + (f.x1 - f.x0) * i / (xticks - 1);
        const double x = f.x(v);
        s += line(x, f.py0 + f.ph, x, f.py0 + f.ph + 4, "#333333", 1.0);
        s += text(x, f.py0 + f.ph + 16, tick_label(v), 10, "middle");
    }
    for (int i = 0; i < yticks; ++i) {
        const double v = f.y0 + (f.y1 - f.y0) * i / (yticks - 1);
        const double y = f.y(v);
        s += line(f.px0 - 4, y, f.px0, y, "#333333", 1.0);
        s += text(f.px0 - 7, y + 3, tick_label(v), 10, "end");
    }
    s += text(f.px0 + f.pw / 2, f.py0 + f.ph + 32, xlabel, 12, "middle");
    s += "<text x=\"" + px(f.px0 - 40) + "\" y=\"" + px(f.py0 + f.ph / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222222\""
         " transform=\"rotate(-90 " +
         px(f.px0 - 40) + ' ' + px(f.py0 + f.ph / 2) + ")\">" + ylabel + "</text>\n";
    if (!title.empty()) {
        s += text(f.px0 + f.pw / 2, f.py0 - 8, title, 13, "middle");
    }
    return s;
}

inline std::string legend_entry(double x, double y, const std::string& color,
                                const std::string& label, const std::string& dash = "") {
    return line(x, y, x + 22, y, color, 2.0, dash) + text(x + 28, y + 4, label, 11);
}

/// One cell-centered heatmap; `color_of` maps a value to a fill color.
template <typename ColorFn>
std::string heatmap(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values, ColorFn color_of) {
    // values are row-major over (xs, ys): index ix * ys.size() + iy
    std::string s;
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double xl = ix == 0 ? xs[0] : 0.5 * (xs[ix - 1] + xs[ix]);
        const double xr = ix + 1 == nx ? xs[nx - 1] : 0.5 * (xs[ix] + xs[ix + 1]);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double yl = iy == 0 ? ys[0] : 0.5 * (ys[iy - 1] + ys[iy]);
            const double yr = iy + 1 == ny ? ys[ny - 1] : 0.5 * (ys[iy] + ys[iy + 1]);
            const double v = values[ix * ny + iy];
            if (!std::isfinite(v)) {
                continue;
            }
            s += rect(f.x(xl), f.y(yr), f.x(xr) - f.x(xl), f.y(yl) - f.y(yr), color_of(v));
        }
    }
    return s;
}

struct Segment {
    double x1, y1, x2, y2;
};

/// Marching-squares iso-contour of a row-major grid at the given level.
inline std::vector<Segment> contour_segments(const std::vector<double>& xs,
                                             const std::vector<double>& ys,
                                             const std::vector<double>& values, double level) {
    std::vector<Segment> segments;
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    auto v = [&](std::size_t ix, std::size_t iy) { return values[ix * ny + iy]; };
    auto interp = [level](double a, double b, double pa, double pb) {
        return pa + (level - a) / (b - a) * (pb - pa);
    };
    for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
        for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
            const double v00 = v(ix, iy), v10 = v(ix + 1, iy);
            const double v01 = v(ix, iy + 1), v11 = v(ix + 1, iy + 1);
            if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) ||
                !std::isfinite(v11)) {
                continue;
            }
            std::vector<std::pair<double, double>> pts;
            if ((v00 < level) != (v10 < level)) {
                pts.emplace_back(interp(v00, v10, xs[ix], xs[ix + 1]), ys[iy]);
            }
            if ((v01 < level) != (v11 < level)) {
                pts.emplace_back(interp(v01, v11, xs[ix], xs[ix + 1]), ys[iy + 1]);
            }
            if ((v00 < level) != (v01 < level)) {
                pts.emplace_back(xs[ix], interp(v00, v01, ys[iy], ys[iy + 1]));
            }
            if ((v10 < level) != (v11 < level)) {
                pts.emplace_back(xs[ix + 1], interp(v10, v11, ys[iy], ys[iy + 1]));
            }
            if (pts.size() >= 2) {
                segments.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
            }
            if (pts.size() == 4) {
                segments.push_back({pts[2].first, pts[2].second, pts[3].first, pts[3].second});
            }
        }
    }
    return segments;
}

inline std::string draw_contour(const Frame& f, const std::vector<Segment>& segments,
                                const std::string& color, double width) {
    std::string s;
    for (const auto& seg : segments) {
        s += line(f.x(seg.x1), f.y(seg.y1), f.x(seg.x2), f.y(seg.y2), color, width);
    }
    return s;
}

}  // namespace svg
}  // namespace vpipe
