#pragma once

// Deterministic CSV and SVG emitters for curves in the unit disk.

#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "holo_core.hpp"

namespace reslab::io {

inline std::string fixed(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// theta,re,im rows for a curve parameterised by angle.
inline void write_curve_csv(std::ostream& os, const std::vector<double>& angles, const std::vector<cplx>& pts) {
    os << "theta,re,im\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << full(angles[i]) << ',' << full(pts[i].real()) << ',' << full(pts[i].imag()) << '\n';
}

/// t,re,im,abs rows for a trajectory.
inline void write_trajectory_csv(std::ostream& os, const std::vector<double>& times, const std::vector<cplx>& pts) {
    os << "t,re,im,abs\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << full(times[i]) << ',' << full(pts[i].real()) << ',' << full(pts[i].imag()) << ','
           << full(std::abs(pts[i])) << '\n';
}

struct SvgCurve {
    std::vector<cplx> points;
    std::string stroke = "black";
    std::string fill = "none";
    double width = 0.008;
    bool closed = true;
};

/// Square SVG 1.1 document showing the unit circle and the given curves in
/// math orientation (y up). No axes, no timestamps.
inline void write_svg(std::ostream& os, const std::vector<SvgCurve>& curves, int pixels = 480) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << pixels << "\" height=\"" << pixels
       << "\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n"
       << "<g transform=\"scale(1,-1)\">\n"
       << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.006\"/>\n";
    for (const SvgCurve& c : curves) {
        os << "<path fill=\"" << c.fill << "\" stroke=\"" << c.stroke << "\" stroke-width=\"" << fixed(c.width, 4)
           << "\" d=\"";
        for (std::size_t i = 0; i < c.points.size(); ++i)
            os << (i ? " L" : "M") << fixed(c.points[i].real()) << ',' << fixed(c.points[i].imag());
        if (c.closed) os << " Z";
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
}

}  // namespace reslab::io
