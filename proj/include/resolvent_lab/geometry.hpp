#pragma once

// Grid verification of the geometry of J_r for generators in class N:
// Re J_r' > 0, starlikeness of order 1/2, the Marx-Strohhacker bound,
// hyperbolic convexity of J_r(D) and the nesting J_r(D) c J_s(D), s < r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "holo_core.hpp"
#include "resolvent.hpp"

namespace reslab {

struct PropertyReport {
    std::string property;
    std::string grid;
    double worst_value = 0.0;
    cplx worst_point{};
    double tolerance = 0.0;
    bool pass = false;
    std::size_t samples = 0;
    std::vector<cplx> exclusions;          // grid points where the solver failed
    std::map<std::string, double> extras;  // secondary statistics, keyed by name
};

/// Closed curve approximating the boundary of J_r(D): the preimage of the
/// circle |w| = 1 - margin.
struct RegionBoundary {
    double r = 0.0;
    double margin = 0.0;
    std::vector<double> angles;
    std::vector<cplx> points;
};

namespace detail {

inline std::string describe(const DiskGrid& g) {
    std::ostringstream os;
    os << g.radii.size() << "x" << g.angles_per_ring << " margin " << g.margin();
    return os.str();
}

inline void require_class_n(const GeneratorSpec& gen, const char* what) {
    if (!gen.flags.in_N) throw contract_error(std::string(what) + ": generator is not in class N");
}

inline constexpr std::size_t certify_stride = 100;

/// Evaluates `value(w, z = J_r(w))` on every grid point in parallel and keeps
/// the minimum. Points where the solver fails are recorded as exclusions.
template <class Value>
PropertyReport scan_minimum(const GeneratorSpec& gen, double r, const DiskGrid& grid, std::string property,
                            Value value) {
    const std::vector<cplx> pts = grid.points();
    std::vector<double> vals(pts.size(), std::numeric_limits<double>::infinity());
    std::vector<char> failed(pts.size(), 0);
    std::vector<char> certified(pts.size(), 0);
    parallel_for(pts.size(), [&](std::size_t i) {
        try {
            // Every hundredth point also carries the winding certificate.
            const bool certify = i % certify_stride == 0;
            const ResolventSolve s = solve(gen, r, pts[i], certify);
            if (certify) {
                certified[i] = 1;
                if (s.winding != 1) throw convergence_error("winding certificate is not 1", {});
            }
            vals[i] = value(pts[i], s.z);
        } catch (const error&) {
            failed[i] = 1;
        }
    });
    PropertyReport rep;
    rep.property = std::move(property);
    rep.grid = describe(grid);
    rep.samples = pts.size();
    rep.worst_value = std::numeric_limits<double>::infinity();
    rep.extras["certified"] = static_cast<double>(std::count(certified.begin(), certified.end(), 1));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (failed[i]) {
            rep.exclusions.push_back(pts[i]);
        } else if (vals[i] < rep.worst_value) {
            rep.worst_value = vals[i];
            rep.worst_point = pts[i];
        }
    }
    return rep;
}

}  // namespace detail

/// min Re J_r'(w) over the grid; passes when positive.
inline PropertyReport check_NW(const GeneratorSpec& gen, double r, const DiskGrid& grid = DiskGrid::standard()) {
    detail::require_class_n(gen, "check_NW");
    if (!(r >= 0.0)) throw contract_error("check_NW: r must be non-negative");
    auto rep = detail::scan_minimum(gen, r, grid, "noshiro_warschawski",
                                    [&](cplx, cplx z) { return derivative_at(gen, r, z).real(); });
    rep.tolerance = 0.0;
    rep.pass = rep.exclusions.empty() && rep.worst_value > 0.0;
    return rep;
}

/// min Re[w J_r'(w)/J_r(w)] over the grid; passes above 1/2 - 1e-6. The
/// extra "remark_discrepancy" is the largest deviation from the equivalent
/// expression 1/(1 - w phi'(J_r(w))), phi(z) = 1/(1 + r f(z)/z).
inline PropertyReport check_starlike_half(const GeneratorSpec& gen, double r,
                                          const DiskGrid& grid = DiskGrid::standard()) {
    detail::require_class_n(gen, "check_starlike_half");
    if (!(r > 0.0)) throw contract_error("check_starlike_half: r must be positive");
    double worst_gap = 0.0;
    std::mutex gap_mutex;
    auto rep = detail::scan_minimum(gen, r, grid, "starlike_order_half", [&](cplx w, cplx z) {
        const cplx starlike = w * derivative_at(gen, r, z) / z;
        const cplx q = gen(z) / z;
        const cplx dq = (z * gen.deriv(z) - gen(z)) / (z * z);
        const cplx dphi = -r * dq / ((1.0 + r * q) * (1.0 + r * q));
        const cplx remark = 1.0 / (1.0 - w * dphi);
        const double gap = std::abs(remark - starlike) / std::max(1.0, std::abs(starlike));
        {
            std::lock_guard lock(gap_mutex);
            worst_gap = std::max(worst_gap, gap);
        }
        return starlike.real();
    });
    rep.tolerance = 1e-6;
    rep.pass = rep.exclusions.empty() && rep.worst_value > 0.5 - rep.tolerance;
    rep.extras["remark_discrepancy"] = worst_gap;
    return rep;
}

/// min Re[J_r(w)/w] - 1/(2(1 + beta r)) with beta = f'(0) > 0.
inline PropertyReport check_marx_strohhacker(const GeneratorSpec& gen, double r,
                                             const DiskGrid& grid = DiskGrid::standard()) {
    detail::require_class_n(gen, "check_marx_strohhacker");
    const cplx beta = gen.f0deriv;
    if (std::abs(beta.imag()) > 1e-12 || !(beta.real() > 0.0))
        throw contract_error("check_marx_strohhacker: f'(0) must be real and positive");
    if (!(r >= 0.0)) throw contract_error("check_marx_strohhacker: r must be non-negative");
    const double bound = 1.0 / (2.0 * (1.0 + beta.real() * r));
    auto rep = detail::scan_minimum(gen, r, grid, "marx_strohhacker",
                                    [&](cplx w, cplx z) { return (z / w).real() - bound; });
    rep.tolerance = 1e-6;
    rep.pass = rep.exclusions.empty() && rep.worst_value > -rep.tolerance;
    rep.extras["bound"] = bound;
    return rep;
}

/// Preimage of |w| = 1 - margin under J_r, traced by continuation in angle.
inline RegionBoundary region_boundary(const GeneratorSpec& gen, double r, int n_points, double margin) {
    if (!(r >= 0.0)) throw contract_error("region_boundary: r must be non-negative");
    if (n_points < 64) throw contract_error("region_boundary: need at least 64 points");
    if (!(margin >= 1e-6 && margin <= 1e-2)) throw contract_error("region_boundary: margin must lie in [1e-6, 1e-2]");
    RegionBoundary out;
    out.r = r;
    out.margin = margin;
    cplx z = solve(gen, r, cplx{1.0 - margin, 0.0}).z;
    for (int j = 0; j < n_points; ++j) {
        const double theta = 2.0 * pi * j / n_points;
        const cplx w = std::polar(1.0 - margin, theta);
        std::vector<double> trace;
        int iterations = 0;
        auto step = detail::newton_resolvent(gen.map, r, w, z, detail::in_disk_margin, trace, iterations);
        if (!step.converged) {
            try {
                step.z = solve(gen, r, w).z;
            } catch (const convergence_error& e) {
                std::ostringstream os;
                os << "region_boundary: continuation broke at angle " << theta;
                throw convergence_error(os.str(), e.trace);
            }
        }
        z = step.z;
        out.angles.push_back(theta);
        out.points.push_back(z);
    }
    return out;
}

/// |z + s f(z)| - |z + r f(z)| maximised over the grid; J_r(D) c J_s(D)
/// holds when it never exceeds 1e-12.
inline PropertyReport check_inclusion_chain(const GeneratorSpec& gen, double s, double r,
                                            const DiskGrid& grid = DiskGrid::standard()) {
    if (!(s >= 0.0 && s <= r)) throw contract_error("check_inclusion_chain: need 0 <= s <= r");
    PropertyReport rep;
    rep.property = "inclusion_chain";
    rep.grid = detail::describe(grid);
    rep.tolerance = 1e-12;
    rep.worst_value = -std::numeric_limits<double>::infinity();
    std::vector<cplx> pts = grid.points();
    pts.insert(pts.begin(), cplx{});
    for (cplx z : pts) {
        const cplx fz = gen(z);
        const double diff = std::abs(z + s * fz) - std::abs(z + r * fz);
        if (diff > rep.worst_value) {
            rep.worst_value = diff;
            rep.worst_point = z;
        }
    }
    rep.samples = pts.size();
    rep.pass = rep.worst_value <= rep.tolerance;
    return rep;
}

/// Signed membership margin: positive inside the region.
using RegionMargin = std::function<double(cplx)>;

/// J_r(D) shrunk to the preimage of |w| < 1 - margin: (1 - margin) - |z + r f(z)|.
inline RegionMargin resolvent_image_margin(const GeneratorSpec& gen, double r, double margin = 1e-3) {
    return [gen, r, margin](cplx z) { return (1.0 - margin) - std::abs(z + r * gen(z)); };
}

/// Randomized hyperbolic convexity test. Draws `pairs` point pairs inside the
/// region, samples 32 points on each connecting geodesic and counts samples
/// whose margin falls below -1e-9.
inline PropertyReport check_hyperbolic_convexity(const RegionMargin& inside, int pairs, std::uint64_t seed = 20240601) {
    if (pairs < 1) throw contract_error("check_hyperbolic_convexity: need at least one pair");
    constexpr int per_geodesic = 32;
    constexpr double delta = 1e-9;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&]() -> cplx {
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const cplx z = std::polar(std::sqrt(unit(rng)) * (1.0 - 1e-9), 2.0 * pi * unit(rng));
            if (inside(z) > 0.0) return z;
        }
        throw contract_error("check_hyperbolic_convexity: degenerate region, no interior samples found");
    };
    std::vector<std::pair<cplx, cplx>> ends(static_cast<std::size_t>(pairs));
    for (auto& e : ends) e = {draw(), draw()};

    std::vector<double> worst(ends.size(), std::numeric_limits<double>::infinity());
    std::vector<cplx> where(ends.size());
    std::vector<int> violations(ends.size(), 0);
    parallel_for(ends.size(), [&](std::size_t i) {
        for (cplx z : hyperbolic_geodesic(ends[i].first, ends[i].second, per_geodesic)) {
            const double m = inside(z);
            if (m < worst[i]) {
                worst[i] = m;
                where[i] = z;
            }
            if (m < -delta) ++violations[i];
        }
    });
    PropertyReport rep;
    rep.property = "hyperbolic_convexity";
    rep.grid = std::to_string(pairs) + " random pairs x " + std::to_string(per_geodesic) + " geodesic samples";
    rep.tolerance = delta;
    rep.samples = ends.size() * per_geodesic;
    rep.worst_value = std::numeric_limits<double>::infinity();
    int total = 0;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        total += violations[i];
        if (worst[i] < rep.worst_value) {
            rep.worst_value = worst[i];
            rep.worst_point = where[i];
        }
    }
    rep.extras["violations"] = total;
    rep.pass = total == 0;
    return rep;
}

inline PropertyReport check_hyperbolic_convexity(const GeneratorSpec& gen, double r, int pairs,
                                                 double margin = 1e-3) {
    return check_hyperbolic_convexity(resolvent_image_margin(gen, r, margin), pairs);
}

}  // namespace reslab
