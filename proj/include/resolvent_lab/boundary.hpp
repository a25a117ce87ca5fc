#pragma once

// Boundary behaviour of resolvents: boundary regular null points of the
// generator, boundary regular fixed points of J_r, and the extension of J_r to
// negative r on the convex backward flow invariant domain of z(1-z).

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "angular.hpp"
#include "generators.hpp"
#include "geometry.hpp"
#include "resolvent.hpp"

namespace reslab {

struct BoundaryPointAnalysis {
    cplx zeta{};
    std::optional<cplx> f_angular_value;
    std::optional<cplx> f_angular_deriv;
    bool is_brnp = false;
    std::optional<double> r_threshold;  // 1/|f'(zeta)| when f'(zeta) < 0
};

inline BoundaryPointAnalysis analyze_boundary_point(const GeneratorSpec& gen, cplx zeta,
                                                    int depth = default_angular_depth) {
    BoundaryPointAnalysis a;
    a.zeta = zeta;
    a.f_angular_value = angular_limit(gen.map.function(), zeta, depth).value;
    if (a.f_angular_value)
        a.f_angular_deriv = angular_derivative(gen.map.function(), zeta, *a.f_angular_value, depth).value;
    a.is_brnp = a.f_angular_value && std::abs(*a.f_angular_value) < 1e-6 && a.f_angular_deriv;
    if (a.is_brnp) {
        const cplx d = *a.f_angular_deriv;
        if (d.real() < 0.0 && std::abs(d.imag()) <= 1e-6 * std::abs(d)) a.r_threshold = 1.0 / std::abs(d);
    }
    return a;
}

struct BrfpClassification {
    BoundaryPointAnalysis generator;
    bool predicted = false;
    std::optional<cplx> predicted_deriv;  // 1/(1 + r f'(zeta))
    bool observed = false;
    std::optional<cplx> observed_limit;   // angular limit of J_r at zeta
    std::optional<cplx> observed_deriv;
    bool inconclusive = false;            // r |f'(zeta)| within 1e-3 of 1
    bool agree = false;
};

/// Predicts from the generator whether zeta is a boundary regular fixed point
/// of J_r (it is exactly when zeta is a regular null point and r |f'(zeta)| < 1)
/// and compares with the radial behaviour of J_r itself.
inline BrfpClassification classify_brfp(const GeneratorSpec& gen, double r, cplx zeta,
                                        int depth = default_angular_depth) {
    if (!gen.flags.in_N) throw contract_error("classify_brfp: generator is not in class N");
    if (!(r >= 0.0)) throw contract_error("classify_brfp: r must be non-negative");
    BrfpClassification c;
    c.generator = analyze_boundary_point(gen, zeta, depth);
    if (c.generator.is_brnp) {
        const cplx fd = *c.generator.f_angular_deriv;
        const double product = r * std::abs(fd);
        c.inconclusive = std::abs(product - 1.0) < 1e-3;
        c.predicted = product < 1.0 && !c.inconclusive;
        if (c.predicted) c.predicted_deriv = 1.0 / (1.0 + r * fd);
    }

    const ComplexFn jr = [&gen, r](cplx w) { return solve(gen, r, w).z; };
    c.observed_limit = angular_limit(jr, zeta, depth).value;
    if (c.observed_limit && std::abs(*c.observed_limit - zeta) < 1e-6) {
        c.observed_deriv = angular_derivative(jr, zeta, zeta, depth).value;
        c.observed = c.observed_deriv.has_value();
    }
    c.agree = c.predicted == c.observed;
    if (c.agree && c.predicted)
        c.agree = std::abs(*c.observed_deriv - *c.predicted_deriv) <= 1e-3 * std::abs(*c.predicted_deriv);
    return c;
}

// ---------------------------------------------------------------------------
// Negative r on the backward flow invariant domain of f(z) = z(1-z).

/// The maximal BFID of z(1-z) at zeta = 1: the disk |z - 1/2| < 1/2.
struct Bfid {
    cplx center{0.5, 0.0};
    double radius = 0.5;

    /// Positive inside, zero on the boundary circle.
    double margin(cplx z) const { return radius - std::abs(z - center); }
    bool contains_closure(cplx z, double tol = 1e-12) const { return margin(z) >= -tol; }
    cplx boundary_point(double theta) const { return center + std::polar(radius, theta); }
};

/// True when the generator coincides with z(1-z), the only generator with a
/// built-in convex BFID.
inline bool has_builtin_bfid(const GeneratorSpec& gen) {
    for (cplx z : {cplx{0.3, 0.1}, cplx{-0.5, 0.4}, cplx{0.1, -0.7}})
        if (std::abs(gen(z) - z * (1.0 - z)) > 1e-12) return false;
    return true;
}

/// Solution in the closed BFID of z + r f(z) = w for r < 0, reached by
/// continuation in r from J_0 = identity.
inline ResolventSolve bfid_resolvent(const GeneratorSpec& gen, double r, cplx w) {
    if (!has_builtin_bfid(gen)) throw contract_error("bfid_resolvent: no built-in BFID for this generator");
    const Bfid omega;
    if (!omega.contains_closure(w)) throw domain_error("bfid_resolvent: w lies outside the BFID");
    if (!(r <= 0.0)) throw contract_error("bfid_resolvent: r must be negative");
    const detail::Admissible inside = [omega](cplx z) { return omega.contains_closure(z); };
    try {
        return detail::continuation_solve(gen.map, r, w, inside);
    } catch (const convergence_error&) {
        std::ostringstream os;
        os << "bfid_resolvent: extension undefined, continuation left the BFID at r = " << r << ", w = " << w;
        throw domain_error(os.str());
    }
}

/// J_r'(w) = 1/(1 + r f'(J_r(w))) on the BFID.
inline cplx bfid_derivative(const GeneratorSpec& gen, double r, cplx w) {
    return derivative_at(gen, r, bfid_resolvent(gen, r, w).z);
}

struct BfidRegion {
    PropertyReport report;
    std::vector<cplx> omega_boundary;
    std::vector<cplx> image_boundary;
};

/// Checks J_r(Omega) c Omega on ~1000 interior samples and traces both
/// boundary curves (`n_boundary` points each).
inline BfidRegion bfid_region_check(const GeneratorSpec& gen, double r, int n_boundary = 512) {
    if (!(r >= -1.0 && r < 0.0)) throw contract_error("bfid_region_check: r must lie in [-1, 0)");
    const Bfid omega;
    constexpr int rings = 20, per_ring = 50;
    std::vector<cplx> samples;
    for (int i = 1; i <= rings; ++i)
        for (int j = 0; j < per_ring; ++j)
            samples.push_back(omega.center +
                              std::polar(omega.radius * (1.0 - 1e-3) * i / rings, 2.0 * pi * j / per_ring));

    BfidRegion out;
    auto& rep = out.report;
    rep.property = "bfid_invariance";
    rep.grid = std::to_string(samples.size()) + " samples of the BFID";
    rep.samples = samples.size();
    rep.worst_value = std::numeric_limits<double>::infinity();
    std::vector<cplx> images(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { images[i] = bfid_resolvent(gen, r, samples[i]).z; });
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double m = omega.margin(images[i]);
        if (m < rep.worst_value) {
            rep.worst_value = m;
            rep.worst_point = samples[i];
        }
    }
    rep.pass = rep.worst_value > 0.0;

    for (int j = 0; j < n_boundary; ++j) {
        const cplx w = omega.boundary_point(2.0 * pi * j / n_boundary);
        out.omega_boundary.push_back(w);
        out.image_boundary.push_back(bfid_resolvent(gen, r, w).z);
    }
    return out;
}

}  // namespace reslab
