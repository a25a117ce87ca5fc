#pragma once

// Semigroup generators: construction, sampled class certificates, squeezing
// coefficients, starlike order and the sector bounds of f(z)/z.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "holo_core.hpp"

namespace reslab {

/// Exponential squeezing coefficient 2 log 2 - 1 = 0.386... shared by every
/// Noshiro-Warschawski generator normalized by f'(0) = 1. This is a
/// reference value; it is sharp for that class and is not recomputed here.
inline const double nw_squeezing_constant = 2.0 * std::log(2.0) - 1.0;

/// Sampled positivity tolerance for class membership.
inline constexpr double membership_tolerance = 1e-9;

struct ClassFlags {
    bool in_N = false;   // f(0) = 0, Re f(z)/z >= 0
    bool in_NW = false;  // f(0) = 0, Re f'(z) >= 0
    bool in_G = false;   // generates a semigroup of self-maps
};

/// A generator together with the statistics of its certification scan.
/// Flags are sampling certificates at `grid_margin`, not proofs.
struct GeneratorSpec {
    std::string name;
    HoloMap map;
    cplx f0deriv{};
    ClassFlags flags;
    double kappa_hat = 0.0;        // inf Re f(z)/z over the grid
    double sector_hat = 0.0;       // sup |arg f(z)/z| over the grid
    double min_re_deriv = 0.0;     // inf Re f'(z) over the grid
    cplx kappa_argmin{};
    std::optional<cplx> dw_point;  // empty when the Denjoy-Wolff point is on the boundary or unknown
    double grid_margin = 0.0;
    bool near_zero_infimum = false;  // kappa_hat within 1e-6 of zero

    cplx operator()(cplx z) const { return map(z); }
    cplx deriv(cplx z) const { return map.deriv(z); }
};

namespace detail {

inline cplx checked_eval(const HoloMap& f, cplx z) {
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "generator '" << f.label() << "' is not finite at " << z;
        throw evaluation_error(os.str(), z);
    }
    return v;
}

/// f(z)/z with the removable singularity at 0 filled by f'(0).
inline cplx quotient(const HoloMap& f, cplx z, cplx f0deriv) {
    return z == cplx{0.0, 0.0} ? f0deriv : checked_eval(f, z) / z;
}

/// Newton search for an interior zero of f starting at the origin.
inline std::optional<cplx> interior_zero(const HoloMap& f) {
    cplx z{0.0, 0.0};
    for (int it = 0; it < 100; ++it) {
        const cplx v = f(z);
        if (std::abs(v) < 1e-13) return z;
        const cplx d = f.deriv(z);
        if (std::abs(d) == 0.0) return std::nullopt;
        cplx step = -v / d;
        while (std::abs(z + step) >= 1.0 - 1e-12 && std::abs(step) > 1e-16) step *= 0.5;
        z += step;
    }
    return std::nullopt;
}

/// Re[f(z) conj z] > 0 on the annulus 0.99 <= |z| <= 1 - 1e-4.
inline bool boundary_annulus_test(const HoloMap& f) {
    const DiskGrid annulus = [] {
        DiskGrid g;
        g.angles_per_ring = 256;
        for (int k = 0; k < 8; ++k) g.radii.push_back(1.0 - 1e-2 * std::pow(1e-2, k / 7.0));
        return g;
    }();
    for (cplx z : annulus.points())
        if (!((checked_eval(f, z) * std::conj(z)).real() > 0.0)) return false;
    return true;
}

}  // namespace detail

/// Certifies `map` against the classes N, NW and G by sampling on `grid`.
inline GeneratorSpec make_generator(HoloMap map, const DiskGrid& grid = DiskGrid::standard(),
                                    std::string name = {}) {
    GeneratorSpec g;
    g.name = name.empty() ? map.label() : std::move(name);
    g.grid_margin = grid.margin();
    const cplx f0 = detail::checked_eval(map, 0.0);
    g.f0deriv = map.deriv(0.0);

    std::vector<cplx> pts = grid.points();
    pts.insert(pts.begin(), cplx{0.0, 0.0});

    double kappa = std::numeric_limits<double>::infinity();
    double sector = 0.0;
    double nw = std::numeric_limits<double>::infinity();
    for (cplx z : pts) {
        const cplx q = detail::quotient(map, z, g.f0deriv);
        if (q.real() < kappa) {
            kappa = q.real();
            g.kappa_argmin = z;
        }
        sector = std::max(sector, q == cplx{} ? pi : std::abs(std::arg(q)));
        nw = std::min(nw, map.deriv(z).real());
    }
    g.kappa_hat = kappa;
    g.sector_hat = sector;
    g.min_re_deriv = nw;
    g.near_zero_infimum = std::abs(kappa) < 1e-6;

    const bool fixes_origin = std::abs(f0) < 1e-12;
    g.flags.in_N = fixes_origin && kappa >= -membership_tolerance;
    g.flags.in_NW = g.flags.in_N && nw >= -membership_tolerance;
    g.flags.in_G = g.flags.in_N || detail::boundary_annulus_test(map);
    g.dw_point = fixes_origin ? std::optional<cplx>(0.0) : detail::interior_zero(map);
    g.map = std::move(map);
    return g;
}

/// Generator f(z) = (z - tau)(1 - z conj(tau)) p(z) with Re p > 0.
inline GeneratorSpec berkson_porta(cplx tau, const HoloMap& p, const DiskGrid& grid = DiskGrid::standard()) {
    if (std::abs(tau) > 1.0 + 1e-15) throw domain_error("berkson_porta: tau must lie in the closed disk");
    std::vector<cplx> pts = grid.points();
    pts.insert(pts.begin(), cplx{0.0, 0.0});
    for (cplx z : pts) {
        if (!(detail::checked_eval(p, z).real() > 0.0)) {
            std::ostringstream os;
            os << "berkson_porta: Re p <= 0 at " << z;
            throw evaluation_error(os.str(), z);
        }
    }
    const cplx tb = std::conj(tau);
    HoloMap f(
        [tau, tb, p](cplx z) { return (z - tau) * (1.0 - z * tb) * p(z); },
        [tau, tb, p](cplx z) {
            return ((1.0 - z * tb) - tb * (z - tau)) * p(z) + (z - tau) * (1.0 - z * tb) * p.deriv(z);
        },
        "berkson_porta(" + p.label() + ")");
    GeneratorSpec g = make_generator(std::move(f), grid);
    g.flags.in_G = true;
    g.dw_point = tau;
    return g;
}

/// Best sampled uniform rate kappa in |F_t(z)| <= |z| e^{-kappa t}.
inline double squeezing_coefficient(const GeneratorSpec& gen) {
    if (!gen.flags.in_N) throw contract_error("squeezing_coefficient: generator is not in class N");
    return gen.kappa_hat;
}

/// Sampled order inf Re[z f'(z)/f(z)] (1 at the origin), clamped at 0.
inline double starlike_order(const HoloMap& map, const DiskGrid& grid = DiskGrid::standard()) {
    if (std::abs(map(0.0)) > 1e-12) throw contract_error("starlike_order: map(0) must vanish");
    if (std::abs(map.deriv(0.0)) == 0.0) throw contract_error("starlike_order: map'(0) must not vanish");
    double order = 1.0;
    for (cplx z : grid.points()) {
        const cplx v = detail::checked_eval(map, z);
        if (v == cplx{}) {
            std::ostringstream os;
            os << "starlike_order: map vanishes at " << z << ", not starlike";
            throw evaluation_error(os.str(), z);
        }
        order = std::min(order, (z * map.deriv(z) / v).real());
    }
    return std::max(order, 0.0);
}

struct OrderBounds {
    double squeeze;  // exponential squeezing coefficient 2^{-2(1-alpha)} beta
    double sector;   // sup |arg f(z)/z| < (1 - alpha) pi
};

/// Squeezing and sector bounds implied by starlikeness of order alpha >= 1/2
/// with f'(0) = beta > 0.
inline OrderBounds order_to_bounds(double alpha, double beta) {
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw contract_error("order_to_bounds: starlike order must lie in [1/2, 1)");
    if (!(beta > 0.0)) throw contract_error("order_to_bounds: f'(0) must be positive");
    return {std::pow(2.0, -2.0 * (1.0 - alpha)) * beta, (1.0 - alpha) * pi};
}

// ---------------------------------------------------------------------------
// Built-in registry.

inline const std::vector<std::string_view>& builtin_generator_names() {
    static const std::vector<std::string_view> names{"identity", "ex1", "ex2", "half"};
    return names;
}

inline std::optional<HoloMap> builtin_map(std::string_view name) {
    if (name == "identity")
        return HoloMap([](cplx z) { return z; }, [](cplx) { return cplx{1.0, 0.0}; }, "z");
    if (name == "ex1")
        return HoloMap([](cplx z) { return z / (1.0 - z); },
                       [](cplx z) { return 1.0 / ((1.0 - z) * (1.0 - z)); }, "z/(1-z)");
    if (name == "ex2")
        return HoloMap([](cplx z) { return z * (1.0 - z); }, [](cplx z) { return 1.0 - 2.0 * z; }, "z*(1-z)");
    if (name == "half")
        return HoloMap([](cplx z) { return z * (1.0 + 0.5 * z); }, [](cplx z) { return 1.0 + z; },
                       "z*(1+z/2)");
    return std::nullopt;
}

/// Certified built-in generator; throws contract_error for unknown names.
inline GeneratorSpec builtin_generator(std::string_view name, const DiskGrid& grid = DiskGrid::standard()) {
    auto map = builtin_map(name);
    if (!map) throw contract_error("unknown built-in generator '" + std::string(name) + "'");
    return make_generator(std::move(*map), grid, std::string(name));
}

}  // namespace reslab
