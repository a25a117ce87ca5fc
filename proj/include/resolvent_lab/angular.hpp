#pragma once

// Angular limits and angular derivatives at a boundary point, taken along the
// radius z_k = (1 - 2^{-k}) zeta and accelerated by Richardson extrapolation.

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "holo_core.hpp"

namespace reslab {

inline constexpr int default_angular_depth = 24;

struct RadialLimit {
    std::optional<cplx> value;    // empty when the radial data diverge
    std::vector<double> steps;    // h_k = 2^{-k}
    std::vector<cplx> samples;    // raw sequence fed to the extrapolation
    std::vector<cplx> extrapolants;
};

namespace detail {

/// Neville tableau for a sequence sampled at h_k = 2^{-k}, assuming an
/// expansion in powers of h^{1/2}. Analytic data (integer powers) are a
/// special case; the half powers absorb square-root branch points.
inline std::vector<cplx> richardson_tail(const std::vector<cplx>& seq, int max_level = 6) {
    std::vector<cplx> out;
    std::vector<cplx> prev;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        std::vector<cplx> row{seq[k]};
        const std::size_t levels = std::min<std::size_t>(k, static_cast<std::size_t>(max_level));
        for (std::size_t j = 1; j <= levels; ++j) {
            const double factor = std::pow(2.0, 0.5 * static_cast<double>(j));
            row.push_back(row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0));
        }
        out.push_back(row.back());
        prev = std::move(row);
    }
    return out;
}

inline bool cauchy_tail(const std::vector<cplx>& ext, double tol) {
    if (ext.size() < 2) return false;
    const cplx a = ext[ext.size() - 1];
    const cplx b = ext[ext.size() - 2];
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

inline void check_boundary_point(cplx zeta, int depth) {
    if (std::abs(std::abs(zeta) - 1.0) > 1e-12) throw domain_error("angular limit: zeta must lie on the unit circle");
    if (depth < 4) throw contract_error("angular limit: depth must be at least 4");
}

inline cplx radial_eval(const ComplexFn& map, cplx z) {
    const cplx v = map(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw evaluation_error("angular limit: map is not finite near the boundary", z);
    return v;
}

}  // namespace detail

/// Angular limit of `map` at `zeta`; empty when successive extrapolants do not
/// agree to 1e-6.
inline RadialLimit angular_limit(const ComplexFn& map, cplx zeta, int depth = default_angular_depth) {
    detail::check_boundary_point(zeta, depth);
    RadialLimit out;
    for (int k = 3; k <= depth; ++k) {
        const double h = std::ldexp(1.0, -k);
        out.steps.push_back(h);
        out.samples.push_back(detail::radial_eval(map, (1.0 - h) * zeta));
    }
    out.extrapolants = detail::richardson_tail(out.samples);
    if (detail::cauchy_tail(out.extrapolants, 1e-6)) out.value = out.extrapolants.back();
    return out;
}

/// Angular derivative lim (map(z) - target)/(z - zeta) along the radius.
/// Empty ("divergent") when the raw quotients exceed 1e3 and keep growing,
/// or when the extrapolants fail to settle.
inline RadialLimit angular_derivative(const ComplexFn& map, cplx zeta, cplx target,
                                      int depth = default_angular_depth) {
    detail::check_boundary_point(zeta, depth);
    RadialLimit out;
    for (int k = 3; k <= depth; ++k) {
        const double h = std::ldexp(1.0, -k);
        const cplx z = (1.0 - h) * zeta;
        out.steps.push_back(h);
        out.samples.push_back((detail::radial_eval(map, z) - target) / (z - zeta));
    }
    const auto& s = out.samples;
    const std::size_t n = s.size();
    const bool growing = std::abs(s[n - 1]) > std::abs(s[n - 2]) && std::abs(s[n - 2]) > std::abs(s[n - 3]);
    if (std::abs(s[n - 1]) > 1e3 && growing) return out;
    out.extrapolants = detail::richardson_tail(out.samples);
    if (detail::cauchy_tail(out.extrapolants, 1e-6)) out.value = out.extrapolants.back();
    return out;
}

}  // namespace reslab
