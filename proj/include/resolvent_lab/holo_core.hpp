#pragma once

// Complex-analytic foundation: evaluable holomorphic maps on the unit disk,
// Cauchy-ring derivatives, verification grids and the hyperbolic metric.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace reslab {

using cplx = std::complex<double>;
using ComplexFn = std::function<cplx(cplx)>;

inline constexpr double pi = std::numbers::pi;

inline void require_in_disk(cplx z, const char* what) {
    if (!(std::abs(z) < 1.0))
        throw domain_error(std::string(what) + ": point must lie in the open unit disk");
}

/// Derivative of an analytic `f` at `z` from the Cauchy integral over a small
/// ring: (1/M) sum f(z + rho e^{i theta_j}) e^{-i theta_j} / rho with M = 32
/// and rho = min(1e-3, (1-|z|)/2).
inline cplx spectral_derivative(const ComplexFn& f, cplx z) {
    require_in_disk(z, "spectral_derivative");
    constexpr int ring = 32;
    const double rho = std::min(1e-3, 0.5 * (1.0 - std::abs(z)));
    cplx acc{0.0, 0.0};
    for (int j = 0; j < ring; ++j) {
        const cplx e = std::polar(1.0, 2.0 * pi * j / ring);
        acc += f(z + rho * e) / e;
    }
    return acc / (ring * rho);
}

/// A holomorphic function on the disk with a derivative channel. The
/// derivative is closed-form when supplied and spectral otherwise.
class HoloMap {
public:
    HoloMap() = default;
    HoloMap(ComplexFn f, std::string label) : f_(std::move(f)), label_(std::move(label)) {}
    HoloMap(ComplexFn f, ComplexFn df, std::string label)
        : f_(std::move(f)), df_(std::move(df)), label_(std::move(label)) {}

    cplx operator()(cplx z) const { return f_(z); }
    cplx eval(cplx z) const { return f_(z); }

    cplx deriv(cplx z) const { return df_ ? df_(z) : spectral_derivative(f_, z); }

    /// Derivative that always goes through the Cauchy ring, for cross-checks.
    cplx spectral_deriv(cplx z) const { return spectral_derivative(f_, z); }

    bool has_closed_form_derivative() const { return static_cast<bool>(df_); }
    const std::string& label() const { return label_; }
    const ComplexFn& function() const { return f_; }

private:
    ComplexFn f_;
    ComplexFn df_;
    std::string label_;
};

/// Rings of equispaced points; radii approach the boundary geometrically.
struct DiskGrid {
    std::vector<double> radii;
    int angles_per_ring = 0;

    double margin() const {
        return radii.empty() ? 1.0 : 1.0 - *std::max_element(radii.begin(), radii.end());
    }

    /// `rings` radii with 1 - rho geometric from 0.9 down to `margin`.
    static DiskGrid geometric(int rings, int angles, double margin) {
        if (rings < 1 || angles < 1 || !(margin > 0.0 && margin < 0.9))
            throw contract_error("DiskGrid: need rings >= 1, angles >= 1, 0 < margin < 0.9");
        DiskGrid g;
        g.angles_per_ring = angles;
        for (int k = 0; k < rings; ++k) {
            const double s = rings == 1 ? 1.0 : double(k) / (rings - 1);
            g.radii.push_back(1.0 - 0.9 * std::pow(margin / 0.9, s));
        }
        return g;
    }

    /// 24 radii from 0.1 to 1 - 1e-3, 256 angles each.
    static DiskGrid standard() { return geometric(24, 256, 1e-3); }

    std::vector<cplx> points() const {
        std::vector<cplx> pts;
        pts.reserve(radii.size() * static_cast<std::size_t>(angles_per_ring));
        for (double rho : radii)
            for (int j = 0; j < angles_per_ring; ++j)
                pts.push_back(std::polar(rho, 2.0 * pi * j / angles_per_ring));
        return pts;
    }
};

// ---------------------------------------------------------------------------
// Hyperbolic geometry of the disk.

/// Disk automorphism sending `a` to the origin.
inline cplx mobius_to_origin(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }

inline cplx mobius_from_origin(cplx a, cplx u) { return (u + a) / (1.0 + std::conj(a) * u); }

/// d(z1, z2) = artanh |m(z2)| with m moving z1 to 0.
inline double hyperbolic_distance(cplx z1, cplx z2) {
    return std::atanh(std::abs(mobius_to_origin(z1, z2)));
}

/// `n` points on the geodesic from z1 to z2, equally spaced in hyperbolic
/// arclength. Endpoints are returned exactly.
inline std::vector<cplx> hyperbolic_geodesic(cplx z1, cplx z2, int n) {
    require_in_disk(z1, "hyperbolic_geodesic");
    require_in_disk(z2, "hyperbolic_geodesic");
    if (n < 2) throw contract_error("hyperbolic_geodesic: need at least 2 samples");
    const cplx end = mobius_to_origin(z1, z2);
    const double len = std::atanh(std::abs(end));
    const cplx dir = std::abs(end) > 0.0 ? end / std::abs(end) : cplx{1.0, 0.0};
    std::vector<cplx> pts(static_cast<std::size_t>(n));
    pts.front() = z1;
    pts.back() = z2;
    for (int k = 1; k + 1 < n; ++k) {
        const double s = len * k / (n - 1);
        pts[static_cast<std::size_t>(k)] = mobius_from_origin(z1, std::tanh(s) * dir);
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Parallel scans.

/// Worker count: hardware concurrency, capped by RESOLVENT_LAB_THREADS.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("RESOLVENT_LAB_THREADS")) {
        const long c = std::strtol(cap, nullptr, 10);
        if (c >= 1) n = std::min(n, static_cast<unsigned>(c));
    }
    return n;
}

/// Runs fn(i) for i in [0, count). The first exception thrown by any worker
/// is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace reslab
