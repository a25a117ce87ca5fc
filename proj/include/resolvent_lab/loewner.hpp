#pragma once

// The resolvent family as an inverse Loewner chain. p(w, r) = (1/r)(1 - J_r(w)/w)
// is a Herglotz field of divergence type; its consequences (the chain PDE,
// the divergence integral, the derivative identity at the origin and the
// quasiconformal sector bound) are checked numerically here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "generators.hpp"
#include "geometry.hpp"
#include "resolvent.hpp"

namespace reslab {

/// p(w, r) = f(J_r(w))/w, which equals (1/r)(1 - J_r(w)/w) for r > 0 and
/// continues to f(w)/w at r = 0. At w = 0 it is f'(0) J_r'(0).
inline cplx herglotz_p(const GeneratorSpec& gen, double r, cplx w) {
    require_in_disk(w, "herglotz_p");
    if (!(r >= 0.0)) throw contract_error("herglotz_p: r must be non-negative");
    if (w == cplx{}) return gen.f0deriv * derivative(gen, r, 0.0);
    if (r == 0.0) return gen(w) / w;
    return gen(solve(gen, r, w).z) / w;
}

/// The defining quotient (1/r)(1 - J_r(w)/w), r > 0, w != 0.
inline cplx herglotz_p_direct(const GeneratorSpec& gen, double r, cplx w) {
    if (!(r > 0.0) || w == cplx{}) throw contract_error("herglotz_p_direct: need r > 0 and w != 0");
    return (1.0 - solve(gen, r, w).z / w) / r;
}

class HerglotzField {
public:
    explicit HerglotzField(GeneratorSpec gen) : gen_(std::move(gen)) {}
    cplx operator()(cplx w, double r) const { return herglotz_p(gen_, r, w); }
    const GeneratorSpec& generator() const { return gen_; }

private:
    GeneratorSpec gen_;
};

namespace detail {

inline double simpson_step(const std::function<double(double)>& fn, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw convergence_error("adaptive Simpson: recursion limit reached", {std::abs(delta)});
    return simpson_step(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol = 1e-10) {
    const double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(fn, a, b, fa, fm, fb, whole, tol, 50);
}

struct DivergenceIntegral {
    double numeric;  // quadrature of Re p(0, r) over [0, T]
    double exact;    // log |1 + T f'(0)|
};

inline DivergenceIntegral divergence_integral(const GeneratorSpec& gen, double T) {
    if (!(T > 0.0)) throw contract_error("divergence_integral: T must be positive");
    if (gen.f0deriv == cplx{}) throw contract_error("divergence_integral: f'(0) must not vanish");
    const double numeric = adaptive_simpson([&](double r) { return herglotz_p(gen, r, 0.0).real(); }, 0.0, T);
    return {numeric, std::log(std::abs(1.0 + T * gen.f0deriv))};
}

/// |dJ/dr + w J'(w) p(w, r)| with dJ/dr from a central difference of step h.
inline double pde_residual(const GeneratorSpec& gen, double r, cplx w, double h) {
    if (!(h > 0.0 && r > h)) throw contract_error("pde_residual: need r > h > 0");
    const cplx dr = (solve(gen, r + h, w).z - solve(gen, r - h, w).z) / (2.0 * h);
    return std::abs(dr + w * derivative(gen, r, w) * herglotz_p(gen, r, w));
}

/// |J_T'(0) - exp(-int_0^T p(0, r) dr)|.
inline double chain_derivative_identity(const GeneratorSpec& gen, double T) {
    if (!(T > 0.0)) throw contract_error("chain_derivative_identity: T must be positive");
    const double re = adaptive_simpson([&](double r) { return herglotz_p(gen, r, 0.0).real(); }, 0.0, T);
    const double im = adaptive_simpson([&](double r) { return herglotz_p(gen, r, 0.0).imag(); }, 0.0, T);
    return std::abs(derivative(gen, T, 0.0) - std::exp(-cplx{re, im}));
}

struct SectorReport {
    double alpha_hat = 0.0;      // (2/pi) sup |arg f(z)/z|
    std::optional<double> k;     // sin(pi alpha_hat / 2); empty when alpha_hat >= 1
    double sup_arg_p = 0.0;      // sup |arg p(w, r)| over the sweep
    bool p_sector_ok = false;
};

/// Quasiconformal bound from the sector of f(z)/z, and the check that p(w, r)
/// stays in the same sector for every r in `r_list`.
inline SectorReport sector_report(const GeneratorSpec& gen, const std::vector<double>& r_list,
                                  const DiskGrid& grid = DiskGrid::standard()) {
    if (!gen.flags.in_N) throw contract_error("sector_report: generator is not in class N");
    SectorReport rep;
    rep.alpha_hat = 2.0 * gen.sector_hat / pi;
    if (rep.alpha_hat < 1.0) rep.k = std::sin(pi * rep.alpha_hat / 2.0);
    const std::vector<cplx> pts = grid.points();
    for (double r : r_list) {
        std::vector<double> args(pts.size(), 0.0);
        parallel_for(pts.size(), [&](std::size_t i) { args[i] = std::abs(std::arg(herglotz_p(gen, r, pts[i]))); });
        rep.sup_arg_p = std::max(rep.sup_arg_p, *std::max_element(args.begin(), args.end()));
    }
    rep.p_sector_ok = rep.sup_arg_p <= pi * rep.alpha_hat / 2.0 + 1e-6;
    return rep;
}

/// Minimum of Re p(w, r) over the grid and every r in `r_list`.
inline PropertyReport herglotz_positivity(const GeneratorSpec& gen, const std::vector<double>& r_list,
                                          const DiskGrid& grid = DiskGrid::standard()) {
    PropertyReport rep;
    rep.property = "herglotz_positivity";
    rep.grid = detail::describe(grid);
    rep.worst_value = std::numeric_limits<double>::infinity();
    std::vector<cplx> pts = grid.points();
    pts.insert(pts.begin(), cplx{});
    for (double r : r_list) {
        std::vector<double> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) { vals[i] = herglotz_p(gen, r, pts[i]).real(); });
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (vals[i] < rep.worst_value) {
                rep.worst_value = vals[i];
                rep.worst_point = pts[i];
                rep.extras["worst_r"] = r;
            }
        }
        rep.samples += pts.size();
    }
    rep.pass = rep.worst_value > 0.0;
    return rep;
}

/// Samples the sector |arg zeta| < pi alpha / 2 on a log-radius x angle grid,
/// |zeta| in [1e-3, 1e3], and checks that zeta/(1 + zeta) stays inside it.
inline PropertyReport lens_inclusion_check(double alpha, int samples) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw contract_error("lens_inclusion_check: alpha must lie in (0, 1)");
    if (samples < 1) throw contract_error("lens_inclusion_check: need at least one sample");
    const int n_angle = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    const int n_radius = std::max(1, (samples + n_angle - 1) / n_angle);
    const double half = pi * alpha / 2.0;
    PropertyReport rep;
    rep.property = "lens_inclusion";
    rep.grid = std::to_string(n_radius) + " radii x " + std::to_string(n_angle) + " angles";
    rep.tolerance = 1e-9;
    rep.worst_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_radius; ++i) {
        const double rho = std::pow(10.0, -3.0 + 6.0 * (n_radius == 1 ? 0.5 : double(i) / (n_radius - 1)));
        for (int j = 0; j < n_angle; ++j) {
            const double phi = half * (-1.0 + (2.0 * j + 1.0) / n_angle);
            const cplx zeta = std::polar(rho, phi);
            const double excess = std::abs(std::arg(zeta / (1.0 + zeta))) - half;
            if (excess > rep.worst_value) {
                rep.worst_value = excess;
                rep.worst_point = zeta;
            }
            ++rep.samples;
        }
    }
    rep.pass = rep.worst_value < rep.tolerance;
    return rep;
}

/// Quasiconformal constant sin(pi alpha) for a generator that is starlike of
/// order alpha in (1/2, 1) with f'(0) > 0, via the sector bound (1-alpha) pi.
inline double qc_constant_from_starlike_order(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) throw contract_error("qc bound needs starlike order in (1/2, 1)");
    const double sector = order_to_bounds(alpha, 1.0).sector;
    return std::sin(pi * (2.0 * sector / pi) / 2.0);
}

}  // namespace reslab
