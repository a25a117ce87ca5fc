#pragma once

// Nonlinear resolvent J_r = (I + r f)^{-1}: the unique solution z in the disk
// of z + r f(z) = w, with a winding-number certificate of uniqueness and the
// closed forms of the two worked generators z/(1-z) and z(1-z).

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "holo_core.hpp"

namespace reslab {

struct ResolventSolve {
    cplx z{};                     // J_r(w)
    double residual = 0.0;        // |z + r f(z) - w|
    int iterations = 0;           // Newton iterations over the whole path
    int continuation_steps = 0;
    std::optional<int> winding;   // empty when certification was skipped
    std::vector<double> trace;    // residual after each Newton iteration
};

inline constexpr double resolvent_tolerance = 1e-10;

namespace detail {

using Admissible = std::function<bool(cplx)>;

inline bool in_disk_margin(cplx z) { return std::abs(z) <= 1.0 - 1e-14; }

struct NewtonOutcome {
    cplx z;
    double residual;
    bool converged;
};

/// Damped Newton for z + r f(z) = w starting at z0. Steps are halved until the
/// residual decreases and the iterate stays admissible.
inline NewtonOutcome newton_resolvent(const HoloMap& f, double r, cplx w, cplx z0, const Admissible& admissible,
                                      std::vector<double>& trace, int& iterations, int max_iter = 100) {
    auto residual_at = [&](cplx z) { return std::abs(z + r * f(z) - w); };
    cplx z = z0;
    double res = residual_at(z);
    int stalled = 0;
    for (int it = 0; it < max_iter; ++it) {
        const cplx fz = f(z);
        const double floor = 4e-16 * (std::abs(z) + std::abs(r * fz) + std::abs(w) + 1e-300);
        if (res <= floor) return {z, res, true};
        const cplx denom = 1.0 + r * f.deriv(z);
        if (std::abs(denom) == 0.0) break;
        const cplx step = -(z + r * fz - w) / denom;
        double lambda = 1.0;
        cplx trial = z + step;
        double trial_res = admissible(trial) ? residual_at(trial) : HUGE_VAL;
        for (int half = 0; half < 60 && !(trial_res < res); ++half) {
            lambda *= 0.5;
            trial = z + lambda * step;
            trial_res = admissible(trial) ? residual_at(trial) : HUGE_VAL;
        }
        ++iterations;
        if (!(trial_res < res)) {
            // No admissible decrease: the iterate sits at the rounding floor.
            trace.push_back(res);
            if (++stalled >= 2) break;
            continue;
        }
        const bool tiny = std::abs(trial - z) <= 1e-16 * (1.0 + std::abs(z));
        z = trial;
        res = trial_res;
        trace.push_back(res);
        if (tiny) break;
    }
    return {z, res, res < resolvent_tolerance};
}

/// Path-following in r from J_0(w) = w with an Euler predictor along
/// dz/dr = -f(z)/(1 + r f'(z)). The path r(s) = sign(r) ((1 + |r|)^s - 1) is
/// cut into 1, 2, 4, ... `max_steps` equal steps in s. If every fixed schedule
/// fails (typically a near double root of z + r f(z) = w on the way) an
/// adaptive pass halves the step in s until Newton converges.
inline ResolventSolve continuation_solve(const HoloMap& f, double r, cplx w, const Admissible& admissible,
                                         int max_steps = 64) {
    ResolventSolve out;
    if (r == 0.0) {
        out.z = w;
        return out;
    }
    const double sign = r < 0.0 ? -1.0 : 1.0;
    const double base = std::log1p(std::abs(r));
    auto r_of = [&](double s) { return s >= 1.0 ? r : sign * std::expm1(s * base); };

    auto advance = [&](cplx z, double r_prev, double r_next, std::vector<double>& trace, int& iterations) {
        cplx guess = z;
        const cplx denom = 1.0 + r_prev * f.deriv(z);
        if (std::abs(denom) > 0.0) {
            const cplx pred = z - (r_next - r_prev) * f(z) / denom;
            if (admissible(pred)) guess = pred;
        }
        return newton_resolvent(f, r_next, w, guess, admissible, trace, iterations);
    };

    for (int steps = 1; steps <= max_steps; steps *= 2) {
        std::vector<double> trace;
        int iterations = 0;
        cplx z = w;
        double r_prev = 0.0;
        bool ok = true;
        double res = 0.0;
        for (int k = 1; k <= steps; ++k) {
            const double r_k = r_of(double(k) / steps);
            const NewtonOutcome n = advance(z, r_prev, r_k, trace, iterations);
            z = n.z;
            res = n.residual;
            r_prev = r_k;
            if (!n.converged) {
                ok = false;
                break;
            }
        }
        out.trace.insert(out.trace.end(), trace.begin(), trace.end());
        out.iterations += iterations;
        if (ok) {
            out.z = z;
            out.residual = res;
            out.continuation_steps = steps;
            return out;
        }
    }

    cplx z = w;
    double s = 0.0, ds = 1.0 / max_steps;
    int steps = 0;
    while (s < 1.0) {
        const double s_next = std::min(1.0, s + ds);
        std::vector<double> trace;
        int iterations = 0;
        const NewtonOutcome n = advance(z, r_of(s), r_of(s_next), trace, iterations);
        out.iterations += iterations;
        if (n.converged) {
            z = n.z;
            s = s_next;
            ++steps;
            ds = std::min(2.0 * ds, 1.0 / max_steps);
            if (s >= 1.0) {
                out.z = z;
                out.residual = n.residual;
                out.continuation_steps = max_steps + steps;
                return out;
            }
        } else {
            out.trace.insert(out.trace.end(), trace.begin(), trace.end());
            ds *= 0.5;
            if (ds < 1e-12) break;
        }
    }
    std::ostringstream os;
    os << "resolvent solve did not converge for r = " << r << ", w = " << w;
    throw convergence_error(os.str(), std::move(out.trace));
}

}  // namespace detail

/// Winding number of g(z) = z + r f(z) - w along |z| = t by trapezoidal
/// integration of g'/g. A value of 1 certifies exactly one zero in |z| < t.
/// At least 4096 nodes are used; more when t is close to the unit circle.
inline int certify_uniqueness(const GeneratorSpec& gen, double r, cplx w, double t) {
    if (!(t > std::abs(w) && t < 1.0))
        throw contract_error("certify_uniqueness: contour radius must satisfy |w| < t < 1");
    const int nodes = std::max(4096, static_cast<int>(std::ceil(40.0 / -std::log(t))));
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const cplx z = std::polar(t, 2.0 * pi * j / nodes);
        const cplx g = z + r * gen(z) - w;
        if (std::abs(g) < 1e-8) throw contract_error("certify_uniqueness: contour passes too close to a zero");
        acc += ((1.0 + r * gen.deriv(z)) / g * z).real();
    }
    return static_cast<int>(std::lround(acc / nodes));
}

/// J_r(w) for r >= 0. With `certify` set, the winding certificate is computed
/// on a contour between |w| and the unit circle.
inline ResolventSolve solve(const GeneratorSpec& gen, double r, cplx w, bool certify = false) {
    require_in_disk(w, "resolvent solve");
    if (!(r >= 0.0)) throw contract_error("resolvent solve: r must be non-negative on the disk");
    if (!gen.flags.in_G && !gen.flags.in_N) throw contract_error("resolvent solve: not a certified generator");
    ResolventSolve s = detail::continuation_solve(gen.map, r, w, detail::in_disk_margin);
    if (certify) {
        const double t = std::max(0.99, 0.5 * (1.0 + std::abs(w)));
        try {
            s.winding = certify_uniqueness(gen, r, w, t);
        } catch (const contract_error&) {
            s.winding = certify_uniqueness(gen, r, w, 0.5 * (t + 1.0));
        }
    }
    return s;
}

/// J_r'(w) = 1 / (1 + r f'(J_r(w))).
inline cplx derivative_at(const GeneratorSpec& gen, double r, cplx z) {
    const cplx denom = 1.0 + r * gen.deriv(z);
    if (std::abs(denom) < 1e-12) throw domain_error("resolvent derivative is singular");
    return 1.0 / denom;
}

inline cplx derivative(const GeneratorSpec& gen, double r, cplx w) {
    return derivative_at(gen, r, solve(gen, r, w).z);
}

/// w -> J_r(w) as an evaluable map with its closed-form derivative.
inline HoloMap resolvent_map(const GeneratorSpec& gen, double r) {
    return HoloMap([gen, r](cplx w) { return solve(gen, r, w).z; },
                   [gen, r](cplx w) { return derivative(gen, r, w); },
                   "J_" + std::to_string(r) + "[" + gen.name + "]");
}

// ---------------------------------------------------------------------------
// Closed forms.

namespace detail {

/// Roots of a z^2 + b z + c (a may vanish) without cancellation.
inline std::array<cplx, 2> quadratic_roots(cplx a, cplx b, cplx c) {
    const double inf = HUGE_VAL;
    if (a == cplx{}) return {-c / b, cplx{inf, 0.0}};
    const cplx sq = std::sqrt(b * b - 4.0 * a * c);
    const cplx q = -0.5 * (std::abs(b + sq) >= std::abs(b - sq) ? b + sq : b - sq);
    if (q == cplx{}) return {cplx{}, cplx{}};
    return {q / a, c / q};
}

/// Follows the root of a(r) z^2 + b(r) z + c(r) that equals w at r = 0, along
/// r(s) = sign(r) ((1+|r|)^s - 1), for coefficients affine in r.
///
/// The root is (-b - sigma sqrt(D)) / (2a) with D = b^2 - 4ac, so continuity
/// of the root is continuity of the square-root branch. D is quadratic in r;
/// a step is accepted only when D at its end and midpoint stays within a
/// quarter of |D| at its start, which keeps D on one side of the origin over
/// the whole step (the three-node Lebesgue constant is 5/4), and the branch of
/// sqrt(D) is then the one nearest the previous value.
template <class Coeffs>
cplx track_root(Coeffs coeffs, double r, cplx w) {
    constexpr double max_ds = 1.0 / 256;
    const double sign = r < 0.0 ? -1.0 : 1.0;
    const double span = std::log1p(std::abs(r));
    auto r_of = [&](double s) { return s >= 1.0 ? r : sign * std::expm1(span * s); };
    auto disc = [&](double rk) {
        const auto [a, b, c] = coeffs(rk);
        return b * b - 4.0 * a * c;
    };
    // Root with branch value `sq` of sqrt(D), evaluated without cancellation.
    auto root = [&](double rk, cplx sq, double sigma) {
        const auto [a, b, c] = coeffs(rk);
        const cplx num = -b - sigma * sq;
        const cplx alt = -b + sigma * sq;
        if (std::abs(num) >= std::abs(alt) && a != cplx{}) return num / (2.0 * a);
        return 2.0 * c / alt;
    };

    cplx d_now = disc(0.0);
    cplx sq = std::sqrt(d_now);
    const double sigma = std::abs(root(0.0, sq, 1.0) - w) <= std::abs(root(0.0, sq, -1.0) - w) ? 1.0 : -1.0;
    double s = 0.0, ds = max_ds;
    while (s < 1.0) {
        const double s_next = std::min(1.0, s + ds);
        const cplx d_next = disc(r_of(s_next));
        const cplx d_mid = disc(r_of(0.5 * (s + s_next)));
        const double room = 0.25 * std::abs(d_now);
        if (std::abs(d_next - d_now) > room || std::abs(d_mid - d_now) > room) {
            ds *= 0.5;
            if (ds < 1e-15) {
                std::ostringstream os;
                os << "closed-form branch tracking lost continuity at r = " << r_of(s) << ", w = " << w;
                throw convergence_error(os.str(), {});
            }
            continue;
        }
        const cplx cand = std::sqrt(d_next);
        sq = std::abs(cand - sq) <= std::abs(cand + sq) ? cand : -cand;
        d_now = d_next;
        s = s_next;
        ds = std::min(2.0 * ds, max_ds);
    }
    return root(r, sq, sigma);
}

}  // namespace detail

/// Resolvent of f(z) = z/(1-z): the root of z^2 - (1+r+w) z + w = 0 that
/// continues z = w from r = 0.
inline cplx closed_form_ex1(double r, cplx w) {
    require_in_disk(w, "closed_form_ex1");
    if (r == 0.0) return w;
    return detail::track_root(
        [w](double rk) { return std::array<cplx, 3>{1.0, -(1.0 + rk + w), w}; }, r, w);
}

/// Resolvent of f(z) = z(1-z): (r+1 - sqrt((r+1)^2 - 4 r w)) / (2r), followed
/// continuously from J_0 = identity. Negative r is allowed here; the caller
/// owns the domain question.
inline cplx closed_form_ex2(double r, cplx w) {
    if (r == 0.0) return w;
    return detail::track_root(
        [w](double rk) { return std::array<cplx, 3>{rk, -(1.0 + rk), w}; }, r, w);
}

}  // namespace reslab
