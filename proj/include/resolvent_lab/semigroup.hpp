#pragma once

// The semigroup F_t generated by f: du/dt + f(u) = 0, u(0) = z. Integrated
// with an adaptive Dormand-Prince 5(4) pair. Also the exponential formula
// J_{t/n}^n -> F_t and the boundary multiplier (F_t)'(eta) = exp(-t f'(eta)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "angular.hpp"
#include "generators.hpp"
#include "resolvent.hpp"

namespace reslab {

/// Raised when the step size collapses; carries the last accepted state.
class stiffness_error : public convergence_error {
public:
    stiffness_error(const std::string& what, double t, cplx u)
        : convergence_error(what, {}), time(t), state(u) {}
    double time;
    cplx state;
};

struct FlowOptions {
    double rtol = 1e-10;
    double atol = 1e-14;
    double max_modulus = 1.0 - 1e-15;
};

struct FlowTrajectory {
    cplx start{};
    std::vector<double> times;
    std::vector<cplx> values;
    double tol = 0.0;
    bool clamped = false;   // some state was pulled back to |u| = max_modulus
    int accepted_steps = 0;
    int rejected_steps = 0;
};

namespace detail {

struct DormandPrince {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b* (difference between the 5th and embedded 4th order weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Values F_t(z) at each of the increasing `times`.
inline FlowTrajectory trajectory(const GeneratorSpec& gen, cplx z, const std::vector<double>& times,
                                 const FlowOptions& opt = {}) {
    require_in_disk(z, "flow");
    if (!gen.flags.in_G) throw contract_error("flow: not a certified generator");
    using DP = detail::DormandPrince;
    FlowTrajectory traj;
    traj.start = z;
    traj.tol = opt.rtol;
    auto rhs = [&](cplx u) { return -gen(u); };
    auto clamp = [&](cplx u) {
        const double m = std::abs(u);
        if (m > opt.max_modulus) {
            traj.clamped = true;
            return u * (opt.max_modulus / m);
        }
        return u;
    };

    double t = 0.0;
    cplx u = z;
    cplx k1 = rhs(u);
    double h = 1e-3;
    for (double target : times) {
        if (target < t) throw contract_error("flow: times must be non-negative and increasing");
        while (t < target) {
            const bool last = t + h >= target;
            const double step = last ? target - t : h;
            const cplx k2 = rhs(u + step * (DP::a21 * k1));
            const cplx k3 = rhs(u + step * (DP::a31 * k1 + DP::a32 * k2));
            const cplx k4 = rhs(u + step * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3));
            const cplx k5 = rhs(u + step * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
            const cplx k6 =
                rhs(u + step * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5));
            const cplx next = u + step * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
            const cplx k7 = rhs(next);
            const cplx err_vec =
                step * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 + DP::e6 * k6 + DP::e7 * k7);
            const double scale = opt.atol + opt.rtol * std::max(std::abs(u), std::abs(next));
            const double err = std::abs(err_vec) / scale;
            if (err <= 1.0) {
                t = last ? target : t + step;
                u = clamp(next);
                k1 = rhs(u);
                ++traj.accepted_steps;
            } else {
                ++traj.rejected_steps;
            }
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // Keep the last shortened step from shrinking the working step size.
            if (!(last && err <= 1.0)) h = step * factor;
            if (h < 1e-14 * std::max(1.0, t)) {
                std::ostringstream os;
                os << "flow: step size underflow at t = " << t << ", u = " << u;
                throw stiffness_error(os.str(), t, u);
            }
        }
        traj.times.push_back(target);
        traj.values.push_back(u);
    }
    return traj;
}

/// F_t(z).
inline cplx flow(const GeneratorSpec& gen, cplx z, double t, const FlowOptions& opt = {}) {
    if (!(t >= 0.0)) throw contract_error("flow: t must be non-negative");
    if (t == 0.0) {
        require_in_disk(z, "flow");
        return z;
    }
    return trajectory(gen, z, {t}, opt).values.back();
}

/// |F_t(F_s(z)) - F_{t+s}(z)|.
inline double semigroup_law_check(const GeneratorSpec& gen, cplx z, double s, double t) {
    if (!(s >= 0.0 && t >= 0.0)) throw contract_error("semigroup_law_check: s, t must be non-negative");
    return std::abs(flow(gen, flow(gen, z, s), t) - flow(gen, z, s + t));
}

struct ExponentialFormula {
    cplx approx{};
    double error = 0.0;            // |J_{t/n}^n(z) - F_t(z)|
    std::vector<cplx> iterates;    // J_{t/n}^k(z), k = 0..n
};

/// n-fold composition of J_{t/n}: one implicit Euler step of the flow each.
inline ExponentialFormula exponential_formula(const GeneratorSpec& gen, cplx z, double t, int n) {
    if (!(t >= 0.0)) throw contract_error("exponential_formula: t must be non-negative");
    if (n < 1) throw contract_error("exponential_formula: n must be positive");
    ExponentialFormula out;
    out.iterates.reserve(static_cast<std::size_t>(n) + 1);
    cplx u = z;
    out.iterates.push_back(u);
    for (int k = 0; k < n; ++k) {
        u = solve(gen, t / n, u).z;
        out.iterates.push_back(u);
    }
    out.approx = u;
    out.error = std::abs(u - flow(gen, z, t));
    return out;
}

struct BoundaryMultiplier {
    cplx multiplier{};      // exp(-t f'(eta))
    cplx angular_deriv{};   // f'(eta)
    cplx flow_quotient{};   // (F_t(z) - eta)/(z - eta) at distance 1e-3 from eta
    bool agrees = false;    // relative difference within 5%
};

/// (F_t)'(eta) at a boundary regular null point eta of the generator.
inline BoundaryMultiplier boundary_flow_multiplier(const GeneratorSpec& gen, cplx eta, double t) {
    const RadialLimit value = angular_limit(gen.map.function(), eta);
    if (!value.value || std::abs(*value.value) > 1e-6)
        throw contract_error("boundary_flow_multiplier: eta is not a null point of the generator");
    const RadialLimit slope = angular_derivative(gen.map.function(), eta, 0.0);
    if (!slope.value) throw contract_error("boundary_flow_multiplier: angular derivative diverges at eta");
    BoundaryMultiplier out;
    out.angular_deriv = *slope.value;
    out.multiplier = std::exp(-t * out.angular_deriv);
    const cplx z = (1.0 - 1e-3) * eta;
    out.flow_quotient = (flow(gen, z, t) - eta) / (z - eta);
    out.agrees = std::abs(out.flow_quotient - out.multiplier) <= 0.05 * std::abs(out.multiplier);
    return out;
}

}  // namespace reslab
