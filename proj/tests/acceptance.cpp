// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <resolvent_lab/boundary.hpp>
#include <resolvent_lab/generators.hpp>
#include <resolvent_lab/geometry.hpp>
#include <resolvent_lab/loewner.hpp>
#include <resolvent_lab/resolvent.hpp>
#include <resolvent_lab/semigroup.hpp>

using namespace reslab;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

class Detail {
public:
    template <class T>
    Detail& operator<<(const T& v) {
        os_ << v;
        return *this;
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cplx random_disk_point(std::mt19937_64& rng, double max_radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(max_radius * std::sqrt(u(rng)), 2.0 * pi * u(rng));
}

Outcome oracle_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ur(0.0, 10.0);
    const GeneratorSpec g1 = builtin_generator("ex1"), g2 = builtin_generator("ex2");
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r1 = ur(rng), r2 = ur(rng);
        const cplx w1 = random_disk_point(rng, 0.999), w2 = random_disk_point(rng, 0.999);
        e1 = std::max(e1, std::abs(solve(g1, r1, w1).z - closed_form_ex1(r1, w1)));
        e2 = std::max(e2, std::abs(solve(g2, r2, w2).z - closed_form_ex2(r2, w2)));
    }
    const double secs = seconds_since(t0);
    Detail d;
    d << "max |solve - closed form| z/(1-z): " << e1 << ", z(1-z): " << e2 << " over 1000 points each, " << secs << " s";
    return {e1 < 1e-10 && e2 < 1e-10 && secs < 5.0, d.str()};
}

Outcome starlike_order_example() {
    const GeneratorSpec g = builtin_generator("ex1");
    const double at1 = check_starlike_half(g, 1.0).worst_value;
    const double expected = 0.5 + 0.5 * std::sqrt(1.0 / 5.0);
    const double small = check_starlike_half(g, 1e-3).worst_value;
    Detail d;
    d << "r=1 min " << at1 << " (expected " << expected << "), r=1e-3 min " << small << " (expected 0.5)";
    return {std::abs(at1 - expected) < 1e-2 && std::abs(small - 0.5) < 2e-2, d.str()};
}

Outcome theorem_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double min_nw = HUGE_VAL, min_star = HUGE_VAL, min_ms = HUGE_VAL, max_incl = -HUGE_VAL;
    double violations = 0.0;
    std::string first_failure;
    for (const char* name : {"ex1", "ex2", "half"}) {
        const GeneratorSpec g = builtin_generator(name);
        double previous_r = 0.0;
        for (double r : {0.1, 0.6, 1.0, 2.0}) {
            const PropertyReport nw = check_NW(g, r);
            const PropertyReport st = check_starlike_half(g, r);
            const PropertyReport ms = check_marx_strohhacker(g, r);
            const PropertyReport in = check_inclusion_chain(g, previous_r, r);
            const PropertyReport cv = check_hyperbolic_convexity(g, r, 10000);
            min_nw = std::min(min_nw, nw.worst_value);
            min_star = std::min(min_star, st.worst_value);
            min_ms = std::min(min_ms, ms.worst_value);
            max_incl = std::max(max_incl, in.worst_value);
            violations += cv.extras.at("violations");
            const bool case_ok = nw.pass && nw.worst_value > 0.0 && st.pass && st.worst_value > 0.5 - 1e-6 &&
                                 ms.pass && in.worst_value <= 1e-12 && cv.pass;
            if (!case_ok && first_failure.empty()) first_failure = std::string(name) + " r=" + std::to_string(r);
            ok = ok && case_ok;
            previous_r = r;
        }
    }
    const double secs = seconds_since(t0);
    Detail d;
    d << "min Re J' " << min_nw << ", min starlike " << min_star << ", min MS margin " << min_ms
      << ", max inclusion " << max_incl << ", convexity violations " << violations << ", " << secs << " s";
    if (!first_failure.empty()) d << ", first failure " << first_failure;
    return {ok && secs < 60.0, d.str()};
}

Outcome boundary_theorem() {
    const GeneratorSpec g = builtin_generator("ex2");
    const auto jr = [&g](double r) -> ComplexFn { return [&g, r](cplx w) { return solve(g, r, w).z; }; };
    bool ok = true;
    Detail d;
    for (double r : {0.2, 0.6, 0.9}) {
        const RadialLimit dv = angular_derivative(jr(r), 1.0, 1.0);
        const double expected = 1.0 / (1.0 - r);
        const double rel = dv.value ? std::abs(*dv.value - expected) / expected : HUGE_VAL;
        ok = ok && rel < 1e-3;
        d << "r=" << r << " rel err " << rel << "; ";
    }
    const bool divergent = !angular_derivative(jr(1.0), 1.0, 1.0).value;
    ok = ok && divergent;
    d << "r=1 " << (divergent ? "divergent" : "finite") << "; ";
    for (double r : {1.1, 2.0}) {
        const RadialLimit lim = angular_limit(jr(r), 1.0);
        const double err = lim.value ? std::abs(*lim.value - 1.0 / r) : HUGE_VAL;
        ok = ok && err < 1e-6;
        d << "r=" << r << " |lim - 1/r| " << err << (r < 2.0 ? "; " : "");
    }
    return {ok, d.str()};
}

Outcome exponential_formula_rate() {
    const GeneratorSpec id = builtin_generator("identity");
    bool ok = true;
    Detail d;
    d << "ratios";
    double previous = exponential_formula(id, 0.5, 1.0, 64).error;
    for (int n = 128; n <= 1024; n *= 2) {
        const double err = exponential_formula(id, 0.5, 1.0, n).error;
        const double ratio = err / previous;
        ok = ok && ratio >= 0.45 && ratio <= 0.55;
        d << " " << ratio;
        previous = err;
    }
    const double ex2 = exponential_formula(builtin_generator("ex2"), 0.5, 1.0, 1024).error;
    ok = ok && ex2 < 1e-3;
    d << "; z(1-z) error at n=1024 " << ex2;
    return {ok, d.str()};
}

Outcome loewner_suite() {
    const std::vector<double> sweep{0.1, 0.6, 1.0, 2.0, 10.0};
    bool ok = true;
    double min_re_p = HUGE_VAL, div = 0.0, pde = 0.0, chain = 0.0, worst_ratio = HUGE_VAL;
    for (const auto name : builtin_generator_names()) {
        const GeneratorSpec g = builtin_generator(name);
        const PropertyReport pos = herglotz_positivity(g, sweep);
        ok = ok && pos.pass;
        min_re_p = std::min(min_re_p, pos.worst_value);
        for (double T : {1.0, 10.0, 100.0}) {
            const DivergenceIntegral di = divergence_integral(g, T);
            div = std::max(div, std::abs(di.numeric - di.exact));
            chain = std::max(chain, chain_derivative_identity(g, T));
        }
        for (double r : {0.6, 2.0})
            for (cplx w : {cplx{0.3, 0.0}, cplx{0.3, 0.4}, cplx{-0.5, -0.2}}) {
                pde = std::max(pde, pde_residual(g, r, w, 1e-4));
                const double a = pde_residual(g, r, w, 1e-3);
                const double b = pde_residual(g, r, w, 5e-4);
                const double c = pde_residual(g, r, w, 2.5e-4);
                // Second-order decay: each halving of h divides the residual by about 4.
                if (a > 1e-12) worst_ratio = std::min({worst_ratio, a / b, b / c});
            }
    }
    ok = ok && div < 1e-8 && pde < 1e-6 && chain < 1e-8 && worst_ratio > 3.0;
    Detail d;
    d << "min Re p " << min_re_p << ", divergence defect " << div << ", PDE residual " << pde
      << ", smallest halving ratio " << worst_ratio << ", chain defect " << chain;
    return {ok, d.str()};
}

Outcome squeezing() {
    const GeneratorSpec g = builtin_generator("half");
    const std::vector<cplx> pts = DiskGrid::standard().points();
    std::vector<double> excess(pts.size(), -HUGE_VAL);
    parallel_for(pts.size(), [&](std::size_t i) {
        for (double t : {0.5, 1.0, 2.0})
            excess[i] = std::max(excess[i], std::abs(flow(g, pts[i], t)) - std::abs(pts[i]) * std::exp(-t / 2.0));
    });
    const double worst = *std::max_element(excess.begin(), excess.end());
    const bool constant_ok = std::abs(nw_squeezing_constant - (2.0 * std::log(2.0) - 1.0)) < 1e-15 &&
                             std::abs(nw_squeezing_constant - 0.386) < 1e-3;
    Detail d;
    d << "max |F_t(z)| - |z| e^{-t/2} = " << worst << " over " << pts.size() << " points x 3 times; constant "
      << nw_squeezing_constant;
    return {worst <= 1e-8 && constant_ok, d.str()};
}

Outcome qc_bound() {
    const GeneratorSpec g = builtin_generator("half");
    const SectorReport s = sector_report(g, {0.1, 0.6, 1.0, 2.0, 10.0});
    bool ok = std::abs(s.alpha_hat - 1.0 / 3.0) < 1e-3 && s.k && std::abs(*s.k - 0.5) < 1e-3 &&
              s.sup_arg_p <= pi / 6 + 1e-6 && s.p_sector_ok;
    Detail d;
    d << "alpha_hat " << s.alpha_hat << ", k " << (s.k ? *s.k : -1.0) << ", sup|arg p| " << s.sup_arg_p
      << " (bound " << pi / 6 << "); lens";
    for (double alpha : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
        const PropertyReport lens = lens_inclusion_check(alpha, 10000);
        ok = ok && lens.pass && lens.samples >= 10000;
        d << " " << (lens.pass ? "ok" : "FAIL");
    }
    return {ok, d.str()};
}

Outcome bfid() {
    const GeneratorSpec g = builtin_generator("ex2");
    const double v = std::abs(bfid_resolvent(g, -0.5, 0.3).z - (std::sqrt(0.85) - 0.5));
    const double dv = std::abs(bfid_derivative(g, -0.5, 0.0) - 2.0);
    const double far = std::abs(bfid_resolvent(g, -1000.0, 0.3).z - 1.0);
    const BfidRegion reg = bfid_region_check(g, -1.0);
    Detail d;
    d << "value err " << v << ", derivative err " << dv << ", |J_{-1000}(0.3) - 1| " << far
      << ", min margin of J_{-1}(Omega) " << reg.report.worst_value << " on " << reg.report.samples << " samples";
    return {v < 1e-10 && dv < 1e-8 && far < 1e-2 && reg.report.pass && reg.report.samples >= 1000, d.str()};
}

std::vector<cplx> read_curve(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    std::vector<cplx> pts;
    if (!std::getline(in, line) || line != "theta,re,im") return pts;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string theta, re, im;
        std::getline(row, theta, ',');
        std::getline(row, re, ',');
        std::getline(row, im, ',');
        pts.emplace_back(std::stod(re), std::stod(im));
    }
    return pts;
}

/// Winding number of a closed polygon around p.
int polygon_winding(const std::vector<cplx>& poly, cplx p) {
    double total = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        total += std::arg((poly[(i + 1) % poly.size()] - p) / (poly[i] - p));
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

double distance_to(const std::vector<cplx>& pts, cplx target) {
    double best = HUGE_VAL;
    for (cplx z : pts) best = std::min(best, std::abs(z - target));
    return best;
}

Outcome figures_regression() {
    const std::filesystem::path dir = std::filesystem::current_path() / "acceptance_figures";
    std::filesystem::remove_all(dir);
    const std::string cmd = std::string("\"") + RESOLVENT_LAB_CLI + "\" figures --out \"" + dir.string() + "\" > \"" +
                            (dir.string() + ".json") + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "figures command failed"};

    const double eps = 1e-4;
    const auto c06 = read_curve(dir / "fig1_r0.6.csv");
    const auto c1 = read_curve(dir / "fig1_r1.csv");
    const auto c11 = read_curve(dir / "fig1_r1.1.csv");
    const auto omega = read_curve(dir / "fig2_omega.csv");
    const auto image = read_curve(dir / "fig2_image.csv");
    if (c06.size() < 512 || c1.size() < 512 || c11.size() < 512 || omega.empty() || image.empty())
        return {false, "missing or short curve files"};
    for (const char* svg : {"fig1_r0.6.svg", "fig1_r1.svg", "fig1_r1.1.svg", "fig2.svg"}) {
        std::ifstream in(dir / svg);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (text.find("<svg") == std::string::npos || text.find("<circle") == std::string::npos)
            return {false, std::string("malformed ") + svg};
    }

    const double d06 = distance_to(c06, 1.0), d1 = distance_to(c1, 1.0), d11 = distance_to(c11, 1.0);
    const double gap = 1.0 - 1.0 / 1.1;
    bool ok = d06 < 1e-3 && d1 <= 2.0 * std::sqrt(eps) && std::abs(d11 - gap) <= 0.05 * gap;

    // Nesting: every vertex of an inner curve lies inside the next outer one.
    int outside = 0;
    for (cplx z : c11) outside += polygon_winding(c1, z) != 1;
    for (cplx z : c1) outside += polygon_winding(c06, z) != 1;
    ok = ok && outside == 0;

    const Bfid disk;
    double worst_margin = HUGE_VAL, worst_modulus = 0.0;
    for (cplx z : image) {
        worst_margin = std::min(worst_margin, disk.margin(z));
        worst_modulus = std::max(worst_modulus, std::abs(z));
    }
    ok = ok && worst_margin >= -1e-12 && worst_modulus <= 1.0;
    // The image is a proper subset: its interior contains the centre yet not all of Omega.
    ok = ok && polygon_winding(image, cplx{0.5, 0.0}) == 1 && polygon_winding(image, cplx{0.5, 0.45}) == 0;

    Detail d;
    d << "distance to 1: r=0.6 " << d06 << ", r=1 " << d1 << ", r=1.1 " << d11 << " (1-1/1.1 = " << gap
      << "); nesting misses " << outside << "; fig2 min margin " << worst_margin;
    return {ok, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 oracle agreement", oracle_agreement},
        {"AC2 starlike order of z/(1-z) resolvent", starlike_order_example},
        {"AC3 geometry sweep", theorem_suite},
        {"AC4 boundary fixed point of z(1-z) resolvent", boundary_theorem},
        {"AC5 exponential formula", exponential_formula_rate},
        {"AC6 Loewner chain", loewner_suite},
        {"AC7 squeezing", squeezing},
        {"AC8 quasiconformal bound", qc_bound},
        {"AC9 backward flow invariant domain", bfid},
        {"AC10 figures regression", figures_regression},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
