#include <catch_amalgamated.hpp>

#include <resolvent_lab/boundary.hpp>

using namespace reslab;
using Catch::Matchers::WithinAbs;

TEST_CASE("boundary null point of z(1-z)") {
    const BoundaryPointAnalysis a = analyze_boundary_point(builtin_generator("ex2"), 1.0);
    CHECK(a.is_brnp);
    REQUIRE(a.f_angular_deriv);
    CHECK(std::abs(*a.f_angular_deriv + 1.0) < 1e-6);
    REQUIRE(a.r_threshold);
    CHECK_THAT(*a.r_threshold, WithinAbs(1.0, 1e-6));

    const BoundaryPointAnalysis other = analyze_boundary_point(builtin_generator("ex2"), -1.0);
    CHECK_FALSE(other.is_brnp);
    const BoundaryPointAnalysis id = analyze_boundary_point(builtin_generator("identity"), 1.0);
    CHECK_FALSE(id.is_brnp);
}

TEST_CASE("classification of boundary regular fixed points") {
    const GeneratorSpec g = builtin_generator("ex2");
    const BrfpClassification below = classify_brfp(g, 0.6, 1.0);
    CHECK(below.predicted);
    CHECK(below.observed);
    CHECK(below.agree);
    REQUIRE(below.predicted_deriv);
    CHECK(std::abs(*below.predicted_deriv - 2.5) < 1e-5);

    const BrfpClassification above = classify_brfp(g, 1.1, 1.0);
    CHECK_FALSE(above.predicted);
    CHECK_FALSE(above.observed);
    CHECK(above.agree);
    REQUIRE(above.observed_limit);
    CHECK(std::abs(*above.observed_limit - 1.0 / 1.1) < 1e-6);

    const BrfpClassification critical = classify_brfp(g, 1.0, 1.0);
    CHECK(critical.inconclusive);

    const BrfpClassification id = classify_brfp(builtin_generator("identity"), 0.7, 1.0);
    CHECK_FALSE(id.predicted);
    CHECK(id.agree);
}

TEST_CASE("angular derivative of J_r at 1 follows 1/(1-r)") {
    const GeneratorSpec g = builtin_generator("ex2");
    for (int k = 1; k <= 9; ++k) {
        const double r = 0.1 * k;
        const BrfpClassification c = classify_brfp(g, r, 1.0);
        INFO("r=" << r);
        REQUIRE(c.observed_deriv);
        CHECK(std::abs(*c.observed_deriv - 1.0 / (1.0 - r)) < 1e-3 / (1.0 - r));
    }
    for (double r : {1.1, 2.0}) {
        const BrfpClassification c = classify_brfp(g, r, 1.0);
        REQUIRE(c.observed_limit);
        CHECK(std::abs(*c.observed_limit - 1.0 / r) < 1e-6);
        CHECK(std::abs(*c.observed_limit - 1.0) >= 0.5 * (1.0 - 1.0 / r));
    }
}

TEST_CASE("negative-r resolvent on the BFID") {
    const GeneratorSpec g = builtin_generator("ex2");
    const ResolventSolve zero = bfid_resolvent(g, -0.5, 0.0);
    CHECK(zero.z == cplx{});
    CHECK(std::abs(bfid_derivative(g, -0.5, 0.0) - 2.0) < 1e-12);
    CHECK_THAT(bfid_resolvent(g, -0.5, 0.3).z.real(), WithinAbs(std::sqrt(0.85) - 0.5, 1e-12));
    CHECK(std::abs(bfid_resolvent(g, -0.5, 0.3).z - closed_form_ex2(-0.5, 0.3)) < 1e-12);
    CHECK(std::abs(bfid_resolvent(g, -1000.0, 0.3).z - 1.0) < 1e-2);
    // J_{-1}(w) = sqrt(w) on the BFID.
    for (cplx w : {cplx{0.3, 0.1}, cplx{0.8, -0.3}})
        CHECK(std::abs(bfid_resolvent(g, -1.0, w).z - std::sqrt(w)) < 1e-12);

    CHECK_THROWS_AS(bfid_resolvent(g, -0.5, cplx{-0.2, 0.0}), domain_error);
    CHECK_THROWS_AS(bfid_resolvent(g, 0.5, 0.3), contract_error);
    CHECK_THROWS_AS(bfid_resolvent(builtin_generator("ex1"), -0.5, 0.3), contract_error);
}

TEST_CASE("BFID resolvent residuals") {
    const GeneratorSpec g = builtin_generator("ex2");
    const Bfid omega;
    for (double r : {-0.25, -0.5, -1.0}) {
        double worst = 0.0;
        for (int i = 1; i <= 10; ++i)
            for (int j = 0; j < 24; ++j) {
                const cplx w = omega.center + std::polar(omega.radius * 0.999 * i / 10, 2.0 * pi * j / 24);
                const cplx z = bfid_resolvent(g, r, w).z;
                worst = std::max(worst, std::abs(z + r * g(z) - w));
                CHECK(omega.contains_closure(z));
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("BFID invariance") {
    const GeneratorSpec g = builtin_generator("ex2");
    const BfidRegion reg = bfid_region_check(g, -1.0);
    CHECK(reg.report.pass);
    CHECK(reg.report.samples == 1000);
    REQUIRE(reg.image_boundary.size() == 512);
    for (cplx z : reg.image_boundary) CHECK(Bfid{}.margin(z) >= -1e-12);

    const BfidRegion small = bfid_region_check(g, -1e-6, 64);
    for (std::size_t i = 0; i < small.image_boundary.size(); ++i)
        CHECK(std::abs(small.image_boundary[i] - small.omega_boundary[i]) < 1e-5);
    CHECK_THROWS_AS(bfid_region_check(g, -2.0), contract_error);
    CHECK_THROWS_AS(bfid_region_check(g, 0.0), contract_error);
}
