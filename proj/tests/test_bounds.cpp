#include "doctest.h"
#include "sampcr/bounds.hpp"
#include "sampcr/cr_engine.hpp"
#include "sampcr/model.hpp"

#include <cmath>

using namespace sampcr;
using namespace sampcr::bounds;

TEST_CASE("beta constant") {
    auto c = constants(100.0, 0.5, 0.9, 0.5);
    CHECK(c.beta == doctest::Approx(0.843).epsilon(1e-12));
    auto c3 = constants(100.0, 0.3, 0.9, 0.5);
    CHECK(c3.beta == doctest::Approx(0.4215 * (0.09 + 0.49) / 0.21).epsilon(1e-12));
}

TEST_CASE("threshold searches satisfy their defining inequalities") {
    for (double m : {20.0, 50.0, 100.0}) {
        for (double p : {0.2, 0.3, 0.5}) {
            auto c = constants(m, p, 0.9, 0.5);

            // h0: root of y*p - sqrt(y) = p(m - sqrt(m))/(1-p)
            double rhs = p * (m - std::sqrt(m)) / (1.0 - p);
            auto g = [&](double y) { return y * p - std::sqrt(y) - rhs; };
            CHECK(std::abs(g(c.h0)) < 1e-6 * (1.0 + std::abs(rhs)));
            CHECK(c.h0 == doctest::Approx(c.h0_closed_form).epsilon(1e-6));

            // ell0: smallest integer with (1-p)y - sqrt(y) >= m
            double e0 = c.ell0;
            CHECK((1.0 - p) * e0 - std::sqrt(e0) >= m);
            CHECK((1.0 - p) * (e0 - 1.0) - std::sqrt(e0 - 1.0) < m);
            CHECK(e0 == std::floor(e0));

            // m1: first y >= 1/p^4 where the gap clears the detection term
            double gap = 0.4;
            auto detect = [&](double y) {
                double t = std::pow(y, 0.25) * p - 1.0;
                return t > 0.0 && gap > 2.0 / (std::pow(y, 0.125) * std::sqrt(t));
            };
            CHECK(detect(c.m1));
            CHECK_FALSE(detect(c.m1 * (1.0 - 1e-6)));
        }
    }
}

TEST_CASE("thresholds grow with market scale") {
    double prev_h0 = 0.0, prev_ell0 = 0.0;
    for (double m : {10.0, 40.0, 160.0, 640.0}) {
        auto c = constants(m, 0.3, 0.9, 0.5);
        CHECK(c.h0 > prev_h0);
        CHECK(c.ell0 > prev_ell0);
        prev_h0 = c.h0;
        prev_ell0 = c.ell0;
        CHECK(c.W >= 0.0);
        CHECK(c.W <= 1.0);
        CHECK(c.V <= 1.0);
        CHECK(c.alpha == doctest::Approx(0.5 / 0.9));
    }
}

TEST_CASE("lower-bound components and regimes") {
    auto b = theorem2_bound(100.0, 0.5, 0.9, 0.5);
    CHECK(b.overall >= 0.0);
    CHECK(b.overall <= 1.0);
    CHECK(b.cr1 <= 1.0);
    CHECK(b.cr2 <= 1.0);
    CHECK(b.overall <= b.cr1 + 1e-15);
    CHECK(b.overall <= b.cr2 + 1e-15);

    // sqrt(m) * p <= m^(1/4) collapses the large-capacity component
    auto deg = theorem2_bound(16.0, 0.5, 0.9, 0.5);
    CHECK(deg.cr3_over_degenerate);
    CHECK(deg.cr3_over == 0.0);
    auto nondeg = theorem2_bound(10000.0, 0.5, 0.9, 0.5);
    CHECK_FALSE(nondeg.cr3_over_degenerate);
    CHECK(nondeg.cr3_over > 0.0);
}

TEST_CASE("lower bound never exceeds the exact ratio") {
    for (double m : {10.0, 20.0}) {
        auto inst = ProblemInstance::two_type(m, 0.3, 0.9, 0.5);
        auto rep = cr_engine::exact_cr(inst, cr_engine::default_grid_bound(inst),
                                       cr_engine::default_grid_bound(inst), false);
        auto b = theorem2_bound(m, 0.3, 0.9, 0.5);
        CHECK(b.overall <= rep.infimum + 1e-9);
    }
}

TEST_CASE("baseline ceiling") {
    CHECK(benchmark_bound({0.9, 0.5}) == doctest::Approx(9.0 / 13.0));
    CHECK(benchmark_bound({0.9, 0.6, 0.2}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(benchmark_bound({0.9}), std::invalid_argument);
}

TEST_CASE("small-probability ceiling") {
    auto u = smallp_upper_bound(30.0, 0.1, 0.5 / 0.9);
    CHECK(u.h_tilde == 2);
    CHECK(u.h_tilde_alt == 10);
    double expect = 30.0 / (30.0 + 2.0 * (1.0 - 0.5 / 0.9)) + 0.25;
    CHECK(u.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(u.value_alt < u.value);  // larger test phase tightens the ceiling

    // even at large p the literal threshold needs two agents (h=1 gives p < 1)
    auto u2 = smallp_upper_bound(30.0, 0.9, 0.5);
    CHECK(u2.h_tilde == 2);
    CHECK(u2.h_tilde_alt == 1);
}

TEST_CASE("rate diagnostics") {
    auto a = asymptotic_forms(400.0, 0.5, {0.9, 0.5});
    CHECK(a.alg1_cr == doctest::Approx(1.0 - 1.0 / (0.5 * 20.0)));
    CHECK(a.realized_cr_ceiling == doctest::Approx(0.5));
    std::vector<double> pv{0.5, 0.2};
    auto h = asymptotic_forms(400.0, 0.5, {0.9, 0.5}, &pv);
    CHECK(h.hetero_cr <= a.alg1_cr + 1e-12);
}
