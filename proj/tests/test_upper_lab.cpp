#include "doctest.h"
#include "oracle_support.hpp"
#include "sampcr/model.hpp"
#include "sampcr/upper_lab.hpp"

#include <cmath>

using namespace sampcr;
using namespace sampcr::upper_lab;

TEST_CASE("loss examples") {
    // underprotection: shortfall at r1, partially refunded by extra r2 sales
    CHECK(loss(5.0, 3.0, 0.9, 0.5) == doctest::Approx(0.8));
    // overprotection: reserved units displace type-2 sales
    CHECK(loss(1.0, 3.0, 0.9, 0.5) == doctest::Approx(2.0 * 0.5));
    CHECK(loss(3.0, 3.0, 0.9, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("loss upper-bounds the policy gap under unlimited low-type supply") {
    auto inst = ProblemInstance::two_type(10.0, 0.3, 0.9, 0.5);
    for (double z = 0.0; z <= 10.0; z += 1.0) {
        for (long long n1 = 0; n1 <= 10; ++n1) {
            auto out =
                protection_outcome_ordered(static_cast<double>(n1), 10000.0, 0, z, inst);
            double opt =
                std::min(static_cast<double>(n1), 10.0) * 0.9 +
                (10.0 - std::min(static_cast<double>(n1), 10.0)) * 0.5;
            double gap = opt - out.expected_reward;
            CHECK(gap <= loss(static_cast<double>(n1), z, 0.9, 0.5) + 1e-12);
        }
    }
}

TEST_CASE("balanced mapping and families") {
    CHECK(zstar(6.0, 0.3) == doctest::Approx(14.0));
    auto fam = FamilyF::deterministic(100.0, 0.3);
    CHECK(fam.h_lo == 0.0);
    CHECK(fam.h_hi == doctest::Approx(30.0));
    auto famr = FamilyF::randomized(100.0, 0.3);
    CHECK(famr.h_lo == doctest::Approx(15.0));
    CHECK(famr.h_hi == doctest::Approx(30.0));
    auto zm = zstar_mapping(100.0, 0.3, fam);
    CHECK(zm.at(0) == 0.0);
    CHECK(zm.at(6) == doctest::Approx(14.0));
    for (double v : zm.z) {
        CHECK(v >= 0.0);
        CHECK(v <= 100.0);
    }
}

TEST_CASE("family CR brute-force check for the constant-zero mapping") {
    // z == 0 accepts greedily; worst h maximizes the expected shortfall
    const double m = 30.0, p = 0.4, r1 = 0.9, r2 = 0.5;
    FamilyF fam{0.0, 10.0, 0.0};
    MappingPolicy zero;
    zero.z.assign(11, 0.0);
    auto res = family_f_cr(zero, m, p, r1, r2, fam);
    double worst = 0.0;
    long long worst_h = 0;
    for (long long h = 0; h <= 10; ++h) {
        double e = 0.0;
        for (long long s1 = 0; s1 <= h; ++s1) {
            double n1 = static_cast<double>(h - s1);
            double cap1 = std::min(n1, m);
            double opt = cap1 * r1 + (m - cap1) * r2;
            e += oracle::pmf(h, s1, p) * loss(n1, 0.0, r1, r2) / opt;
        }
        if (e > worst) {
            worst = e;
            worst_h = h;
        }
    }
    CHECK(res.max_ratio == doctest::Approx(worst).epsilon(1e-12));
    CHECK(res.worst_h == worst_h);
    CHECK(res.cr == doctest::Approx(1.0 - worst).epsilon(1e-12));
}

TEST_CASE("degenerate family") {
    // single market size h=0: the sample is empty, n1 = 0, loss of z == 0 is 0
    FamilyF fam{0.0, 0.0, 0.0};
    MappingPolicy zero;
    zero.z.assign(1, 0.0);
    auto res = family_f_cr(zero, 8.0, 0.3, 0.9, 0.5, fam);
    CHECK(res.cr == doctest::Approx(1.0));
    CHECK(res.max_ratio == doctest::Approx(0.0));
}

TEST_CASE("sandwich around the balanced mapping") {
    for (double m : {64.0, 256.0}) {
        for (double p : {0.3, 0.5}) {
            auto fam = FamilyF::deterministic(m, p);
            double lo_exact = surrogate_max_r1(m, p, 0.9, 0.5, fam);
            double hi_exact = surrogate_max_r2(m, p, 0.9, 0.5, fam);
            auto zb = specific_z_bounds(m, p, 0.9, 0.5);
            CHECK(lo_exact >= zb.lower - 1e-9);
            CHECK(hi_exact <= zb.upper + 1e-9);
            CHECK(zb.lower <= zb.upper);
        }
    }
}

TEST_CASE("searched mapping dominates the balanced one") {
    for (double m : {16.0, 48.0}) {
        auto fam = FamilyF::deterministic(m, 0.3);
        auto base = family_f_cr(zstar_mapping(m, 0.3, fam), m, 0.3, 0.9, 0.5, fam);
        auto best = best_tabulated_mapping(m, 0.3, 0.9, 0.5, fam, 25);
        auto bres = family_f_cr(best, m, 0.3, 0.9, 0.5, fam);
        CHECK(bres.cr >= base.cr - 1e-12);
        for (double v : best.z) {
            CHECK(v >= 0.0);
            CHECK(v <= m + 1e-12);
        }
    }
}
