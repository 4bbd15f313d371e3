#include "doctest.h"
#include "sampcr/experiments.hpp"
#include "sampcr/rng.hpp"

#include <cmath>
#include <sstream>

using namespace sampcr;
using namespace sampcr::experiments;

TEST_CASE("period CSV parsing") {
    std::istringstream ok("period,type1_count,type2_count\n1,40,60\n2,8,12\n\n3,0,5\n");
    auto recs = parse_period_csv(ok);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].period_id == 1);
    CHECK(recs[0].counts == Counts{40, 60});
    CHECK(recs[2].counts == Counts{0, 5});

    auto expect_line = [](const std::string& text, long long line) {
        std::istringstream in(text);
        try {
            parse_period_csv(in);
            FAIL_CHECK("expected IngestError for: " << text);
        } catch (const IngestError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_line("period,wrong,type2_count\n1,2,3\n", 1);
    expect_line("period,type1_count,type2_count\n1,2\n", 2);
    expect_line("period,type1_count,type2_count\n1,2,3,4\n", 2);
    expect_line("period,type1_count,type2_count\n1,2,3\n1,4,5\n", 3);
    expect_line("period,type1_count,type2_count\n1,-2,3\n", 2);
    expect_line("period,type1_count,type2_count\n1,2,abc\n", 2);

    // CRLF line endings are fine
    std::istringstream crlf("period,type1_count,type2_count\r\n1,4,6\r\n");
    CHECK(parse_period_csv(crlf).size() == 1);

    CHECK_THROWS_AS(load_period_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("noisy probability draw") {
    std::mt19937_64 rng(99);
    const double p = 0.1, w = 0.3 * p * std::sqrt(3.0);
    double mean = 0.0, var = 0.0;
    const int reps = 200000;
    for (int i = 0; i < reps; ++i) {
        bool clamped = true;
        double v = noisy_p_draw(p, rng, &clamped);
        CHECK_FALSE(clamped);  // p=0.1 support stays inside (0,1)
        CHECK(v >= p - w - 1e-12);
        CHECK(v <= p + w + 1e-12);
        mean += v;
        var += (v - p) * (v - p);
    }
    mean /= reps;
    var /= reps;
    CHECK(mean == doctest::Approx(p).epsilon(0.005));
    CHECK(std::sqrt(var) == doctest::Approx(0.3 * p).epsilon(0.02));

    // near the boundary the draw clamps
    bool saw_clamp = false;
    for (int i = 0; i < 1000; ++i) {
        bool c = false;
        double v = noisy_p_draw(0.9, rng, &c);
        CHECK(v < 1.0);
        saw_clamp = saw_clamp || c;
    }
    CHECK(saw_clamp);
}

TEST_CASE("case study on a tiny series") {
    std::vector<PeriodRecord> recs = {
        {1, Counts{6, 9}}, {2, Counts{8, 12}}, {3, Counts{4, 6}}};
    CaseStudyConfig cfg;
    cfg.p = 0.2;
    cfg.gamma = 0.4;
    cfg.trials = 200;
    cfg.seed = 123;
    auto rep = case_study_run(recs, cfg);
    // the first record only seeds capacity; the rest are evaluated
    REQUIRE(rep.periods.size() == 2);
    CHECK(rep.periods[0].m == doctest::Approx(6.0));  // 0.4 * 15
    CHECK(rep.periods[1].m == doctest::Approx(8.0));
    for (const auto& pr : rep.periods) {
        for (double v : {pr.alg1, pr.benchmark, pr.adaptive, pr.noisy}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-12);
        }
    }
    CHECK(rep.alg1.worst_cr <= rep.alg1.avg_cr + 1e-12);

    // deterministic under the same seed
    auto rep2 = case_study_run(recs, cfg);
    for (std::size_t i = 0; i < rep.periods.size(); ++i) {
        CHECK(rep.periods[i].alg1 == rep2.periods[i].alg1);
        CHECK(rep.periods[i].noisy == rep2.periods[i].noisy);
    }

    // empty market period and a period after zero demand both degrade to CR 1
    std::vector<PeriodRecord> with_zero = {
        {1, Counts{5, 5}}, {2, Counts{0, 0}}, {3, Counts{4, 4}}};
    auto repz = case_study_run(with_zero, cfg);
    REQUIRE(repz.periods.size() == 2);
    CHECK(repz.periods[0].alg1 == doctest::Approx(1.0));
    CHECK(repz.periods[1].alg1 == doctest::Approx(1.0));
    CHECK(repz.periods[1].m == 0.0);
}

TEST_CASE("capacity sweep reproduces the mid-scale crossing") {
    SweepConfig cfg;
    cfg.m_values = {10.0, 35.0};
    cfg.p_values = {0.3};
    cfg.r1 = 0.9;
    cfg.r2_lo = 0.69;
    cfg.r2_hi = 0.71;
    cfg.instances = 4;
    cfg.seed = 7;
    auto rows = sweep_example1(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].m == 10.0);
    CHECK(rows[0].mean_exact_cr < rows[0].mean_benchmark);  // small m: baseline wins
    CHECK(rows[1].mean_exact_cr > rows[1].mean_benchmark);  // m=35: sampling wins
    for (const auto& r : rows) {
        CHECK(r.mean_exact_cr > 0.0);
        CHECK(r.mean_exact_cr <= 1.0);
        CHECK(r.mean_bound <= r.mean_exact_cr + 1e-9);
    }
}

TEST_CASE("robustness to misreported probability") {
    CHECK(robustness_ratio(0.3, 0.0, 10.0, 0.9, 0.5, 0, 5) == doctest::Approx(0.0));
    auto rep = robustness_report(0.3, 0.15, 10.0, 0.9, 0.5, 0, 7);
    CHECK(rep.base_cr > 0.0);
    CHECK(rep.points.size() == 7);
    CHECK(rep.ratio >= 0.0);
    // truthful midpoint appears exactly
    bool has_mid = false;
    for (auto& [ph, cr] : rep.points)
        if (ph == 0.3) {
            has_mid = true;
            CHECK(cr == doctest::Approx(rep.base_cr));
        }
    CHECK(has_mid);
    // widening the interval can only worsen the ratio
    auto narrow = robustness_ratio(0.3, 0.05, 10.0, 0.9, 0.5, 0, 7);
    CHECK(narrow <= rep.ratio + 1e-12);
}

TEST_CASE("three-type pipeline smoke run") {
    KTypeConfig cfg;
    cfg.m_values = {4.0};
    cfg.p = 0.3;
    cfg.instances = 3;
    cfg.orders = 3;
    cfg.trials_per_order = 20;
    cfg.seed = 5;
    auto rows = example3_ktype(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_cr > 0.0);
    CHECK(rows[0].mean_cr <= 1.0 + 1e-12);
    CHECK(rows[0].mean_benchmark > 0.0);
    auto rows2 = example3_ktype(cfg);
    CHECK(rows[0].mean_cr == rows2[0].mean_cr);
}

TEST_CASE("seed splitting") {
    CHECK(subseed(1, 0) != subseed(1, 1));
    CHECK(subseed(1, 0) != subseed(2, 0));
    auto a = substream(42, 3), b = substream(42, 3), c = substream(42, 4);
    CHECK(a() == b());
    CHECK(a() != c());
}
