#include "sampcr/experiments.hpp"

#include "sampcr/algorithms.hpp"
#include "sampcr/bounds.hpp"
#include "sampcr/cr_engine.hpp"
#include "sampcr/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace sampcr::experiments {

namespace {

long long parse_count(const std::string& field, long long line) {
    long long v = 0;
    const char* b = field.data();
    const char* e = b + field.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        throw IngestError("malformed integer field '" + field + "'", line);
    if (v < 0) throw IngestError("negative count", line);
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

std::vector<PeriodRecord> parse_period_csv(std::istream& in) {
    std::string line;
    long long lineno = 0;
    if (!std::getline(in, line)) throw IngestError("empty input", 1);
    ++lineno;
    if (strip_cr(line) != "period,type1_count,type2_count")
        throw IngestError("bad header, expected 'period,type1_count,type2_count'", lineno);
    std::vector<PeriodRecord> records;
    long long prev_id = std::numeric_limits<long long>::min();
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 3)
            throw IngestError("expected 3 columns, got " + std::to_string(fields.size()),
                              lineno);
        PeriodRecord rec;
        rec.period_id = parse_count(fields[0], lineno);
        rec.counts = {parse_count(fields[1], lineno), parse_count(fields[2], lineno)};
        if (rec.period_id <= prev_id)
            throw IngestError("period ids must be strictly increasing", lineno);
        prev_id = rec.period_id;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<PeriodRecord> load_period_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_period_csv(in);
}

double noisy_p_draw(double p, std::mt19937_64& rng, bool* clamped) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    const double w = 0.3 * p * std::sqrt(3.0);
    std::uniform_real_distribution<double> unif(p - w, p + w);
    double v = unif(rng);
    bool cl = false;
    const double eps = 1e-12;
    if (v <= 0.0) {
        v = eps;
        cl = true;
    } else if (v >= 1.0) {
        v = 1.0 - eps;
        cl = true;
    }
    if (clamped) *clamped = cl;
    return v;
}

CaseStudyReport case_study_run(const std::vector<PeriodRecord>& records,
                               const CaseStudyConfig& cfg) {
    if (records.size() < 2) throw std::invalid_argument("need at least two periods");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0,1)");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");

    CaseStudyReport rep;
    for (size_t t = 1; t < records.size(); ++t) {
        const long long prev_total = records[t - 1].counts[0] + records[t - 1].counts[1];
        PeriodResult pr;
        pr.period_id = records[t].period_id;
        if (prev_total == 0) {
            // No resources to allocate: nothing can be lost.
            pr.m = 0.0;
            pr.alg1 = pr.benchmark = pr.adaptive = pr.noisy = 1.0;
            rep.periods.push_back(pr);
            continue;
        }
        double m = cfg.gamma * static_cast<double>(prev_total);
        if (m < 2.0) m = 2.0;
        pr.m = m;
        ProblemInstance inst = ProblemInstance::two_type(m, cfg.p, cfg.r1, cfg.r2);
        MarketSize size(records[t].counts[0], records[t].counts[1]);
        const double xstar = algorithms::benchmark_optimal_level(inst.alpha(), m);

        double min_a = 1.0, min_b = 1.0, min_ad = 1.0, min_n = 1.0;
        const std::uint64_t period_seed = subseed(cfg.seed, static_cast<std::uint64_t>(t));
        for (long long j = 0; j < cfg.trials; ++j) {
            std::mt19937_64 rng = substream(period_seed, static_cast<std::uint64_t>(j));
            auto [sample, residual] = sample_market(size, inst, rng);
            ArrivalSequence seq;
            for (size_t i = 0; i < residual.size(); ++i)
                seq.types.insert(seq.types.end(), static_cast<size_t>(residual[i]),
                                 static_cast<int>(i));
            std::shuffle(seq.types.begin(), seq.types.end(), rng);
            double opt = opt_expected(residual, inst);
            double ra = 1.0, rb = 1.0, rad = 1.0, rn = 1.0;
            if (opt > 0.0) {
                auto d = algorithms::alg1_decide(sample, inst, rng);
                ra = run_protection_policy(seq, d.protected_type(), d.protection_level(), inst)
                         .expected_reward /
                     opt;
                rb = algorithms::no_sample_benchmark_run(seq, inst, xstar, rng)
                         .expected_reward /
                     opt;
                rad = algorithms::adaptive_core(sample, seq, nullptr, inst, rng)
                          .outcome.expected_reward /
                      opt;
                double p_hat = noisy_p_draw(cfg.p, rng);
                auto dn = algorithms::alg1_decide_with_p(sample, inst, p_hat, rng);
                rn = run_protection_policy(seq, dn.protected_type(), dn.protection_level(),
                                           inst)
                         .expected_reward /
                     opt;
            }
            min_a = std::min(min_a, ra);
            min_b = std::min(min_b, rb);
            min_ad = std::min(min_ad, rad);
            min_n = std::min(min_n, rn);
        }
        pr.alg1 = min_a;
        pr.benchmark = min_b;
        pr.adaptive = min_ad;
        pr.noisy = min_n;
        rep.periods.push_back(pr);
    }

    auto finalize = [&](auto field) {
        AlgoStats s;
        s.worst_cr = 1.0;
        double sum = 0.0;
        for (const auto& pr : rep.periods) {
            double v = field(pr);
            sum += v;
            s.worst_cr = std::min(s.worst_cr, v);
        }
        s.avg_cr = sum / static_cast<double>(rep.periods.size());
        return s;
    };
    rep.alg1 = finalize([](const PeriodResult& r) { return r.alg1; });
    rep.benchmark = finalize([](const PeriodResult& r) { return r.benchmark; });
    rep.adaptive = finalize([](const PeriodResult& r) { return r.adaptive; });
    rep.noisy = finalize([](const PeriodResult& r) { return r.noisy; });
    return rep;
}

std::vector<SweepRow> sweep_example1(const SweepConfig& cfg) {
    if (cfg.m_values.empty() || cfg.p_values.empty())
        throw std::invalid_argument("value lists must be nonempty");
    if (cfg.instances < 1) throw std::invalid_argument("instances must be >= 1");
    std::vector<SweepRow> rows;
    std::uint64_t point_idx = 0;
    for (double m : cfg.m_values) {
        for (double p : cfg.p_values) {
            SweepRow row;
            row.m = m;
            row.p = p;
            double sum_cr = 0.0, sum_bound = 0.0, sum_bench = 0.0;
            for (long long i = 0; i < cfg.instances; ++i) {
                std::mt19937_64 rng =
                    substream(subseed(cfg.seed, point_idx), static_cast<std::uint64_t>(i));
                std::uniform_real_distribution<double> unif(cfg.r2_lo, cfg.r2_hi);
                double r2 = unif(rng);
                if (r2 >= cfg.r1) r2 = cfg.r1 - 1e-9;
                ProblemInstance inst = ProblemInstance::two_type(m, p, cfg.r1, r2);
                long long g = cfg.grid_bound > 0 ? cfg.grid_bound
                                                 : cr_engine::default_grid_bound(inst);
                sum_cr += cr_engine::exact_cr(inst, g, g, false).infimum;
                sum_bound += bounds::theorem2_bound(m, p, cfg.r1, r2).overall;
                sum_bench += bounds::benchmark_bound({cfg.r1, r2});
            }
            row.mean_exact_cr = sum_cr / static_cast<double>(cfg.instances);
            row.mean_bound = sum_bound / static_cast<double>(cfg.instances);
            row.mean_benchmark = sum_bench / static_cast<double>(cfg.instances);
            rows.push_back(row);
            ++point_idx;
        }
    }
    return rows;
}

RobustnessReport robustness_report(double p, double delta, double m, double r1, double r2,
                                   long long grid_bound, int phat_points) {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0,1)");
    if (phat_points < 3) throw std::invalid_argument("need at least 3 grid points");
    ProblemInstance inst = ProblemInstance::two_type(m, p, r1, r2);
    long long g = grid_bound > 0 ? grid_bound : cr_engine::default_grid_bound(inst);

    RobustnessReport rep;
    rep.base_cr =
        cr_engine::ExactEvaluator(inst, g, g).evaluate_grid(false).infimum;
    const double lo = p * (1.0 - delta), hi = p * (1.0 + delta);
    for (int i = 0; i < phat_points; ++i) {
        double ph = lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(phat_points - 1);
        if (phat_points % 2 == 1 && i == phat_points / 2) ph = p;  // exact midpoint
        double cr =
            cr_engine::ExactEvaluator(inst, g, g, ph).evaluate_grid(false).infimum;
        rep.points.emplace_back(ph, cr);
        rep.ratio = std::max(rep.ratio, (rep.base_cr - cr) / rep.base_cr);
    }
    return rep;
}

double robustness_ratio(double p, double delta, double m, double r1, double r2,
                        long long grid_bound, int phat_points) {
    return robustness_report(p, delta, m, r1, r2, grid_bound, phat_points).ratio;
}

std::vector<KTypeRow> example3_ktype(const KTypeConfig& cfg) {
    if (cfg.m_values.empty()) throw std::invalid_argument("value lists must be nonempty");
    if (cfg.instances < 1 || cfg.orders < 1 || cfg.trials_per_order < 1)
        throw std::invalid_argument("instances/orders/trials must be >= 1");
    std::vector<KTypeRow> rows;
    std::uint64_t point_idx = 0;
    for (double m : cfg.m_values) {
        KTypeRow row;
        row.m = m;
        double sum_cr = 0.0, sum_bench = 0.0;
        const long long mm = static_cast<long long>(std::llround(m));
        const std::vector<long long> levels = {0, mm / 2, mm, 2 * mm};
        for (long long i = 0; i < cfg.instances; ++i) {
            std::uint64_t inst_seed = subseed(subseed(cfg.seed, point_idx),
                                              static_cast<std::uint64_t>(i));
            std::mt19937_64 seeder = substream(inst_seed, 0);
            std::uniform_real_distribution<double> u2(cfg.r2_lo, cfg.r2_hi);
            std::uniform_real_distribution<double> u3(cfg.r3_lo, cfg.r3_hi);
            double r2 = u2(seeder), r3 = u3(seeder);
            if (r2 >= cfg.r1) r2 = cfg.r1 - 1e-9;
            if (r3 >= r2) r3 = r2 - 1e-9;
            ProblemInstance inst(m, cfg.p, {cfg.r1, r2, r3});

            double worst = 1.0;
            std::uint64_t combo_idx = 0;
            for (long long c1 : levels)
                for (long long c2 : levels)
                    for (long long c3 : levels) {
                        MarketSize size(Counts{c1, c2, c3});
                        for (long long o = 0; o < cfg.orders; ++o) {
                            std::mt19937_64 rng = substream(
                                subseed(inst_seed, 1 + combo_idx),
                                static_cast<std::uint64_t>(o));
                            double sum_ratio = 0.0;
                            for (long long tr = 0; tr < cfg.trials_per_order; ++tr) {
                                auto [sample, residual] = sample_market(size, inst, rng);
                                ArrivalSequence seq;
                                if (o == 0) {
                                    seq = ordered_sequence(residual);
                                } else {
                                    for (size_t ty = 0; ty < residual.size(); ++ty)
                                        seq.types.insert(seq.types.end(),
                                                         static_cast<size_t>(residual[ty]),
                                                         static_cast<int>(ty));
                                    std::shuffle(seq.types.begin(), seq.types.end(), rng);
                                }
                                double opt = opt_expected(residual, inst);
                                double ratio = 1.0;
                                if (opt > 0.0) {
                                    auto d = algorithms::algk_decide(sample, inst, rng);
                                    ratio = std::min(
                                        1.0, run_nested_policy(seq, d.order, d.levels, inst)
                                                     .expected_reward /
                                                 opt);
                                }
                                sum_ratio += ratio;
                            }
                            worst = std::min(
                                worst, sum_ratio / static_cast<double>(cfg.trials_per_order));
                        }
                        ++combo_idx;
                    }
            sum_cr += worst;
            sum_bench += bounds::benchmark_bound({cfg.r1, r2, r3});
        }
        row.mean_cr = sum_cr / static_cast<double>(cfg.instances);
        row.mean_benchmark = sum_bench / static_cast<double>(cfg.instances);
        rows.push_back(row);
        ++point_idx;
    }
    return rows;
}

}  // namespace sampcr::experiments
