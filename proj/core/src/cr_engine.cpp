#include "sampcr/cr_engine.hpp"

#include "sampcr/algorithms.hpp"
#include "sampcr/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sampcr::cr_engine {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

GoodEventSplit good_event_split(long long s1, long long s2, double r1, double r2) {
    if (s1 < 0 || s2 < 0) throw std::invalid_argument("sample counts must be >= 0");
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0))
        throw std::invalid_argument("rewards must lie in (0,1)");
    GoodEventSplit g;
    if (s1 == 0 && s2 == 0) {
        // Two independent uniforms: strict order each way, ties measure zero.
        g.greater = 0.5;
        g.tie = 0.0;
        g.less = 0.5;
        return g;
    }
    if (s1 == 0) {
        // P(U > K2/s2) integrated over the binomial mean: 1 - E[K2/s2].
        g.greater = 1.0 - r2;
        g.tie = 0.0;
        g.less = r2;
        return g;
    }
    if (s2 == 0) {
        g.greater = r1;
        g.tie = 0.0;
        g.less = 1.0 - r1;
        return g;
    }
    Kahan gt, eq, lt;
    for (long long a = 0; a <= s1; ++a) {
        double w1 = binom_pmf(s1, a, r1);
        for (long long b = 0; b <= s2; ++b) {
            double w = w1 * binom_pmf(s2, b, r2);
            long long lhs = a * s2, rhs = b * s1;
            if (lhs > rhs)
                gt.add(w);
            else if (lhs == rhs)
                eq.add(w);
            else
                lt.add(w);
        }
    }
    g.greater = gt.sum;
    g.tie = eq.sum;
    g.less = lt.sum;
    return g;
}

double good_event_prob(long long s1, long long s2, double r1, double r2) {
    return good_event_split(s1, s2, r1, r2).greater;
}

ExactEvaluator::ExactEvaluator(const ProblemInstance& inst, long long h_max, long long ell_max,
                               std::optional<double> level_p, double tail_sigmas)
    : inst_(inst),
      h_max_(h_max),
      ell_max_(ell_max),
      level_p_(level_p.value_or(inst.p)),
      tail_sigmas_(tail_sigmas) {
    if (inst.num_types() != 2) throw std::invalid_argument("two-type engine");
    if (h_max < 0 || ell_max < 0) throw std::invalid_argument("grid bounds must be >= 0");
    if (!(level_p_ > 0.0 && level_p_ < 1.0))
        throw std::invalid_argument("level p must lie in (0,1)");

    const long long n_top = std::max(h_max_, ell_max_);
    rows_.resize(static_cast<size_t>(n_top) + 1);
    for (long long n = 0; n <= n_top; ++n) {
        TailWindow w = binom_window(n, inst_.p, tail_sigmas_);
        rows_[n] = {w.lo, w.hi, pmf_.size()};
        for (long long s = w.lo; s <= w.hi; ++s) pmf_.push_back(binom_pmf(n, s, inst_.p));
    }
    s1_cap_ = rows_[h_max_].hi;
    s2_cap_ = rows_[ell_max_].hi;
    q_stride_ = static_cast<size_t>(s2_cap_) + 1;

    const double m = inst_.m;
    const double lr = (1.0 - level_p_) / level_p_;
    cap_good_.resize(static_cast<size_t>(s1_cap_) + 1);
    for (long long s = 0; s <= s1_cap_; ++s)
        cap_good_[s] = std::max(m - static_cast<double>(s) * lr, 0.0);
    cap_bad_.resize(static_cast<size_t>(s2_cap_) + 1);
    for (long long s = 0; s <= s2_cap_; ++s)
        cap_bad_[s] = std::max(m - static_cast<double>(s) * lr, 0.0);

    // Good-event table. Reward-realization pmfs for type 1 and windowed
    // prefix cdfs for type 2; the comparison a/s1 > b/s2 is done in integers.
    const double r1 = inst_.rewards[0], r2 = inst_.rewards[1];
    struct CdfRow {
        long long lo, hi;
        std::size_t off;
    };
    std::vector<CdfRow> cdf_rows(static_cast<size_t>(s2_cap_) + 1);
    std::vector<double> cdf_vals;
    for (long long s = 1; s <= s2_cap_; ++s) {
        TailWindow w = binom_window(s, r2, tail_sigmas_);
        cdf_rows[s] = {w.lo, w.hi, cdf_vals.size()};
        double run = 0.0;
        for (long long b = w.lo; b <= w.hi; ++b) {
            run += binom_pmf(s, b, r2);
            cdf_vals.push_back(run);
        }
    }
    auto cdf2 = [&](long long s2v, long long b) -> double {
        const CdfRow& cr = cdf_rows[s2v];
        if (b < cr.lo) return 0.0;
        if (b >= cr.hi) return cdf_vals[cr.off + static_cast<size_t>(cr.hi - cr.lo)];
        return cdf_vals[cr.off + static_cast<size_t>(b - cr.lo)];
    };

    q_.assign((static_cast<size_t>(s1_cap_) + 1) * q_stride_, 0.0);
    for (long long s1 = 0; s1 <= s1_cap_; ++s1) {
        double* qrow = &q_[static_cast<size_t>(s1) * q_stride_];
        if (s1 == 0) {
            qrow[0] = 0.5;
            for (long long s2 = 1; s2 <= s2_cap_; ++s2) qrow[s2] = 1.0 - r2;
            continue;
        }
        TailWindow w1 = binom_window(s1, r1, tail_sigmas_);
        std::vector<double> pmf1(static_cast<size_t>(w1.hi - w1.lo) + 1);
        for (long long a = w1.lo; a <= w1.hi; ++a)
            pmf1[static_cast<size_t>(a - w1.lo)] = binom_pmf(s1, a, r1);
        qrow[0] = r1;
        for (long long s2 = 1; s2 <= s2_cap_; ++s2) {
            Kahan acc;
            for (long long a = std::max(w1.lo, 1LL); a <= w1.hi; ++a) {
                // largest b with b/s2 < a/s1
                long long bmax = (a * s2 - 1) / s1;
                acc.add(pmf1[static_cast<size_t>(a - w1.lo)] * cdf2(s2, bmax));
            }
            qrow[s2] = acc.sum;
        }
    }
}

double ExactEvaluator::cell_dense(long long h, long long ell) const {
    const Row& R1 = rows_[h];
    const Row& R2 = rows_[ell];
    const double m = inst_.m, r1 = inst_.rewards[0], r2 = inst_.rewards[1];
    const double* w2row = &pmf_[R2.off];
    Kahan acc;
    for (long long s1 = R1.lo; s1 <= R1.hi; ++s1) {
        const double w1 = pmf_[R1.off + static_cast<size_t>(s1 - R1.lo)];
        const double n1 = static_cast<double>(h - s1);
        const double cg = cap_good_[s1];
        const double* qrow = &q_[static_cast<size_t>(s1) * q_stride_];
        const double o1 = n1 < m ? n1 : m;
        const double opt1 = o1 * r1;
        const double rem = m - o1;
        double inner = 0.0;
        for (long long s2 = R2.lo; s2 <= R2.hi; ++s2) {
            const double n2 = static_cast<double>(ell - s2);
            const double a2g = n2 < cg ? n2 : cg;
            const double a1g = std::min(n1, m - a2g);
            const double rg = a1g * r1 + a2g * r2;
            const double a2b = n2 < m ? n2 : m;
            const double a1b = std::min(n1, std::min(cap_bad_[s2], m - a2b));
            const double rb = a1b * r1 + a2b * r2;
            const double opt = opt1 + (n2 < rem ? n2 : rem) * r2;
            const double q = qrow[s2];
            const double num = q * (rg - rb) + rb;
            const double ratio = opt > 0.0 ? num / opt : 1.0;
            inner += w2row[s2 - R2.lo] * ratio;
        }
        acc.add(w1 * inner);
    }
    return clamp01(acc.sum);
}

double ExactEvaluator::expected_ratio(long long h, long long ell) const {
    if (h < 0 || h > h_max_ || ell < 0 || ell > ell_max_)
        throw std::invalid_argument("(h, ell) outside the evaluator grid");
    return cell_dense(h, ell);
}

CrReport ExactEvaluator::evaluate_grid(bool keep_cells) const {
    const double m = inst_.m, r1 = inst_.rewards[0], r2 = inst_.rewards[1];
    const double lr = (1.0 - level_p_) / level_p_;
    // Smallest sample count that zeroes the good-branch residual capacity.
    const double s1_zero_cap = m / lr;

    CrReport rep;
    rep.h_max = h_max_;
    rep.ell_max = ell_max_;
    if (keep_cells)
        rep.ratios.assign(static_cast<size_t>(h_max_ + 1) * static_cast<size_t>(ell_max_ + 1),
                          0.0);
    double best = 2.0;
    long long best_h = 0, best_ell = 0;

    std::vector<double> qbar(static_cast<size_t>(s1_cap_) + 1);
    std::vector<double> qg(static_cast<size_t>(s1_cap_) + 1);
    double gbar = 0.0;

    for (long long ell = 0; ell <= ell_max_; ++ell) {
        const Row& R2 = rows_[ell];
        const double* w2row = &pmf_[R2.off];
        // Every retained s2 leaves at least m type-2 arrivals: the type-2 side
        // saturates and the cell reduces to a marginal over s1.
        const bool ell_far = (ell - R2.hi) >= static_cast<long long>(std::ceil(m));
        if (ell_far) {
            for (long long s1 = 0; s1 <= s1_cap_; ++s1) {
                const double* qrow = &q_[static_cast<size_t>(s1) * q_stride_];
                double sum = 0.0;
                for (long long s2 = R2.lo; s2 <= R2.hi; ++s2)
                    sum += w2row[s2 - R2.lo] * qrow[s2];
                qbar[s1] = sum;
            }
        } else {
            // Marginals for cells with overwhelming type-1 supply.
            double gs = 0.0;
            std::vector<double> t(static_cast<size_t>(R2.hi - R2.lo) + 1);
            for (long long s2 = R2.lo; s2 <= R2.hi; ++s2) {
                const double n2 = static_cast<double>(ell - s2);
                const double a2b = n2 < m ? n2 : m;
                const double a1b = std::min(cap_bad_[s2], m - a2b);
                t[s2 - R2.lo] = (a1b * r1 + a2b * r2) / (m * r1);
                gs += w2row[s2 - R2.lo] * t[s2 - R2.lo];
            }
            gbar = gs;
            for (long long s1 = 0; s1 <= s1_cap_; ++s1) {
                const double* qrow = &q_[static_cast<size_t>(s1) * q_stride_];
                double sum = 0.0;
                for (long long s2 = R2.lo; s2 <= R2.hi; ++s2)
                    sum += w2row[s2 - R2.lo] * qrow[s2] * (1.0 - t[s2 - R2.lo]);
                qg[s1] = sum;
            }
        }

        for (long long h = 0; h <= h_max_; ++h) {
            const Row& R1 = rows_[h];
            double val;
            if (ell_far) {
                Kahan acc;
                for (long long s1 = R1.lo; s1 <= R1.hi; ++s1) {
                    const double w1 = pmf_[R1.off + static_cast<size_t>(s1 - R1.lo)];
                    const double n1 = static_cast<double>(h - s1);
                    const double cg = cap_good_[s1];
                    const double a1g = std::min(n1, m - cg);
                    const double rg = a1g * r1 + cg * r2;
                    const double rb = m * r2;
                    const double o1 = n1 < m ? n1 : m;
                    const double opt = o1 * r1 + (m - o1) * r2;
                    acc.add(w1 * ((qbar[s1] * (rg - rb) + rb) / opt));
                }
                val = acc.sum;
            } else if (static_cast<double>(R1.lo) >= s1_zero_cap &&
                       (h - R1.hi) >= static_cast<long long>(std::ceil(m))) {
                // Type-1 side saturates: ratio = q*(1 - t) + t per (s1, s2).
                Kahan acc;
                double wsum = 0.0;
                for (long long s1 = R1.lo; s1 <= R1.hi; ++s1) {
                    const double w1 = pmf_[R1.off + static_cast<size_t>(s1 - R1.lo)];
                    acc.add(w1 * qg[s1]);
                    wsum += w1;
                }
                val = acc.sum + wsum * gbar;
            } else {
                val = cell_dense(h, ell);
            }
            val = clamp01(val);
            if (keep_cells)
                rep.ratios[static_cast<size_t>(h) * static_cast<size_t>(ell_max_ + 1) +
                           static_cast<size_t>(ell)] = val;
            if (val < best || (val == best && (h < best_h || (h == best_h && ell < best_ell)))) {
                best = val;
                best_h = h;
                best_ell = ell;
            }
        }
    }
    rep.infimum = best;
    rep.argmin_h = best_h;
    rep.argmin_ell = best_ell;
    return rep;
}

double expected_ratio(long long h, long long ell, const ProblemInstance& inst) {
    return ExactEvaluator(inst, h, ell).expected_ratio(h, ell);
}

long long default_grid_bound(const ProblemInstance& inst) {
    return static_cast<long long>(std::ceil(3.0 * inst.m / (1.0 - inst.p)));
}

CrReport exact_cr(const ProblemInstance& inst, long long h_max, long long ell_max,
                  bool keep_cells) {
    return ExactEvaluator(inst, h_max, ell_max).evaluate_grid(keep_cells);
}

CrReport exact_cr_alg3(const ProblemInstance& inst, long long h_max, long long ell_max,
                       bool keep_cells) {
    if (inst.num_types() != 2) throw std::invalid_argument("two-type engine");
    CrReport rep;
    rep.h_max = h_max;
    rep.ell_max = ell_max;
    if (keep_cells)
        rep.ratios.assign(static_cast<size_t>(h_max + 1) * static_cast<size_t>(ell_max + 1), 0.0);
    double best = 2.0;
    long long best_h = 0, best_ell = 0;
    for (long long h = 0; h <= h_max; ++h) {
        for (long long ell = 0; ell <= ell_max; ++ell) {
            double opt = opt_expected(Counts{h, ell}, inst);
            double val = opt > 0.0 ? clamp01(algorithms::alg3_expected_reward(
                                         static_cast<double>(h), static_cast<double>(ell),
                                         inst) /
                                     opt)
                                   : 1.0;
            if (keep_cells)
                rep.ratios[static_cast<size_t>(h) * static_cast<size_t>(ell_max + 1) +
                           static_cast<size_t>(ell)] = val;
            if (val < best) {
                best = val;
                best_h = h;
                best_ell = ell;
            }
        }
    }
    rep.infimum = best;
    rep.argmin_h = best_h;
    rep.argmin_ell = best_ell;
    return rep;
}

MonteCarloEstimate realized_cr_estimate(const ProblemInstance& inst, long long h, long long ell,
                                        long long trials, std::mt19937_64& rng) {
    if (inst.num_types() != 2) throw std::invalid_argument("two-type estimate");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (h < 0 || ell < 0) throw std::invalid_argument("market counts must be >= 0");
    const double m = inst.m, r1 = inst.rewards[0], r2 = inst.rewards[1];
    const double lr = (1.0 - inst.p) / inst.p;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double sum = 0.0, sumsq = 0.0;
    for (long long t = 0; t < trials; ++t) {
        std::binomial_distribution<long long> bh(h, inst.p), bl(ell, inst.p);
        long long s1 = h > 0 ? bh(rng) : 0;
        long long s2 = ell > 0 ? bl(rng) : 0;
        long long k1 = 0, k2 = 0;
        if (s1 > 0) k1 = std::binomial_distribution<long long>(s1, r1)(rng);
        if (s2 > 0) k2 = std::binomial_distribution<long long>(s2, r2)(rng);
        double rhat1 = s1 > 0 ? static_cast<double>(k1) / s1 : unif(rng);
        double rhat2 = s2 > 0 ? static_cast<double>(k2) / s2 : unif(rng);
        int prot = rhat1 > rhat2 ? 0 : 1;
        double x = std::min(m, static_cast<double>(prot == 0 ? s1 : s2) * lr);
        double n[2] = {static_cast<double>(h - s1), static_cast<double>(ell - s2)};
        AllocationOutcome out = protection_outcome_ordered(n[0], n[1], prot, x, inst);

        // Realized 0/1 rewards through binomial sufficient statistics: draw
        // the count of ones among accepted and rejected agents separately.
        double numer = 0.0;
        long long ones_total = 0;
        for (int i = 0; i < 2; ++i) {
            double ri = inst.rewards[i];
            double a = out.accepted[i];
            long long c = static_cast<long long>(std::floor(a));
            double f = a - static_cast<double>(c);
            long long ones_acc = 0;
            if (c > 0) ones_acc = std::binomial_distribution<long long>(c, ri)(rng);
            numer += static_cast<double>(ones_acc);
            ones_total += ones_acc;
            long long frac_agent = f > 0.0 ? 1 : 0;
            if (frac_agent) {
                int rr = unif(rng) < ri ? 1 : 0;
                numer += f * rr;
                ones_total += rr;
            }
            long long rej = static_cast<long long>(n[i]) - c - frac_agent;
            if (rej > 0)
                ones_total += std::binomial_distribution<long long>(rej, ri)(rng);
        }
        double denom = std::min(m, static_cast<double>(ones_total));
        double ratio = denom > 0.0 ? numer / denom : 1.0;
        sum += ratio;
        sumsq += ratio * ratio;
    }
    MonteCarloEstimate est;
    est.trials = trials;
    est.value = sum / static_cast<double>(trials);
    double var = std::max(0.0, sumsq / trials - est.value * est.value);
    est.std_error = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1)) : 0.0;
    return est;
}

namespace {

double run_selected(const ProblemInstance& inst, AlgorithmSelector sel, const SampleInfo& sample,
                    const ArrivalSequence& seq, const std::vector<int>* realized,
                    std::mt19937_64& rng) {
    switch (sel) {
        case AlgorithmSelector::Alg1: {
            auto d = algorithms::alg1_decide(sample, inst, rng);
            return run_protection_policy(seq, d.protected_type(), d.protection_level(), inst)
                .expected_reward;
        }
        case AlgorithmSelector::AlgK: {
            auto d = algorithms::algk_decide(sample, inst, rng);
            return run_nested_policy(seq, d.order, d.levels, inst).expected_reward;
        }
        case AlgorithmSelector::Adaptive:
            return algorithms::adaptive_core(sample, seq, realized, inst, rng)
                .outcome.expected_reward;
        case AlgorithmSelector::Alg3:
            return algorithms::alg3_run(seq, inst, rng).outcome.expected_reward;
        case AlgorithmSelector::NoSampleBenchmark: {
            double x = algorithms::benchmark_optimal_level(inst.alpha(), inst.m);
            return algorithms::no_sample_benchmark_run(seq, inst, x, rng).expected_reward;
        }
    }
    throw std::invalid_argument("unknown algorithm selector");
}

}  // namespace

MonteCarloEstimate mc_cr_random_order(const ProblemInstance& inst, const Counts& market,
                                      long long trials, std::mt19937_64& rng,
                                      AlgorithmSelector sel, bool exhaustive_orders) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    MarketSize size(market);
    double sum = 0.0, sumsq = 0.0;
    for (long long t = 0; t < trials; ++t) {
        auto [sample, residual] = sample_market(size, inst, rng);
        double opt = opt_expected(residual, inst);
        double ratio;
        if (exhaustive_orders) {
            long long total = std::accumulate(residual.begin(), residual.end(), 0LL);
            if (total > 10)
                throw std::invalid_argument("exhaustive order enumeration needs <= 10 agents");
            // Agents with pre-drawn realized rewards, iterated through every
            // distinct arrangement.
            std::vector<std::pair<int, int>> agents;
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (size_t i = 0; i < residual.size(); ++i)
                for (long long c = 0; c < residual[i]; ++c)
                    agents.emplace_back(static_cast<int>(i),
                                        unif(rng) < inst.rewards[i] ? 1 : 0);
            std::sort(agents.begin(), agents.end());
            double acc = 0.0;
            long long perms = 0;
            do {
                ArrivalSequence seq;
                std::vector<int> realized;
                for (auto& [ty, rw] : agents) {
                    seq.types.push_back(ty);
                    realized.push_back(rw);
                }
                double rew = run_selected(inst, sel, sample, seq, &realized, rng);
                acc += opt > 0.0 ? std::min(1.0, rew / opt) : 1.0;
                ++perms;
            } while (std::next_permutation(agents.begin(), agents.end()));
            ratio = acc / static_cast<double>(perms);
        } else {
            ArrivalSequence seq;
            for (size_t i = 0; i < residual.size(); ++i)
                seq.types.insert(seq.types.end(), static_cast<size_t>(residual[i]),
                                 static_cast<int>(i));
            std::shuffle(seq.types.begin(), seq.types.end(), rng);
            double rew = run_selected(inst, sel, sample, seq, nullptr, rng);
            ratio = opt > 0.0 ? std::min(1.0, rew / opt) : 1.0;
        }
        sum += ratio;
        sumsq += ratio * ratio;
    }
    MonteCarloEstimate est;
    est.trials = trials;
    est.value = sum / static_cast<double>(trials);
    double var = std::max(0.0, sumsq / trials - est.value * est.value);
    est.std_error = trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1)) : 0.0;
    return est;
}

}  // namespace sampcr::cr_engine
