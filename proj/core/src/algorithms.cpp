#include "sampcr/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sampcr::algorithms {

EstimatedRewards estimate_rewards(const SampleInfo& sample, std::mt19937_64& rng) {
    const int k = static_cast<int>(sample.s.size());
    EstimatedRewards est;
    est.r_hat.resize(k);
    est.source.resize(k);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < k; ++i) {
        if (sample.s[i] > 0) {
            est.r_hat[i] = sample.mean(i);
            est.source[i] = EstimateSource::SampleMean;
        } else {
            est.r_hat[i] = unif(rng);
            est.source[i] = EstimateSource::UniformDraw;
        }
    }
    return est;
}

PolicyDecision decide_from_estimates(const EstimatedRewards& est, const Counts& s,
                                     const ProblemInstance& inst, double level_p) {
    if (est.r_hat.size() != 2 || s.size() != 2)
        throw std::invalid_argument("two-type decision");
    if (!(level_p > 0.0 && level_p < 1.0))
        throw std::invalid_argument("level p must lie in (0,1)");
    const int prot = est.r_hat[0] > est.r_hat[1] ? 0 : 1;  // tie protects type 1 (index 1)
    const double ratio = (1.0 - level_p) / level_p;
    const double x = std::min(inst.m, static_cast<double>(s[prot]) * ratio);
    PolicyDecision d;
    d.order = {prot, 1 - prot};
    d.levels = {0.0, x};
    return d;
}

PolicyDecision alg1_decide(const SampleInfo& sample, const ProblemInstance& inst,
                           std::mt19937_64& rng) {
    return alg1_decide_with_p(sample, inst, inst.p, rng);
}

PolicyDecision alg1_decide_with_p(const SampleInfo& sample, const ProblemInstance& inst,
                                  double level_p, std::mt19937_64& rng) {
    return decide_from_estimates(estimate_rewards(sample, rng), sample.s, inst, level_p);
}

PolicyDecision hetero_decide(const SampleInfo& sample, const ProblemInstance& inst,
                             const std::vector<double>& p_vec, std::mt19937_64& rng) {
    if (p_vec.size() != 2) throw std::invalid_argument("two-type decision");
    for (double q : p_vec)
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("p_i must lie in (0,1)");
    EstimatedRewards est = estimate_rewards(sample, rng);
    const int prot = est.r_hat[0] > est.r_hat[1] ? 0 : 1;
    const double ratio = (1.0 - p_vec[prot]) / p_vec[prot];
    const double x = std::min(inst.m, static_cast<double>(sample.s[prot]) * ratio);
    PolicyDecision d;
    d.order = {prot, 1 - prot};
    d.levels = {0.0, x};
    return d;
}

PolicyDecision algk_decide(const SampleInfo& sample, const ProblemInstance& inst,
                           std::mt19937_64& rng) {
    const int k = static_cast<int>(sample.s.size());
    if (k < 2) throw std::invalid_argument("need k >= 2 types");
    EstimatedRewards est = estimate_rewards(sample, rng);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return est.r_hat[a] > est.r_hat[b]; });
    const double ratio = (1.0 - inst.p) / inst.p;
    std::vector<double> levels(k, 0.0);
    double cum_s = 0.0;
    for (int i = 1; i < k; ++i) {
        cum_s += static_cast<double>(sample.s[order[i - 1]]);
        levels[i] = std::min(inst.m, ratio * cum_s);
    }
    PolicyDecision d;
    d.order = std::move(order);
    d.levels = std::move(levels);
    return d;
}

RunResult alg1_run(const MarketSize& size, const ProblemInstance& inst, std::mt19937_64& rng,
                   const ArrivalSequence* seq) {
    auto [sample, residual] = sample_market(size, inst, rng);
    PolicyDecision d = alg1_decide(sample, inst, rng);
    ArrivalSequence worst;
    if (!seq) {
        worst = ordered_sequence(residual);
        seq = &worst;
    }
    RunResult rr;
    rr.outcome = run_protection_policy(*seq, d.protected_type(), d.protection_level(), inst);
    rr.decision = std::move(d);
    rr.test_accepted = sample.s;  // uncapped: every sampled agent gets a unit
    rr.sample = std::move(sample);
    rr.residual = std::move(residual);
    return rr;
}

RunResult alg1_run_capped(const MarketSize& size, const ProblemInstance& inst,
                          const CappedTestConfig& cfg, std::mt19937_64& rng,
                          const ArrivalSequence* seq) {
    auto [accepted_sample, residual] = capped_test_sample(size, inst, cfg, rng);
    PolicyDecision d = alg1_decide(accepted_sample, inst, rng);
    ArrivalSequence worst;
    if (!seq) {
        worst = ordered_sequence(residual);
        seq = &worst;
    }
    RunResult rr;
    rr.outcome = run_protection_policy(*seq, d.protected_type(), d.protection_level(), inst);
    rr.decision = std::move(d);
    rr.test_accepted = accepted_sample.s;
    rr.sample = std::move(accepted_sample);
    rr.residual = std::move(residual);
    return rr;
}

RunResult algk_run(const MarketSize& size, const ProblemInstance& inst, std::mt19937_64& rng,
                   const ArrivalSequence* seq) {
    auto [sample, residual] = sample_market(size, inst, rng);
    PolicyDecision d = algk_decide(sample, inst, rng);
    ArrivalSequence worst;
    if (!seq) {
        worst = ordered_sequence(residual);
        seq = &worst;
    }
    RunResult rr;
    rr.outcome = run_nested_policy(*seq, d.order, d.levels, inst);
    rr.decision = std::move(d);
    rr.test_accepted = sample.s;
    rr.sample = std::move(sample);
    rr.residual = std::move(residual);
    return rr;
}

AllocationOutcome alg3_branch(const ArrivalSequence& seq, const ProblemInstance& inst,
                              int only_type) {
    // Full protection of the chosen type shuts the other type out entirely.
    return run_protection_policy(seq, only_type, inst.m, inst);
}

Alg3Result alg3_run(const ArrivalSequence& seq, const ProblemInstance& inst,
                    std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    Alg3Result res;
    res.branch = coin(rng) ? 0 : 1;
    res.outcome = alg3_branch(seq, inst, res.branch);
    return res;
}

double alg3_expected_reward(double n1, double n2, const ProblemInstance& inst) {
    return 0.5 * std::min(n1, inst.m) * inst.rewards[0] +
           0.5 * std::min(n2, inst.m) * inst.rewards[1];
}

AdaptiveResult adaptive_core(const SampleInfo& sample, const ArrivalSequence& seq,
                             const std::vector<int>* realized, const ProblemInstance& inst,
                             std::mt19937_64& rng) {
    if (inst.num_types() != 2) throw std::invalid_argument("two-type policy");
    if (realized && realized->size() != seq.types.size())
        throw std::invalid_argument("realized rewards must match sequence length");

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Pooled observations: test-period recipients seed the estimates.
    double obs_n[2], obs_ones[2], fallback[2];
    bool has_obs[2];
    for (int i = 0; i < 2; ++i) {
        obs_n[i] = static_cast<double>(sample.s[i]);
        obs_ones[i] = static_cast<double>(sample.ones(i));
        has_obs[i] = sample.s[i] > 0;
        fallback[i] = has_obs[i] ? 0.0 : unif(rng);
    }
    auto estimate = [&](int i) { return has_obs[i] ? obs_ones[i] / obs_n[i] : fallback[i]; };

    const double lvl_ratio = (1.0 - inst.p) / inst.p;
    double acc[2] = {0.0, 0.0};
    double arrived[2] = {0.0, 0.0};  // Y_{i,t}: arrivals of type i before t
    double total = 0.0;
    int switches = 0, prev_prot = -1;
    std::bernoulli_distribution bern[2] = {std::bernoulli_distribution(inst.rewards[0]),
                                           std::bernoulli_distribution(inst.rewards[1])};
    for (size_t t = 0; t < seq.types.size(); ++t) {
        const int z = seq.types[t];
        if (z != 0 && z != 1) throw std::invalid_argument("sequence contains unknown type");
        const int prot = estimate(0) > estimate(1) ? 0 : 1;
        const int other = 1 - prot;
        if (prev_prot >= 0 && prot != prev_prot) ++switches;
        prev_prot = prot;
        double x = std::min(inst.m - acc[other],
                            static_cast<double>(sample.s[prot]) * lvl_ratio - arrived[prot]);
        if (x < 0.0) x = 0.0;

        double cap = inst.m - total;
        double take = 0.0;
        if (cap > 0.0) {
            if (z == prot) {
                take = std::min(1.0, cap);
            } else {
                double slack = (inst.m - x) - acc[other];
                if (slack > 0.0) take = std::min({1.0, cap, slack});
            }
        }
        arrived[z] += 1.0;
        if (take > 0.0) {
            acc[z] += take;
            total += take;
            int rew = realized ? (*realized)[t] : (bern[z](rng) ? 1 : 0);
            obs_n[z] += 1.0;
            obs_ones[z] += rew;
            has_obs[z] = true;
        }
    }
    AdaptiveResult res;
    res.outcome.accepted = {acc[0], acc[1]};
    res.outcome.expected_reward = acc[0] * inst.rewards[0] + acc[1] * inst.rewards[1];
    res.switch_count = switches;
    res.sample = sample;
    return res;
}

AdaptiveResult adaptive_alg1_run(const MarketSize& size, const ProblemInstance& inst,
                                 std::mt19937_64& rng, const ArrivalSequence* seq) {
    auto [sample, residual] = sample_market(size, inst, rng);
    ArrivalSequence worst;
    if (!seq) {
        worst = ordered_sequence(residual);
        seq = &worst;
    }
    AdaptiveResult res = adaptive_core(sample, *seq, nullptr, inst, rng);
    res.residual = std::move(residual);
    return res;
}

std::pair<SampleInfo, Counts> capped_test_sample(const MarketSize& size,
                                                 const ProblemInstance& inst,
                                                 const CappedTestConfig& cfg,
                                                 std::mt19937_64& rng) {
    if (!(cfg.m_t > 0.0)) throw std::invalid_argument("m_t must be > 0");
    auto [sample, residual] = sample_market(size, inst, rng);
    if (sample.s.size() != 2) throw std::invalid_argument("two-type capped test");
    const double s1 = static_cast<double>(sample.s[0]);
    const double s2 = static_cast<double>(sample.s[1]);
    long long a1, a2;
    if (s1 + s2 <= cfg.m_t) {
        a1 = sample.s[0];
        a2 = sample.s[1];
    } else if (s1 > cfg.m_t / 2.0 && s2 > cfg.m_t / 2.0) {
        a1 = static_cast<long long>(std::floor(cfg.m_t / 2.0));
        a2 = a1;
    } else if (s1 <= s2) {
        a1 = sample.s[0];
        a2 = std::min(sample.s[1], static_cast<long long>(std::floor(cfg.m_t - s1)));
    } else {
        a2 = sample.s[1];
        a1 = std::min(sample.s[0], static_cast<long long>(std::floor(cfg.m_t - s2)));
    }
    SampleInfo accepted;
    accepted.s = {a1, a2};
    accepted.rho.resize(2);
    // Samples are exchangeable, so keeping a prefix is an unbiased selection.
    accepted.rho[0].assign(sample.rho[0].begin(), sample.rho[0].begin() + a1);
    accepted.rho[1].assign(sample.rho[1].begin(), sample.rho[1].begin() + a2);
    if (cfg.rejoin) {
        residual[0] += sample.s[0] - a1;
        residual[1] += sample.s[1] - a2;
    }
    return {std::move(accepted), std::move(residual)};
}

AllocationOutcome no_sample_benchmark_run(const ArrivalSequence& seq, const ProblemInstance& inst,
                                          double x, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    int prot = coin(rng) ? 0 : 1;
    return run_protection_policy(seq, prot, x, inst);
}

double no_sample_benchmark_expected(double n1, double n2, double x,
                                    const ProblemInstance& inst) {
    return 0.5 * protection_outcome_ordered(n1, n2, 0, x, inst).expected_reward +
           0.5 * protection_outcome_ordered(n1, n2, 1, x, inst).expected_reward;
}

double benchmark_optimal_level(double alpha, double m) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    return (2.0 - 2.0 * alpha) / (2.0 - alpha) * m;
}

}  // namespace sampcr::algorithms
