#pragma once

#include "sampcr/model.hpp"

namespace sampcr::algorithms {

enum class EstimateSource { SampleMean, UniformDraw };

struct EstimatedRewards {
    std::vector<double> r_hat;            // one estimate per type, in [0,1]
    std::vector<EstimateSource> source;
};

// Committed decision: types ranked by descending estimate, plus cumulative
// protection levels x_0..x_{k-1} (x_0 = 0) as consumed by run_nested_policy.
// Two-type case: order = (protected, other), levels = (0, x_protected).
struct PolicyDecision {
    std::vector<int> order;
    std::vector<double> levels;

    int protected_type() const { return order[0]; }
    double protection_level() const { return levels[1]; }
};

struct CappedTestConfig {
    double m_t;           // test-period resource cap, > 0
    bool rejoin = true;   // test-rejected sampled agents re-enter the online pool
};

EstimatedRewards estimate_rewards(const SampleInfo& sample, std::mt19937_64& rng);

// Two-type decision from given estimates: protect type 0 iff r_hat_0 > r_hat_1
// (ties protect type 1), level min{m, s_prot * (1-level_p)/level_p}.
PolicyDecision decide_from_estimates(const EstimatedRewards& est, const Counts& s,
                                     const ProblemInstance& inst, double level_p);

PolicyDecision alg1_decide(const SampleInfo& sample, const ProblemInstance& inst,
                           std::mt19937_64& rng);

// Same decision rule with protection levels computed from a (possibly
// misestimated) sampling probability.
PolicyDecision alg1_decide_with_p(const SampleInfo& sample, const ProblemInstance& inst,
                                  double level_p, std::mt19937_64& rng);

// Per-type sampling probabilities: level uses (1-p_i)/p_i of the protected type.
PolicyDecision hetero_decide(const SampleInfo& sample, const ProblemInstance& inst,
                             const std::vector<double>& p_vec, std::mt19937_64& rng);

// k-type decision: sort estimates descending (ties by ascending type index),
// cumulative levels x_i = min{m, (1-p)/p * sum of s over the top-i types}.
PolicyDecision algk_decide(const SampleInfo& sample, const ProblemInstance& inst,
                           std::mt19937_64& rng);

struct RunResult {
    AllocationOutcome outcome;   // allocation-period policy outcome
    PolicyDecision decision;
    SampleInfo sample;           // observations the decision used
    Counts residual;             // market remaining after the test period
    Counts test_accepted;        // sampled agents who received a unit
};

// Full pipeline: sample, estimate, decide, run on `seq` (worst order when null).
RunResult alg1_run(const MarketSize& size, const ProblemInstance& inst, std::mt19937_64& rng,
                   const ArrivalSequence* seq = nullptr);

RunResult alg1_run_capped(const MarketSize& size, const ProblemInstance& inst,
                          const CappedTestConfig& cfg, std::mt19937_64& rng,
                          const ArrivalSequence* seq = nullptr);

RunResult algk_run(const MarketSize& size, const ProblemInstance& inst, std::mt19937_64& rng,
                   const ArrivalSequence* seq = nullptr);

struct Alg3Result {
    AllocationOutcome outcome;
    int branch;  // type accepted exclusively
};

// Coin-flip exclusivity rule: accept only one type for the whole horizon.
Alg3Result alg3_run(const ArrivalSequence& seq, const ProblemInstance& inst,
                    std::mt19937_64& rng);
AllocationOutcome alg3_branch(const ArrivalSequence& seq, const ProblemInstance& inst,
                              int only_type);
double alg3_expected_reward(double n1, double n2, const ProblemInstance& inst);

struct AdaptiveResult {
    AllocationOutcome outcome;
    int switch_count;   // protected-type changes across arrivals
    SampleInfo sample;
    Counts residual;
};

// Adaptive variant: estimates are pooled empirical means over test samples and
// accepted agents; the protection level is recomputed at every arrival.
AdaptiveResult adaptive_alg1_run(const MarketSize& size, const ProblemInstance& inst,
                                 std::mt19937_64& rng, const ArrivalSequence* seq = nullptr);

// Core with externally fixed sample/sequence; realized rewards per arrival are
// taken from `realized` when given (|realized| == |seq|), else drawn from rng.
AdaptiveResult adaptive_core(const SampleInfo& sample, const ArrivalSequence& seq,
                             const std::vector<int>* realized, const ProblemInstance& inst,
                             std::mt19937_64& rng);

// Capacity-capped test period: which sampled agents actually get a test unit.
// Returns the accepted-only SampleInfo and the residual arrival pool.
std::pair<SampleInfo, Counts> capped_test_sample(const MarketSize& size,
                                                 const ProblemInstance& inst,
                                                 const CappedTestConfig& cfg,
                                                 std::mt19937_64& rng);

// Sample-free baseline: coin-flip the protected type, fixed level x.
AllocationOutcome no_sample_benchmark_run(const ArrivalSequence& seq, const ProblemInstance& inst,
                                          double x, std::mt19937_64& rng);
double no_sample_benchmark_expected(double n1, double n2, double x, const ProblemInstance& inst);
double benchmark_optimal_level(double alpha, double m);  // (2-2a)/(2-a) * m

}  // namespace sampcr::algorithms
