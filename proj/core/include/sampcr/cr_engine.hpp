#pragma once

#include "sampcr/model.hpp"

#include <optional>

namespace sampcr::cr_engine {

// P(sample-mean estimate of type 1 strictly beats type 2), split by outcome.
struct GoodEventSplit {
    double greater = 0.0, tie = 0.0, less = 0.0;
};

double good_event_prob(long long s1, long long s2, double r1, double r2);
GoodEventSplit good_event_split(long long s1, long long s2, double r1, double r2);

struct CrReport {
    long long h_max = 0, ell_max = 0;
    std::vector<double> ratios;  // row-major [h * (ell_max+1) + ell]; empty if not kept
    double infimum = 1.0;
    long long argmin_h = 0, argmin_ell = 0;
};

// Exact expected-ratio evaluation over the full binomial sample lattice for a
// two-type instance, on the adversarial ordered sequence. Protection levels
// may be computed from a misreported probability (`level_p`) while sampling
// weights always use the true p.
class ExactEvaluator {
public:
    ExactEvaluator(const ProblemInstance& inst, long long h_max, long long ell_max,
                   std::optional<double> level_p = std::nullopt, double tail_sigmas = 8.0);

    // Single-cell reference evaluation (dense enumeration over both windows).
    double expected_ratio(long long h, long long ell) const;

    // Whole grid; far regions where one market count dominates are collapsed
    // to precomputed marginals (identical values, checked by tests).
    CrReport evaluate_grid(bool keep_cells = true) const;

    long long h_max() const { return h_max_; }
    long long ell_max() const { return ell_max_; }

private:
    struct Row {
        long long lo, hi;
        std::size_t off;
    };
    double cell_dense(long long h, long long ell) const;

    ProblemInstance inst_;
    long long h_max_, ell_max_;
    double level_p_;
    double tail_sigmas_;
    std::vector<Row> rows_;     // pmf windows at the true p, n = 0..max(h_max,ell_max)
    std::vector<double> pmf_;
    long long s1_cap_, s2_cap_;
    std::size_t q_stride_;
    std::vector<double> q_;         // good-event probability per (s1, s2)
    std::vector<double> cap_good_;  // m - x1(s1), clamped at 0
    std::vector<double> cap_bad_;   // m - x2(s2), clamped at 0
};

double expected_ratio(long long h, long long ell, const ProblemInstance& inst);

long long default_grid_bound(const ProblemInstance& inst);  // ceil(3m/(1-p))

CrReport exact_cr(const ProblemInstance& inst, long long h_max, long long ell_max,
                  bool keep_cells = true);

// Coin-flip exclusivity rule evaluated on the raw market (no test period):
// ratio(h, ell) = expected reward / opt on counts (h, ell).
CrReport exact_cr_alg3(const ProblemInstance& inst, long long h_max, long long ell_max,
                       bool keep_cells = true);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long trials = 0;
};

// Realized-reward competitive ratio against the benchmark that only accepts
// realized-one agents; worst-order approximation, Monte Carlo only.
MonteCarloEstimate realized_cr_estimate(const ProblemInstance& inst, long long h, long long ell,
                                        long long trials, std::mt19937_64& rng);

enum class AlgorithmSelector { Alg1, Adaptive, AlgK, Alg3, NoSampleBenchmark };

// Expected ratio under uniformly random arrival orders for any algorithm.
// With exhaustive_orders, every distinct order is averaged per sampled market
// (only feasible for small residual totals).
MonteCarloEstimate mc_cr_random_order(const ProblemInstance& inst, const Counts& market,
                                      long long trials, std::mt19937_64& rng,
                                      AlgorithmSelector sel, bool exhaustive_orders = false);

}  // namespace sampcr::cr_engine
