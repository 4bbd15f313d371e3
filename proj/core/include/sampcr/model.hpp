#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

// Online resource allocation with a sampled test period.
//
// A market of agents split into reward-ranked types; each agent independently
// joins a test sample with probability p, revealing a 0/1 realized reward.
// The decision maker then allocates m units online against an adversarial
// arrival order of the remaining agents.

namespace sampcr {

using Counts = std::vector<long long>;

// Market/resource parameters shared by every computation.
// Type indices are 0-based; type 0 carries the highest expected reward.
struct ProblemInstance {
    double m;                     // resource units, >= 2
    double p;                     // sampling probability, in (0,1)
    std::vector<double> rewards;  // strictly decreasing, each in (0,1)

    ProblemInstance(double m_, double p_, std::vector<double> rewards_);

    static ProblemInstance two_type(double m_, double p_, double r1, double r2) {
        return ProblemInstance(m_, p_, {r1, r2});
    }

    int num_types() const { return static_cast<int>(rewards.size()); }
    // Reward ratio of the second-best type to the best (two-type shorthand).
    double alpha() const { return rewards[1] / rewards[0]; }
};

struct MarketSize {
    Counts counts;  // per-type market counts, all >= 0

    MarketSize() = default;
    explicit MarketSize(Counts c);
    MarketSize(long long h, long long ell) : MarketSize(Counts{h, ell}) {}

    long long h() const { return counts[0]; }
    long long ell() const { return counts[1]; }
    long long total() const;
};

// Test-period observation: sampled counts and their realized 0/1 rewards.
struct SampleInfo {
    Counts s;                            // sampled count per type
    std::vector<std::vector<int>> rho;   // realized rewards, |rho[i]| == s[i]

    long long ones(int i) const;
    double mean(int i) const;  // requires s[i] > 0
};

struct ArrivalSequence {
    std::vector<int> types;  // 0-based type index per arrival

    Counts type_counts(int k) const;
};

struct AllocationOutcome {
    std::vector<double> accepted;  // per-type accepted amount (may be fractional)
    double expected_reward = 0.0;
};

// Clairvoyant optimum: greedy fill by descending reward.
double opt_expected(const std::vector<double>& n, const ProblemInstance& inst);
double opt_expected(const Counts& n, const ProblemInstance& inst);

// Two-type protection policy: agents of `protected_type` are accepted while
// any capacity remains; the other type only while its accepted total stays
// below m - x. The last acceptance may be fractional.
AllocationOutcome run_protection_policy(const ArrivalSequence& seq, int protected_type,
                                        double x, const ProblemInstance& inst);

// Nested k-type policy. `order` ranks types by decreasing estimated reward;
// `levels` holds cumulative protection x_0..x_{k-1} (x_0 = 0): an arrival of
// rank i (1-based) is accepted iff capacity remains and the total accepted
// among ranks i..k is below m - levels[i-1].
AllocationOutcome run_nested_policy(const ArrivalSequence& seq, const std::vector<int>& order,
                                    const std::vector<double>& levels,
                                    const ProblemInstance& inst);

// Adversarial order: all lowest-reward agents first, best type last.
ArrivalSequence ordered_sequence(const Counts& n);

// Draw the test-period sample: s_i ~ Binomial(count_i, p), rewards Bernoulli(r_i).
std::pair<SampleInfo, Counts> sample_market(const MarketSize& size, const ProblemInstance& inst,
                                            std::mt19937_64& rng);

// Closed-form outcome of the two-type protection policy on the ordered
// sequence (n2 type-2 arrivals, then n1 type-1). Counts may be fractional.
AllocationOutcome protection_outcome_ordered(double n1, double n2, int protected_type,
                                             double x, const ProblemInstance& inst);

// Same for the nested policy on the ordered k-type sequence.
AllocationOutcome nested_outcome_ordered(const std::vector<double>& n_by_type,
                                         const std::vector<int>& order,
                                         const std::vector<double>& levels,
                                         const ProblemInstance& inst);

}  // namespace sampcr
