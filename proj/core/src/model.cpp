#include "sampcr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sampcr {

ProblemInstance::ProblemInstance(double m_, double p_, std::vector<double> rewards_)
    : m(m_), p(p_), rewards(std::move(rewards_)) {
    if (!(m >= 2.0)) throw std::invalid_argument("m must be >= 2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (rewards.size() < 2) throw std::invalid_argument("need at least two types");
    for (double r : rewards)
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("rewards must lie in (0,1)");
    for (size_t i = 1; i < rewards.size(); ++i)
        if (!(rewards[i - 1] > rewards[i]))
            throw std::invalid_argument("rewards must be strictly decreasing");
}

MarketSize::MarketSize(Counts c) : counts(std::move(c)) {
    for (long long v : counts)
        if (v < 0) throw std::invalid_argument("market counts must be >= 0");
}

long long MarketSize::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0LL);
}

long long SampleInfo::ones(int i) const {
    return std::accumulate(rho[i].begin(), rho[i].end(), 0LL);
}

double SampleInfo::mean(int i) const {
    return static_cast<double>(ones(i)) / static_cast<double>(s[i]);
}

Counts ArrivalSequence::type_counts(int k) const {
    Counts n(k, 0);
    for (int t : types) n.at(t)++;
    return n;
}

double opt_expected(const std::vector<double>& n, const ProblemInstance& inst) {
    if (n.size() != inst.rewards.size())
        throw std::invalid_argument("count vector length must match type count");
    double remaining = inst.m;
    double total = 0.0;
    for (size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 0.0) throw std::invalid_argument("counts must be >= 0");
        double take = std::min(n[i], remaining);
        total += take * inst.rewards[i];
        remaining -= take;
        if (remaining <= 0.0) break;
    }
    return total;
}

double opt_expected(const Counts& n, const ProblemInstance& inst) {
    std::vector<double> d(n.begin(), n.end());
    return opt_expected(d, inst);
}

AllocationOutcome run_protection_policy(const ArrivalSequence& seq, int protected_type,
                                        double x, const ProblemInstance& inst) {
    if (inst.num_types() != 2) throw std::invalid_argument("two-type policy");
    if (protected_type != 0 && protected_type != 1)
        throw std::invalid_argument("protected type must be 0 or 1");
    if (!(x >= 0.0 && x <= inst.m)) throw std::invalid_argument("x must lie in [0,m]");

    const int other = 1 - protected_type;
    std::vector<double> acc(2, 0.0);
    double total = 0.0;
    for (int t : seq.types) {
        double cap = inst.m - total;
        if (cap <= 0.0) break;
        double take = 0.0;
        if (t == protected_type) {
            take = std::min(1.0, cap);
        } else if (t == other) {
            double slack = (inst.m - x) - acc[other];
            if (slack > 0.0) take = std::min({1.0, cap, slack});
        } else {
            throw std::invalid_argument("sequence contains unknown type");
        }
        acc[t] += take;
        total += take;
    }
    AllocationOutcome out;
    out.accepted = acc;
    out.expected_reward = acc[0] * inst.rewards[0] + acc[1] * inst.rewards[1];
    return out;
}

AllocationOutcome run_nested_policy(const ArrivalSequence& seq, const std::vector<int>& order,
                                    const std::vector<double>& levels,
                                    const ProblemInstance& inst) {
    const int k = inst.num_types();
    if (static_cast<int>(order.size()) != k || static_cast<int>(levels.size()) != k)
        throw std::invalid_argument("order/levels must have one entry per type");
    for (int i = 0; i < k; ++i) {
        if (!(levels[i] >= 0.0 && levels[i] <= inst.m))
            throw std::invalid_argument("levels must lie in [0,m]");
        if (i > 0 && levels[i] < levels[i - 1])
            throw std::invalid_argument("levels must be nondecreasing");
    }

    std::vector<int> rank_of(k, -1);  // type -> 0-based rank
    for (int i = 0; i < k; ++i) rank_of.at(order[i]) = i;
    for (int i = 0; i < k; ++i)
        if (rank_of[i] < 0) throw std::invalid_argument("order must be a permutation of types");

    std::vector<double> acc(k, 0.0);
    std::vector<double> suffix_acc(k, 0.0);  // accepted among ranks >= i
    double total = 0.0;
    for (int t : seq.types) {
        double cap = inst.m - total;
        if (cap <= 0.0) break;
        int rank = rank_of.at(t);
        double slack = (inst.m - levels[rank]) - suffix_acc[rank];
        if (slack <= 0.0) continue;
        double take = std::min({1.0, cap, slack});
        acc[t] += take;
        total += take;
        for (int j = 0; j <= rank; ++j) suffix_acc[j] += take;
    }
    AllocationOutcome out;
    out.accepted = acc;
    out.expected_reward = 0.0;
    for (int i = 0; i < k; ++i) out.expected_reward += acc[i] * inst.rewards[i];
    return out;
}

ArrivalSequence ordered_sequence(const Counts& n) {
    ArrivalSequence seq;
    for (int i = static_cast<int>(n.size()) - 1; i >= 0; --i) {
        if (n[i] < 0) throw std::invalid_argument("counts must be >= 0");
        seq.types.insert(seq.types.end(), static_cast<size_t>(n[i]), i);
    }
    return seq;
}

std::pair<SampleInfo, Counts> sample_market(const MarketSize& size, const ProblemInstance& inst,
                                            std::mt19937_64& rng) {
    const int k = static_cast<int>(size.counts.size());
    if (k != inst.num_types()) throw std::invalid_argument("market size/type mismatch");
    SampleInfo info;
    info.s.resize(k);
    info.rho.resize(k);
    Counts residual(k);
    for (int i = 0; i < k; ++i) {
        std::binomial_distribution<long long> bin(size.counts[i], inst.p);
        info.s[i] = bin(rng);
        residual[i] = size.counts[i] - info.s[i];
        info.rho[i].resize(info.s[i]);
        std::bernoulli_distribution bern(inst.rewards[i]);
        for (auto& v : info.rho[i]) v = bern(rng) ? 1 : 0;
    }
    return {std::move(info), std::move(residual)};
}

AllocationOutcome protection_outcome_ordered(double n1, double n2, int protected_type,
                                             double x, const ProblemInstance& inst) {
    if (!(x >= 0.0 && x <= inst.m)) throw std::invalid_argument("x must lie in [0,m]");
    if (n1 < 0.0 || n2 < 0.0) throw std::invalid_argument("counts must be >= 0");
    const double m = inst.m;
    double a1, a2;
    if (protected_type == 0) {
        a2 = std::min(n2, std::max(m - x, 0.0));
        a1 = std::min(n1, m - a2);
    } else if (protected_type == 1) {
        a2 = std::min(n2, m);
        a1 = std::min({n1, std::max(m - x, 0.0), m - a2});
    } else {
        throw std::invalid_argument("protected type must be 0 or 1");
    }
    AllocationOutcome out;
    out.accepted = {a1, a2};
    out.expected_reward = a1 * inst.rewards[0] + a2 * inst.rewards[1];
    return out;
}

AllocationOutcome nested_outcome_ordered(const std::vector<double>& n_by_type,
                                         const std::vector<int>& order,
                                         const std::vector<double>& levels,
                                         const ProblemInstance& inst) {
    const int k = inst.num_types();
    if (static_cast<int>(n_by_type.size()) != k || static_cast<int>(order.size()) != k ||
        static_cast<int>(levels.size()) != k)
        throw std::invalid_argument("vector lengths must match type count");
    // Groups arrive lowest type index last; within the ordered sequence the
    // group of type t arrives after every type t' > t. Process in arrival order.
    std::vector<int> rank_of(k, -1);
    for (int i = 0; i < k; ++i) rank_of.at(order[i]) = i;
    std::vector<double> acc(k, 0.0);
    double total = 0.0;
    for (int t = k - 1; t >= 0; --t) {
        int rank = rank_of.at(t);
        if (rank < 0) throw std::invalid_argument("order must be a permutation");
        double cap = inst.m - total;
        double suffix = 0.0;  // accepted so far among ranks >= rank
        for (int u = 0; u < k; ++u)
            if (rank_of[u] >= rank) suffix += acc[u];
        double slack = (inst.m - levels[rank]) - suffix;
        double take = std::min({n_by_type[t], cap, slack});
        if (take > 0.0) {
            acc[t] += take;
            total += take;
        }
    }
    AllocationOutcome out;
    out.accepted = acc;
    out.expected_reward = 0.0;
    for (int i = 0; i < k; ++i) out.expected_reward += acc[i] * inst.rewards[i];
    return out;
}

}  // namespace sampcr
