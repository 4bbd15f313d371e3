#pragma once

// Independent re-implementations used only as test oracles. Deliberately
// written in a different style from the library (naive tracing, direct
// combinatorics) so shared bugs are unlikely.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// Step-by-step protection-policy trace over an explicit arrival list.
// Types are 0 (reward rA) and 1 (reward rB).
inline double trace_policy(const std::vector<int>& seq, int prot, double x, double m, double rA,
                           double rB) {
    double used = 0.0, acc[2] = {0.0, 0.0};
    for (int t : seq) {
        double room = m - used;
        if (room <= 0.0) break;
        double g = 0.0;
        if (t == prot) {
            g = room < 1.0 ? room : 1.0;
        } else {
            double lim = (m - x) - acc[t];
            g = std::min(std::min(1.0, room), lim);
            if (g < 0.0) g = 0.0;
        }
        acc[t] += g;
        used += g;
    }
    return acc[0] * rA + acc[1] * rB;
}

inline double choose(long long n, long long k) {
    double c = 1.0;
    for (long long i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

inline double pmf(long long n, long long k, double q) {
    if (k < 0 || k > n) return 0.0;
    return choose(n, k) * std::pow(q, static_cast<double>(k)) *
           std::pow(1.0 - q, static_cast<double>(n - k));
}

inline std::vector<int> worst_seq(long long n1, long long n2) {
    std::vector<int> seq;
    for (long long i = 0; i < n2; ++i) seq.push_back(1);
    for (long long i = 0; i < n1; ++i) seq.push_back(0);
    return seq;
}

// Joint enumeration over sample counts and every realized-reward outcome.
inline double expected_ratio(long long h, long long ell, double m, double p, double r1,
                             double r2) {
    double total = 0.0;
    for (long long s1 = 0; s1 <= h; ++s1) {
        for (long long s2 = 0; s2 <= ell; ++s2) {
            double ws = pmf(h, s1, p) * pmf(ell, s2, p);
            long long n1 = h - s1, n2 = ell - s2;
            double o1 = std::min(static_cast<double>(n1), m);
            double opt = o1 * r1 + std::min(static_cast<double>(n2), m - o1) * r2;
            double x1 = std::min(m, static_cast<double>(s1) * (1.0 - p) / p);
            double x2 = std::min(m, static_cast<double>(s2) * (1.0 - p) / p);
            auto seq = worst_seq(n1, n2);
            double rew_good = trace_policy(seq, 0, x1, m, r1, r2);
            double rew_bad = trace_policy(seq, 1, x2, m, r1, r2);
            double pgood = 0.0;
            if (s1 > 0 && s2 > 0) {
                for (long long a = 0; a <= s1; ++a)
                    for (long long b = 0; b <= s2; ++b)
                        if (a * s2 > b * s1) pgood += pmf(s1, a, r1) * pmf(s2, b, r2);
            } else if (s1 == 0 && s2 == 0) {
                pgood = 0.5;
            } else if (s1 == 0) {
                for (long long b = 0; b <= s2; ++b)
                    pgood += pmf(s2, b, r2) *
                             (1.0 - static_cast<double>(b) / static_cast<double>(s2));
            } else {
                for (long long a = 0; a <= s1; ++a)
                    pgood += pmf(s1, a, r1) * static_cast<double>(a) /
                             static_cast<double>(s1);
            }
            double ratio = opt > 0.0 ? (pgood * rew_good + (1.0 - pgood) * rew_bad) / opt : 1.0;
            total += ws * ratio;
        }
    }
    return total;
}

}  // namespace oracle
