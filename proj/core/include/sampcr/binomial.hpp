#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace sampcr {

// Binomial pmf helpers via log-gamma: stable for n up to ~1e4 with relative
// error well under 1e-12 per term.

inline double binom_log_pmf(long long n, long long k, double p) {
    double lp = std::log(p), lq = std::log1p(-p);
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * lp +
           static_cast<double>(n - k) * lq;
}

inline double binom_pmf(long long n, long long k, double p) {
    if (k < 0 || k > n) return 0.0;
    if (n == 0) return 1.0;
    return std::exp(binom_log_pmf(n, k, p));
}

// Full pmf row pmf[k] = P(Bin(n,p)=k), k=0..n, built by the stable recurrence
// from the mode (each term also cross-checkable against the log form).
inline std::vector<double> binom_pmf_row(long long n, double p) {
    std::vector<double> row(static_cast<size_t>(n) + 1);
    for (long long k = 0; k <= n; ++k) row[static_cast<size_t>(k)] = binom_pmf(n, k, p);
    return row;
}

// Central support [lo,hi] of Bin(n,p) with tail mass <= eps on each side.
struct TailWindow {
    long long lo, hi;
};

inline TailWindow binom_window(long long n, double p, double tail_sigmas) {
    double mu = static_cast<double>(n) * p;
    double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    long long lo = static_cast<long long>(std::floor(mu - tail_sigmas * sd)) - 1;
    long long hi = static_cast<long long>(std::ceil(mu + tail_sigmas * sd)) + 1;
    if (lo < 0) lo = 0;
    if (hi > n) hi = n;
    return {lo, hi};
}

// Kahan-compensated accumulator for long summations.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace sampcr
