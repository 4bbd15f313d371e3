#pragma once

#include <vector>

namespace sampcr::bounds {

// Constants feeding the protection-level lower bound. Search-based values are
// authoritative; the companion closed forms are cross-checks only.
struct BoundConstants {
    double beta = 0.0;
    double h0 = 0.0;    // threshold market size for the mid regime (real root)
    double h1 = 0.0;
    double ell0 = 0.0;  // smallest integer supply that saturates capacity whp
    double ell1 = 0.0;
    double m1 = 0.0;    // capacity above which the reward gap is detectable
    double V = 0.0;
    double W = 0.0;
    double alpha = 0.0;
    double sqrt_m_threshold = 0.0;

    double h0_closed_form = 0.0;
    double ell0_closed_form = 0.0;  // real root of (1-p)y - sqrt(y) = m
    double m1_closed_form = 0.0;
    bool m1_closed_form_mismatch = false;  // search vs closed form beyond 1e-3 rel
};

BoundConstants constants(double m, double p, double r1, double r2);

struct TheoremTwoBound {
    double cr1 = 0.0;
    double cr2 = 0.0;
    double cr3_over = 0.0;   // large-capacity regime component
    double cr3_under = 0.0;  // small-capacity regime component
    double overall = 0.0;    // min of the applicable triple, clamped at 0
    bool large_m_regime = false;    // m >= m1
    bool cr3_over_degenerate = false;  // sqrt(m)*p <= m^(1/4)
};

TheoremTwoBound theorem2_bound(double m, double p, double r1, double r2);

// Sample-free baseline ceiling: 1/(k - sum of adjacent reward ratios).
double benchmark_bound(const std::vector<double>& rewards);

struct SmallPUpperBound {
    double value = 0.0;
    long long h_tilde = 0;      // literal reading: smallest h with hp + sqrt(h ln h) >= 1
    double value_alt = 0.0;
    long long h_tilde_alt = 0;  // floor(1/p) reading
};

SmallPUpperBound smallp_upper_bound(double m, double p, double alpha);

// Leading-order rate expressions with unit constants. Diagnostic only: they
// feed plots and never back assertions.
struct AsymptoticForms {
    double alg1_cr = 0.0;             // 1 - 1/(p sqrt(m))
    double hetero_cr = 0.0;           // 1 - max{1/(p1 sqrt(m)), 1/(min(p1,p2)^2 m)}
    double realized_cr_ceiling = 0.0; // r2
    double cr3_over_rate = 0.0;       // 1 - max{1/sqrt(m), 1/(p^2 m)}
};

AsymptoticForms asymptotic_forms(double m, double p, const std::vector<double>& rewards,
                                 const std::vector<double>* p_vec = nullptr);

}  // namespace sampcr::bounds
