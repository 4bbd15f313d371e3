#include "sampcr/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace sampcr::bounds {

namespace {

void check_args(double m, double p, double r1, double r2) {
    if (!(m >= 2.0)) throw std::invalid_argument("m must be >= 2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (!(r1 > r2)) throw std::invalid_argument("r1 must exceed r2");
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0))
        throw std::invalid_argument("rewards must lie in (0,1)");
}

// Bisect the first y with pred(y) true; pred must be monotone (false then
// true) on [lo, inf). Returns a point on the true side with bracket width
// below rel_tol relative.
template <class Pred>
double bisect_first_true(double lo, Pred pred, double rel_tol) {
    double hi = std::max(lo, 1.0);
    while (!pred(hi)) {
        hi *= 2.0;
        if (hi > 1e18) throw std::runtime_error("bisection bracket overflow");
    }
    // lo side must be false (or the threshold is at/below lo)
    if (pred(lo)) return lo;
    while (hi - lo > rel_tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

BoundConstants constants(double m, double p, double r1, double r2) {
    check_args(m, p, r1, r2);
    BoundConstants c;
    const double sm = std::sqrt(m);
    c.alpha = r2 / r1;
    c.sqrt_m_threshold = sm;
    c.beta = 0.4215 * (p * p + (1.0 - p) * (1.0 - p)) / (p * (1.0 - p));

    // h0: smallest y with y*p - sqrt(y) >= p(m - sqrt(m))/(1-p). The defining
    // inequality is stated with the sides swapped in places, but only this
    // orientation matches the closed form and yields a nontrivial root.
    const double target_h0 = p * (m - sm) / (1.0 - p);
    const double h0_lo = 1.0 / (4.0 * p * p);  // minimizer of y*p - sqrt(y)
    c.h0 = bisect_first_true(
        h0_lo, [&](double y) { return y * p - std::sqrt(y) >= target_h0; }, 1e-13);
    c.h0_closed_form =
        (m - sm) / (1.0 - p) + 1.0 / (2.0 * p * p) +
        std::sqrt(1.0 / (4.0 * p * p * p * p) + (m - sm) / (p * p * (1.0 - p)));

    c.h1 = c.h0 * (1.0 - p) - std::sqrt(p * (1.0 - p) * c.h0) - c.beta / std::sqrt(c.h0);

    // ell0: smallest integer y with (1-p)y - sqrt(y) >= m.
    long long y = 1;
    while ((1.0 - p) * static_cast<double>(y) - std::sqrt(static_cast<double>(y)) < m) {
        ++y;
        if (y > 2000000000LL) throw std::runtime_error("ell0 search overflow");
    }
    c.ell0 = static_cast<double>(y);
    {
        double root = (1.0 + std::sqrt(1.0 + 4.0 * m * (1.0 - p))) / (2.0 * (1.0 - p));
        c.ell0_closed_form = root * root;
    }

    c.ell1 = std::sqrt(p * (1.0 - p) * c.ell0) + c.beta / sm + c.ell0 * p;

    // m1: smallest y >= 1/p^4 with r1 - r2 > 2 / (y^(1/8) sqrt(y^(1/4) p - 1)).
    const double gap = r1 - r2;
    const double m1_lo = 1.0 / (p * p * p * p);
    auto m1_pred = [&](double yv) {
        double q = std::pow(yv, 0.25) * p - 1.0;
        if (q <= 0.0) return false;
        return gap > 2.0 / (std::pow(yv, 0.125) * std::sqrt(q));
    };
    c.m1 = bisect_first_true(m1_lo * (1.0 + 1e-12), m1_pred, 1e-9);
    {
        double a = (4.0 - 3.0 * p) * p;
        double b = (1.0 - p) * std::sqrt(4.0 - 3.0 * p);
        double cc = 4.0 * (1.0 - p) * (1.0 - p) / (gap * gap);
        double root = (b + std::sqrt(b * b + 4.0 * a * cc)) / (2.0 * a);
        c.m1_closed_form = root * root * root * root;
        c.m1_closed_form_mismatch =
            std::abs(c.m1_closed_form - c.m1) > 1e-3 * std::max(1.0, std::abs(c.m1));
    }

    c.V = 1.0 - 2.0 * std::pow(1.0 - p, sm);
    c.W = std::min(1.0 - 1.0 / sm, c.h1 / m);
    return c;
}

TheoremTwoBound theorem2_bound(double m, double p, double r1, double r2) {
    BoundConstants c = constants(m, p, r1, r2);
    const double sm = std::sqrt(m);
    TheoremTwoBound b;

    double cr1_a = std::max(0.0, 1.0 - (1.0 - p) / (p * sm));
    double cr1_b = 1.0 - sm * (r1 - r2) / (sm * r1 + (m - sm) * r2);
    b.cr1 = std::min(cr1_a, cr1_b);

    b.cr2 = std::min((1.0 - 1.0 / sm) * (1.0 - 1.0 / m), c.h1 / m);

    const double fourth_root = std::pow(m, 0.25);
    if (sm * p <= fourth_root) {
        b.cr3_over = 0.0;
        b.cr3_over_degenerate = true;
    } else {
        double d = sm * p - fourth_root;
        double f = 1.0 - 1.0 / (d * d);
        b.cr3_over = (1.0 - 1.0 / m) * (1.0 - 1.0 / m) * f * f * c.W;
    }

    double inner = std::min((1.0 - 1.0 / (c.ell0 * c.ell0)) * c.alpha,
                            1.0 - (1.0 - p) * c.ell1 / (p * m));
    double half_term = 0.5 * (1.0 - 1.0 / (m * m)) * c.W + 0.5 * inner;
    b.cr3_under = c.V * std::min((1.0 - 1.0 / (m * m)) * c.W, half_term);

    b.large_m_regime = m >= c.m1;
    double overall = b.large_m_regime ? std::min({b.cr1, b.cr2, b.cr3_over})
                                      : std::min({b.cr1, b.cr2, b.cr3_under});
    b.overall = std::max(0.0, overall);
    return b;
}

double benchmark_bound(const std::vector<double>& rewards) {
    if (rewards.size() < 2) throw std::invalid_argument("need at least two rewards");
    const int k = static_cast<int>(rewards.size());
    double sum = 0.0;
    for (int i = 1; i < k; ++i) {
        if (!(rewards[i - 1] > rewards[i]))
            throw std::invalid_argument("rewards must be strictly decreasing");
        sum += rewards[i] / rewards[i - 1];
    }
    return 1.0 / (static_cast<double>(k) - sum);
}

SmallPUpperBound smallp_upper_bound(double m, double p, double alpha) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (!(m >= 2.0)) throw std::invalid_argument("m must be >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    SmallPUpperBound r;
    long long h = 1;
    while (static_cast<double>(h) * p +
               std::sqrt(static_cast<double>(h) * std::log(static_cast<double>(h))) <
           1.0)
        ++h;
    r.h_tilde = h;
    auto bound_at = [&](long long ht) {
        double cap = std::min(static_cast<double>(ht), m);
        return m / (m + cap * (1.0 - alpha)) +
               1.0 / (static_cast<double>(ht) * static_cast<double>(ht));
    };
    r.value = bound_at(r.h_tilde);
    r.h_tilde_alt = std::max(1LL, static_cast<long long>(std::floor(1.0 / p)));
    r.value_alt = bound_at(r.h_tilde_alt);
    return r;
}

AsymptoticForms asymptotic_forms(double m, double p, const std::vector<double>& rewards,
                                 const std::vector<double>* p_vec) {
    AsymptoticForms f;
    const double sm = std::sqrt(m);
    f.alg1_cr = 1.0 - 1.0 / (p * sm);
    double p1 = p, p2 = p;
    if (p_vec && p_vec->size() >= 2) {
        p1 = (*p_vec)[0];
        p2 = (*p_vec)[1];
    }
    double pmin = std::min(p1, p2);
    f.hetero_cr = 1.0 - std::max(1.0 / (p1 * sm), 1.0 / (pmin * pmin * m));
    f.realized_cr_ceiling = rewards.size() >= 2 ? rewards[1] : 0.0;
    f.cr3_over_rate = 1.0 - std::max(1.0 / sm, 1.0 / (p * p * m));
    return f;
}

}  // namespace sampcr::bounds
