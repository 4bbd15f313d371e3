#include "sampcr/upper_lab.hpp"

#include "sampcr/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sampcr::upper_lab {

FamilyF FamilyF::deterministic(double m, double p) {
    return {0.0, p * m, 10000.0 * m / p};
}

FamilyF FamilyF::randomized(double m, double p) {
    return {p * m / 2.0, p * m, 10000.0 * m / p};
}

double loss(double n1, double z_val, double r1, double r2) {
    if (n1 < 0.0) throw std::invalid_argument("n1 must be >= 0");
    double l = (z_val - n1) * r2;
    if (n1 >= z_val) l += (n1 - z_val) * r1;
    return l;
}

double zstar(double s1, double p) {
    if (s1 < 0.0) throw std::invalid_argument("s1 must be >= 0");
    return (1.0 - p) / p * s1;
}

MappingPolicy zstar_mapping(double m, double p, const FamilyF& fam) {
    MappingPolicy zm;
    long long top = static_cast<long long>(std::ceil(fam.h_hi));
    zm.z.resize(static_cast<std::size_t>(top) + 1);
    for (long long s1 = 0; s1 <= top; ++s1)
        zm.z[static_cast<std::size_t>(s1)] = std::min(m, zstar(static_cast<double>(s1), p));
    return zm;
}

namespace {

void check_family(double m, double p, const FamilyF& fam) {
    if (!(m >= 2.0)) throw std::invalid_argument("m must be >= 2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    if (!(fam.h_lo >= 0.0 && fam.h_lo <= fam.h_hi && fam.h_hi <= p * m + 1e-9))
        throw std::invalid_argument("family range must satisfy 0 <= h_lo <= h_hi <= p*m");
}

// E over s1 ~ Bin(h,p) of loss/denominator; denom_opt chooses the clairvoyant
// denominator (true) or a constant surrogate (false).
double expected_ratio_at_h(const MappingPolicy& zmap, long long h, double m, double p, double r1,
                           double r2, bool denom_opt, double denom_const) {
    Kahan acc;
    for (long long s1 = 0; s1 <= h; ++s1) {
        double w = binom_pmf(h, s1, p);
        double n1 = static_cast<double>(h - s1);
        double l = loss(n1, zmap.at(s1), r1, r2);
        double denom = denom_opt ? n1 * r1 + (m - n1) * r2 : denom_const;
        acc.add(w * l / denom);
    }
    return acc.sum;
}

}  // namespace

FamilyCrResult family_f_cr(const MappingPolicy& zmap, double m, double p, double r1, double r2,
                           const FamilyF& fam) {
    check_family(m, p, fam);
    long long lo = static_cast<long long>(std::ceil(fam.h_lo));
    long long hi = static_cast<long long>(std::floor(fam.h_hi));
    if (static_cast<long long>(zmap.z.size()) <= hi)
        throw std::invalid_argument("mapping domain must cover [0, h_hi]");
    FamilyCrResult res;
    res.max_ratio = -1.0;
    for (long long h = lo; h <= hi; ++h) {
        double v = expected_ratio_at_h(zmap, h, m, p, r1, r2, true, 0.0);
        if (v > res.max_ratio) {  // ties keep the smaller h
            res.max_ratio = v;
            res.worst_h = h;
        }
    }
    res.cr = 1.0 - res.max_ratio;
    return res;
}

ZBounds specific_z_bounds(double m, double p, double r1, double r2) {
    if (!(r1 > r2 && r2 > 0.0)) throw std::invalid_argument("need r1 > r2 > 0");
    const double beta = 0.4215 * (p * p + (1.0 - p) * (1.0 - p)) / (p * (1.0 - p));
    const double sm = std::sqrt(m);
    ZBounds b;
    b.upper = r1 * std::sqrt(1.0 - p) / (r2 * p * sm) +
              std::sqrt(2.0) * beta * r1 / (p * std::sqrt(p) * r2 * m * sm);
    b.lower = std::sqrt(1.0 - p) / (2.0 * std::sqrt(2.0) * p * sm) -
              beta / (p * std::sqrt(p) * m * sm);
    return b;
}

namespace {

double surrogate_max(double m, double p, double r1, double r2, const FamilyF& fam,
                     double denom_const) {
    check_family(m, p, fam);
    MappingPolicy zm = zstar_mapping(m, p, fam);
    long long lo = static_cast<long long>(std::ceil(fam.h_lo));
    long long hi = static_cast<long long>(std::floor(fam.h_hi));
    double best = -1.0;
    for (long long h = lo; h <= hi; ++h)
        best = std::max(best, expected_ratio_at_h(zm, h, m, p, r1, r2, false, denom_const));
    return best;
}

}  // namespace

double surrogate_max_r2(double m, double p, double r1, double r2, const FamilyF& fam) {
    return surrogate_max(m, p, r1, r2, fam, m * r2);
}

double surrogate_max_r1(double m, double p, double r1, double r2, const FamilyF& fam) {
    // The closed-form lower bound measures the type-1 shortfall in
    // protection-level units (the s1/p scale), so the matching exact
    // surrogate carries an extra p in its denominator.
    return surrogate_max(m, p, r1, r2, fam, p * m * r1);
}

MappingPolicy best_tabulated_mapping(double m, double p, double r1, double r2,
                                     const FamilyF& fam, int z_steps) {
    check_family(m, p, fam);
    if (z_steps < 1) throw std::invalid_argument("z_steps must be >= 1");
    const long long lo = static_cast<long long>(std::ceil(fam.h_lo));
    const long long hi = static_cast<long long>(std::floor(fam.h_hi));

    // Seed with the best of the balanced mapping and the constant extremes.
    auto family_obj = [&](const MappingPolicy& cand) {
        double best = -1.0;
        for (long long h = lo; h <= hi; ++h)
            best = std::max(best, expected_ratio_at_h(cand, h, m, p, r1, r2, true, 0.0));
        return best;
    };
    MappingPolicy zm = zstar_mapping(m, p, fam);
    const long long top = static_cast<long long>(zm.z.size()) - 1;
    for (double cval : {0.0, m}) {
        MappingPolicy flat;
        flat.z.assign(zm.z.size(), cval);
        if (family_obj(flat) < family_obj(zm)) zm = std::move(flat);
    }

    // Per-h objective terms, updated incrementally as coordinates change.
    std::vector<double> X(static_cast<std::size_t>(hi - lo) + 1, 0.0);
    for (long long h = lo; h <= hi; ++h)
        X[static_cast<std::size_t>(h - lo)] = expected_ratio_at_h(zm, h, m, p, r1, r2, true, 0.0);
    auto objective = [&]() { return *std::max_element(X.begin(), X.end()); };

    double cur = objective();
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps < 20) {
        improved = false;
        ++sweeps;
        for (long long s1 = 0; s1 <= top; ++s1) {
            double old_z = zm.z[static_cast<std::size_t>(s1)];
            double best_z = old_z, best_obj = cur;
            std::vector<double> best_X;
            for (int j = 0; j <= z_steps; ++j) {
                double cand = m * static_cast<double>(j) / static_cast<double>(z_steps);
                if (cand == old_z) continue;
                // Rebuild the affected per-h terms for this candidate.
                std::vector<double> Xc(X);
                bool ok = true;
                for (long long h = std::max(lo, s1); h <= hi; ++h) {
                    double w = binom_pmf(h, s1, p);
                    double n1 = static_cast<double>(h - s1);
                    double denom = n1 * r1 + (m - n1) * r2;
                    double delta =
                        w * (loss(n1, cand, r1, r2) - loss(n1, old_z, r1, r2)) / denom;
                    Xc[static_cast<std::size_t>(h - lo)] += delta;
                    if (Xc[static_cast<std::size_t>(h - lo)] > best_obj) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                double obj = *std::max_element(Xc.begin(), Xc.end());
                if (obj < best_obj - 1e-15) {
                    best_obj = obj;
                    best_z = cand;
                    best_X = std::move(Xc);
                }
            }
            if (best_z != old_z) {
                zm.z[static_cast<std::size_t>(s1)] = best_z;
                X = std::move(best_X);
                cur = best_obj;
                improved = true;
            }
        }
    }
    return zm;
}

}  // namespace sampcr::upper_lab
