#pragma once

#include <vector>

namespace sampcr::upper_lab {

// Adversarial instance family: type-1 market count ranges over [h_lo, h_hi]
// while the type-2 supply is effectively unlimited (always fills capacity).
struct FamilyF {
    double h_lo = 0.0;
    double h_hi = 0.0;
    double ell_nominal = 0.0;  // bookkeeping only; modeled as infinite supply

    static FamilyF deterministic(double m, double p);  // h in [0, p*m]
    static FamilyF randomized(double m, double p);     // h in [p*m/2, p*m]
};

// Deterministic algorithm as a map from the observed sample count s1 to the
// amount protected for type 1, tabulated over integer s1.
struct MappingPolicy {
    std::vector<double> z;  // index s1, each value in [0, m]

    double at(long long s1) const { return z.at(static_cast<std::size_t>(s1)); }
};

// Shortfall/overprotection cost against the clairvoyant allocation.
double loss(double n1, double z_val, double r1, double r2);

// The balanced mapping (1-p)/p * s1 (uncapped; cap at m when tabulating).
double zstar(double s1, double p);

MappingPolicy zstar_mapping(double m, double p, const FamilyF& fam);

struct FamilyCrResult {
    double cr = 0.0;
    long long worst_h = 0;
    double max_ratio = 0.0;  // max over h of E[loss/opt]
};

// CR of a mapping on the family: 1 - max_h E_{s1~Bin(h,p)}[loss/opt], with
// n1 = h - s1 deterministic and type 2 always filling leftover capacity.
FamilyCrResult family_f_cr(const MappingPolicy& zmap, double m, double p, double r1, double r2,
                           const FamilyF& fam);

struct ZBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Closed-form sandwich on the balanced mapping's worst-case loss (normalized
// by m*r1 below, m*r2 above).
ZBounds specific_z_bounds(double m, double p, double r1, double r2);

// Exact surrogate maxima matching the sandwich denominators: max_h E[L]
// over m*r2 for the upper comparison and over p*m*r1 for the lower one
// (the lower branch works at the protection-level scale).
double surrogate_max_r2(double m, double p, double r1, double r2, const FamilyF& fam);
double surrogate_max_r1(double m, double p, double r1, double r2, const FamilyF& fam);

// Coordinate-descent search over tabulated mappings (per-s1 candidate grid of
// z_steps levels plus the balanced value), started from the balanced mapping.
MappingPolicy best_tabulated_mapping(double m, double p, double r1, double r2,
                                     const FamilyF& fam, int z_steps);

}  // namespace sampcr::upper_lab
