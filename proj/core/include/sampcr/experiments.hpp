#pragma once

#include "sampcr/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

namespace sampcr::experiments {

struct PeriodRecord {
    long long period_id = 0;
    Counts counts;  // (type-1, type-2) demand for the period
};

class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& msg, long long line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long long line() const { return line_; }

private:
    long long line_;
};

// CSV with header `period,type1_count,type2_count`; UTF-8, no quoting,
// unknown extra columns rejected, period ids strictly increasing.
std::vector<PeriodRecord> load_period_csv(const std::string& path);
std::vector<PeriodRecord> parse_period_csv(std::istream& in);

struct CaseStudyConfig {
    double p = 0.2;
    double gamma = 0.5;      // capacity = gamma * previous-period demand
    long long trials = 1000;
    double r1 = 0.9;
    double r2 = 0.5;
    std::uint64_t seed = 0;
};

struct AlgoStats {
    double avg_cr = 0.0;
    double worst_cr = 0.0;
};

struct PeriodResult {
    long long period_id = 0;
    double m = 0.0;
    double alg1 = 0.0;       // per-period CR (min ratio over trials)
    double benchmark = 0.0;
    double adaptive = 0.0;
    double noisy = 0.0;
};

struct CaseStudyReport {
    std::vector<PeriodResult> periods;
    AlgoStats alg1, benchmark, adaptive, noisy;
};

CaseStudyReport case_study_run(const std::vector<PeriodRecord>& records,
                               const CaseStudyConfig& cfg);

// Uniform(p - w, p + w) with w = 0.3 p sqrt(3) (std 0.3p), clamped into (0,1).
double noisy_p_draw(double p, std::mt19937_64& rng, bool* clamped = nullptr);

struct SweepConfig {
    std::vector<double> m_values;
    std::vector<double> p_values;
    double r1 = 0.9;
    double r2_lo = 0.5, r2_hi = 0.9;  // per-instance uniform draw
    long long instances = 300;
    long long grid_bound = 0;  // 0 -> engine default
    std::uint64_t seed = 0;
};

struct SweepRow {
    double m = 0.0, p = 0.0;
    double mean_exact_cr = 0.0;
    double mean_bound = 0.0;
    double mean_benchmark = 0.0;
};

std::vector<SweepRow> sweep_example1(const SweepConfig& cfg);

struct RobustnessReport {
    double base_cr = 0.0;                           // CR with truthful input
    std::vector<std::pair<double, double>> points;  // (p_hat, CR(p; p_hat))
    double ratio = 0.0;                             // sup of relative degradation
};

RobustnessReport robustness_report(double p, double delta, double m, double r1, double r2,
                                   long long grid_bound = 0, int phat_points = 21);
double robustness_ratio(double p, double delta, double m, double r1, double r2,
                        long long grid_bound = 0, int phat_points = 21);

struct KTypeConfig {
    std::vector<double> m_values;
    double p = 0.3;
    double r1 = 0.9;
    double r2_lo = 0.5, r2_hi = 0.9;
    double r3_lo = 0.1, r3_hi = 0.5;
    long long instances = 20;
    long long orders = 6;            // arrival orders per market (first = worst)
    long long trials_per_order = 30;
    std::uint64_t seed = 0;
};

struct KTypeRow {
    double m = 0.0;
    double mean_cr = 0.0;         // nested-policy CR estimate
    double mean_benchmark = 0.0;  // k-type baseline ceiling
};

std::vector<KTypeRow> example3_ktype(const KTypeConfig& cfg);

}  // namespace sampcr::experiments
