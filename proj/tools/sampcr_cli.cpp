// Command-line front end: parse a run configuration, dispatch to the engines,
// serialize the report as JSON or CSV.
//
// Exit codes: 0 success, 1 engine error, 2 usage error, 3 IO error.

#include "sampcr/algorithms.hpp"
#include "sampcr/bounds.hpp"
#include "sampcr/cr_engine.hpp"
#include "sampcr/experiments.hpp"
#include "sampcr/model.hpp"
#include "sampcr/rng.hpp"
#include "sampcr/upper_lab.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240501ULL;  // documented default

struct OutputSpec {
    std::string path;    // empty -> stdout
    std::string format;  // "json" or "csv"
};

// Relative output paths resolve against SAMPCR_OUT_DIR when set.
std::string resolve_path(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    const char* dir = std::getenv("SAMPCR_OUT_DIR");
    if (!dir || !*dir) return path;
    return (std::filesystem::path(dir) / p).string();
}

int write_output(const OutputSpec& out, const ordered_json& report,
                 const std::string& csv_text) {
    std::string body =
        out.format == "json" ? report.dump(2) + "\n" : csv_text;
    if (out.path.empty()) {
        std::cout << body;
        return 0;
    }
    std::string full = resolve_path(out.path);
    std::ofstream f(full, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << full << "'\n";
        return 3;
    }
    f << body;
    if (!f) {
        std::cerr << "error: write failed for '" << full << "'\n";
        return 3;
    }
    return 0;
}

std::string csv_header_block(const ordered_json& config) {
    std::ostringstream os;
    os << "# schema_version=1\n";
    for (auto it = config.begin(); it != config.end(); ++it) {
        os << "# " << it.key() << "=";
        if (it->is_string())
            os << it->get<std::string>();
        else
            os << it->dump();
        os << "\n";
    }
    return os.str();
}

ordered_json base_report(const std::string& command, const ordered_json& config) {
    ordered_json rep;
    rep["schema_version"] = 1;
    rep["command"] = command;
    rep["config"] = config;
    return rep;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw CLI::ValidationError("list", "expected comma-separated numbers");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"competitive-ratio toolkit for allocation with sampled test periods"};
    app.require_subcommand(1);

    OutputSpec out;
    out.format = "json";
    std::uint64_t seed = kDefaultSeed;
    app.add_option("--output", out.path, "output file (default: stdout)");
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "master seed (per-trial streams are derived from it)");

    auto prob_check = CLI::Range(1e-9, 1.0 - 1e-9);
    auto reward_check = CLI::Range(1e-9, 1.0 - 1e-9);

    // ---- cr-exact ----
    double m = 0, p = 0, r1 = 0, r2 = 0;
    long long h_max = -1, ell_max = -1;
    bool emit_grid = false;
    auto* cmd_cr = app.add_subcommand("cr-exact", "exact competitive ratio on an (h,ell) grid");
    cmd_cr->add_option("--m", m, "resource units")->required()->check(CLI::Range(2.0, 1e9));
    cmd_cr->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_cr->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_cr->add_option("--r2", r2, "type-2 reward")->required()->check(reward_check);
    cmd_cr->add_option("--h-max", h_max, "grid bound for h (default 3m/(1-p))");
    cmd_cr->add_option("--ell-max", ell_max, "grid bound for ell (default 3m/(1-p))");
    cmd_cr->add_flag("--emit-grid", emit_grid, "include every grid cell in the report");

    // ---- bounds ----
    auto* cmd_b = app.add_subcommand("bounds", "theoretical bound calculators");
    cmd_b->add_option("--m", m, "resource units")->required()->check(CLI::Range(2.0, 1e9));
    cmd_b->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_b->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_b->add_option("--r2", r2, "type-2 reward")->required()->check(reward_check);

    // ---- sweep ----
    std::string m_list, p_list;
    double r2_lo = 0.5, r2_hi = 0.9;
    long long instances = 300, grid_bound = 0;
    auto* cmd_s = app.add_subcommand("sweep", "mean CR / bound / baseline over a grid");
    cmd_s->add_option("--m-list", m_list, "comma-separated m values")->required();
    cmd_s->add_option("--p-list", p_list, "comma-separated p values")->required();
    cmd_s->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_s->add_option("--r2-lo", r2_lo, "lower end of the r2 draw");
    cmd_s->add_option("--r2-hi", r2_hi, "upper end of the r2 draw");
    cmd_s->add_option("--instances", instances, "instances per grid point");
    cmd_s->add_option("--grid", grid_bound, "override grid bound for the exact engine");

    // ---- upper-lab ----
    std::string family = "det";
    int search_steps = 0;
    auto* cmd_u = app.add_subcommand("upper-lab", "adversarial-family mapping analysis");
    cmd_u->add_option("--m", m, "resource units")->required()->check(CLI::Range(2.0, 1e9));
    cmd_u->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_u->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_u->add_option("--r2", r2, "type-2 reward")->required()->check(reward_check);
    cmd_u->add_option("--family", family, "market-count range")
        ->check(CLI::IsMember({"det", "rand"}));
    cmd_u->add_option("--search-steps", search_steps,
                      "per-s1 grid levels for the mapping search (0 = skip)");

    // ---- case-study ----
    std::string csv_path;
    double gamma = 0.5;
    long long trials = 1000;
    auto* cmd_cs = app.add_subcommand("case-study", "per-period pipeline over a demand CSV");
    cmd_cs->add_option("--csv", csv_path, "period,type1_count,type2_count file")->required();
    cmd_cs->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_cs->add_option("--gamma", gamma, "scarcity factor")->check(prob_check);
    cmd_cs->add_option("--trials", trials, "instances per period");
    cmd_cs->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_cs->add_option("--r2", r2, "type-2 reward")->required()->check(reward_check);

    // ---- robustness ----
    double delta = 0.1;
    int phat_points = 21;
    auto* cmd_r = app.add_subcommand("robustness", "CR degradation under misreported p");
    cmd_r->add_option("--m", m, "resource units")->required()->check(CLI::Range(2.0, 1e9));
    cmd_r->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_r->add_option("--delta", delta, "relative error radius")->check(CLI::Range(0.0, 0.999));
    cmd_r->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_r->add_option("--r2", r2, "type-2 reward")->required()->check(reward_check);
    cmd_r->add_option("--grid", grid_bound, "override grid bound");
    cmd_r->add_option("--phat-points", phat_points, "grid density over the p-hat interval");

    // ---- ktype ----
    double r3_lo = 0.1, r3_hi = 0.5;
    long long orders = 6, trials_per_order = 30;
    auto* cmd_k = app.add_subcommand("ktype", "three-type nested-policy estimate");
    cmd_k->add_option("--m-list", m_list, "comma-separated m values")->required();
    cmd_k->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_k->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_k->add_option("--r2-lo", r2_lo, "lower end of the r2 draw");
    cmd_k->add_option("--r2-hi", r2_hi, "upper end of the r2 draw");
    cmd_k->add_option("--r3-lo", r3_lo, "lower end of the r3 draw");
    cmd_k->add_option("--r3-hi", r3_hi, "upper end of the r3 draw");
    cmd_k->add_option("--instances", instances, "instances per grid point");
    cmd_k->add_option("--orders", orders, "arrival orders per market combo");
    cmd_k->add_option("--trials", trials_per_order, "trials per order");

    // ---- realized-cr ----
    long long rh = 0, rell = 0;
    auto* cmd_rc = app.add_subcommand("realized-cr", "realized-reward CR estimate");
    cmd_rc->add_option("--m", m, "resource units")->required()->check(CLI::Range(2.0, 1e9));
    cmd_rc->add_option("--p", p, "sampling probability")->required()->check(prob_check);
    cmd_rc->add_option("--r1", r1, "type-1 reward")->required()->check(reward_check);
    cmd_rc->add_option("--r2", r2, "type-2 reward")->required()->check(reward_check);
    cmd_rc->add_option("--market-h", rh, "type-1 market count")->required();
    cmd_rc->add_option("--market-ell", rell, "type-2 market count")->required();
    cmd_rc->add_option("--trials", trials, "Monte Carlo trials");

    // global options (--seed/--output/--format) may trail the subcommand
    for (auto* sc : {cmd_cr, cmd_b, cmd_s, cmd_u, cmd_cs, cmd_r, cmd_k, cmd_rc})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*cmd_cr) {
            if (!(r1 > r2)) throw std::invalid_argument("r1 must exceed r2");
            sampcr::ProblemInstance inst = sampcr::ProblemInstance::two_type(m, p, r1, r2);
            long long hb = h_max >= 0 ? h_max : sampcr::cr_engine::default_grid_bound(inst);
            long long lb = ell_max >= 0 ? ell_max : sampcr::cr_engine::default_grid_bound(inst);
            ordered_json config = {{"m", m},        {"p", p},          {"r1", r1},
                                   {"r2", r2},      {"h_max", hb},     {"ell_max", lb},
                                   {"emit_grid", emit_grid}, {"seed", seed}};
            auto rep = sampcr::cr_engine::exact_cr(inst, hb, lb, emit_grid);
            ordered_json j = base_report("cr-exact", config);
            j["results"] = {{"infimum", rep.infimum},
                            {"argmin_h", rep.argmin_h},
                            {"argmin_ell", rep.argmin_ell}};
            std::ostringstream csv;
            csv << csv_header_block(config);
            if (emit_grid) {
                ordered_json grid = ordered_json::array();
                csv << "h,ell,ratio\n";
                for (long long hh = 0; hh <= rep.h_max; ++hh)
                    for (long long ll = 0; ll <= rep.ell_max; ++ll) {
                        double v = rep.ratios[static_cast<size_t>(hh) *
                                                  static_cast<size_t>(rep.ell_max + 1) +
                                              static_cast<size_t>(ll)];
                        grid.push_back({hh, ll, v});
                        csv << hh << "," << ll << "," << v << "\n";
                    }
                j["results"]["grid"] = std::move(grid);
            } else {
                csv << "infimum,argmin_h,argmin_ell\n"
                    << rep.infimum << "," << rep.argmin_h << "," << rep.argmin_ell << "\n";
            }
            return write_output(out, j, csv.str());
        }

        if (*cmd_b) {
            ordered_json config = {{"m", m}, {"p", p}, {"r1", r1}, {"r2", r2}, {"seed", seed}};
            auto c = sampcr::bounds::constants(m, p, r1, r2);
            auto t = sampcr::bounds::theorem2_bound(m, p, r1, r2);
            auto sp = sampcr::bounds::smallp_upper_bound(m, p, r2 / r1);
            auto af = sampcr::bounds::asymptotic_forms(m, p, {r1, r2});
            ordered_json j = base_report("bounds", config);
            j["results"] = {
                {"constants",
                 {{"beta", c.beta},
                  {"h0", c.h0},
                  {"h0_closed_form", c.h0_closed_form},
                  {"h1", c.h1},
                  {"ell0", c.ell0},
                  {"ell0_closed_form", c.ell0_closed_form},
                  {"ell1", c.ell1},
                  {"m1", c.m1},
                  {"m1_closed_form", c.m1_closed_form},
                  {"m1_closed_form_mismatch", c.m1_closed_form_mismatch},
                  {"V", c.V},
                  {"W", c.W},
                  {"alpha", c.alpha}}},
                {"lower_bound",
                 {{"cr1", t.cr1},
                  {"cr2", t.cr2},
                  {"cr3_over", t.cr3_over},
                  {"cr3_under", t.cr3_under},
                  {"overall", t.overall},
                  {"large_m_regime", t.large_m_regime},
                  {"cr3_over_degenerate", t.cr3_over_degenerate}}},
                {"benchmark", sampcr::bounds::benchmark_bound({r1, r2})},
                {"smallp_upper",
                 {{"value", sp.value},
                  {"h_tilde", sp.h_tilde},
                  {"value_alt", sp.value_alt},
                  {"h_tilde_alt", sp.h_tilde_alt}}},
                {"asymptotic",
                 {{"alg1_cr", af.alg1_cr},
                  {"hetero_cr", af.hetero_cr},
                  {"realized_cr_ceiling", af.realized_cr_ceiling},
                  {"cr3_over_rate", af.cr3_over_rate}}}};
            if (c.m1_closed_form_mismatch)
                std::cerr << "warning: m1 search and closed form disagree beyond 1e-3; "
                             "the search value is reported\n";
            std::ostringstream csv;
            csv << csv_header_block(config)
                << "beta,h0,h1,ell0,ell1,m1,V,W,cr1,cr2,cr3_over,cr3_under,overall,"
                   "benchmark,smallp_upper\n"
                << c.beta << "," << c.h0 << "," << c.h1 << "," << c.ell0 << "," << c.ell1
                << "," << c.m1 << "," << c.V << "," << c.W << "," << t.cr1 << "," << t.cr2
                << "," << t.cr3_over << "," << t.cr3_under << "," << t.overall << ","
                << sampcr::bounds::benchmark_bound({r1, r2}) << "," << sp.value << "\n";
            return write_output(out, j, csv.str());
        }

        if (*cmd_s) {
            sampcr::experiments::SweepConfig cfg;
            cfg.m_values = parse_list(m_list);
            cfg.p_values = parse_list(p_list);
            cfg.r1 = r1;
            cfg.r2_lo = r2_lo;
            cfg.r2_hi = r2_hi;
            cfg.instances = instances;
            cfg.grid_bound = grid_bound;
            cfg.seed = seed;
            ordered_json config = {{"m_list", m_list},   {"p_list", p_list},
                                   {"r1", r1},           {"r2_lo", r2_lo},
                                   {"r2_hi", r2_hi},     {"instances", instances},
                                   {"grid", grid_bound}, {"seed", seed}};
            auto rows = sampcr::experiments::sweep_example1(cfg);
            ordered_json j = base_report("sweep", config);
            ordered_json arr = ordered_json::array();
            std::ostringstream csv;
            csv << csv_header_block(config) << "m,p,mean_exact_cr,mean_bound,mean_benchmark\n";
            for (const auto& row : rows) {
                arr.push_back({{"m", row.m},
                               {"p", row.p},
                               {"mean_exact_cr", row.mean_exact_cr},
                               {"mean_bound", row.mean_bound},
                               {"mean_benchmark", row.mean_benchmark}});
                csv << row.m << "," << row.p << "," << row.mean_exact_cr << ","
                    << row.mean_bound << "," << row.mean_benchmark << "\n";
            }
            j["results"] = {{"rows", std::move(arr)}};
            return write_output(out, j, csv.str());
        }

        if (*cmd_u) {
            if (!(r1 > r2)) throw std::invalid_argument("r1 must exceed r2");
            auto fam = family == "det" ? sampcr::upper_lab::FamilyF::deterministic(m, p)
                                       : sampcr::upper_lab::FamilyF::randomized(m, p);
            ordered_json config = {{"m", m},           {"p", p},
                                   {"r1", r1},         {"r2", r2},
                                   {"family", family}, {"search_steps", search_steps},
                                   {"seed", seed}};
            auto zm = sampcr::upper_lab::zstar_mapping(m, p, fam);
            auto res = sampcr::upper_lab::family_f_cr(zm, m, p, r1, r2, fam);
            auto zb = sampcr::upper_lab::specific_z_bounds(m, p, r1, r2);
            double sr2 = sampcr::upper_lab::surrogate_max_r2(m, p, r1, r2, fam);
            double sr1 = sampcr::upper_lab::surrogate_max_r1(m, p, r1, r2, fam);
            ordered_json j = base_report("upper-lab", config);
            j["results"] = {{"balanced_mapping_cr", res.cr},
                            {"worst_h", res.worst_h},
                            {"max_ratio", res.max_ratio},
                            {"sandwich_lower", zb.lower},
                            {"sandwich_upper", zb.upper},
                            {"surrogate_max_r1", sr1},
                            {"surrogate_max_r2", sr2}};
            if (search_steps > 0) {
                auto best =
                    sampcr::upper_lab::best_tabulated_mapping(m, p, r1, r2, fam, search_steps);
                auto bres = sampcr::upper_lab::family_f_cr(best, m, p, r1, r2, fam);
                j["results"]["search_cr"] = bres.cr;
                j["results"]["search_gain"] = bres.cr - res.cr;
            }
            std::ostringstream csv;
            csv << csv_header_block(config)
                << "balanced_mapping_cr,worst_h,max_ratio,sandwich_lower,sandwich_upper,"
                   "surrogate_max_r1,surrogate_max_r2\n"
                << res.cr << "," << res.worst_h << "," << res.max_ratio << "," << zb.lower
                << "," << zb.upper << "," << sr1 << "," << sr2 << "\n";
            return write_output(out, j, csv.str());
        }

        if (*cmd_cs) {
            if (!(r1 > r2)) throw std::invalid_argument("r1 must exceed r2");
            auto records = sampcr::experiments::load_period_csv(csv_path);
            sampcr::experiments::CaseStudyConfig cfg;
            cfg.p = p;
            cfg.gamma = gamma;
            cfg.trials = trials;
            cfg.r1 = r1;
            cfg.r2 = r2;
            cfg.seed = seed;
            ordered_json config = {{"csv", csv_path}, {"p", p},       {"gamma", gamma},
                                   {"trials", trials}, {"r1", r1},    {"r2", r2},
                                   {"seed", seed}};
            auto rep = sampcr::experiments::case_study_run(records, cfg);
            ordered_json j = base_report("case-study", config);
            ordered_json periods = ordered_json::array();
            std::ostringstream csv;
            csv << csv_header_block(config) << "period,m,alg1,benchmark,adaptive,noisy\n";
            for (const auto& pr : rep.periods) {
                periods.push_back({{"period", pr.period_id},
                                   {"m", pr.m},
                                   {"alg1", pr.alg1},
                                   {"benchmark", pr.benchmark},
                                   {"adaptive", pr.adaptive},
                                   {"noisy", pr.noisy}});
                csv << pr.period_id << "," << pr.m << "," << pr.alg1 << "," << pr.benchmark
                    << "," << pr.adaptive << "," << pr.noisy << "\n";
            }
            auto stats = [](const sampcr::experiments::AlgoStats& s) {
                return ordered_json{{"avg_cr", s.avg_cr}, {"worst_cr", s.worst_cr}};
            };
            j["results"] = {{"periods", std::move(periods)},
                            {"alg1", stats(rep.alg1)},
                            {"benchmark", stats(rep.benchmark)},
                            {"adaptive", stats(rep.adaptive)},
                            {"noisy", stats(rep.noisy)}};
            return write_output(out, j, csv.str());
        }

        if (*cmd_r) {
            if (!(r1 > r2)) throw std::invalid_argument("r1 must exceed r2");
            ordered_json config = {{"m", m},         {"p", p},
                                   {"delta", delta}, {"r1", r1},
                                   {"r2", r2},       {"grid", grid_bound},
                                   {"phat_points", phat_points}, {"seed", seed}};
            auto rep = sampcr::experiments::robustness_report(p, delta, m, r1, r2, grid_bound,
                                                              phat_points);
            ordered_json j = base_report("robustness", config);
            ordered_json pts = ordered_json::array();
            std::ostringstream csv;
            csv << csv_header_block(config) << "p_hat,cr\n";
            for (auto& [ph, cr] : rep.points) {
                pts.push_back({{"p_hat", ph}, {"cr", cr}});
                csv << ph << "," << cr << "\n";
            }
            j["results"] = {{"base_cr", rep.base_cr},
                            {"ratio", rep.ratio},
                            {"points", std::move(pts)}};
            return write_output(out, j, csv.str());
        }

        if (*cmd_k) {
            sampcr::experiments::KTypeConfig cfg;
            cfg.m_values = parse_list(m_list);
            cfg.p = p;
            cfg.r1 = r1;
            cfg.r2_lo = r2_lo;
            cfg.r2_hi = r2_hi;
            cfg.r3_lo = r3_lo;
            cfg.r3_hi = r3_hi;
            cfg.instances = instances;
            cfg.orders = orders;
            cfg.trials_per_order = trials_per_order;
            cfg.seed = seed;
            ordered_json config = {{"m_list", m_list}, {"p", p},
                                   {"r1", r1},         {"r2_lo", r2_lo},
                                   {"r2_hi", r2_hi},   {"r3_lo", r3_lo},
                                   {"r3_hi", r3_hi},   {"instances", instances},
                                   {"orders", orders}, {"trials", trials_per_order},
                                   {"seed", seed}};
            auto rows = sampcr::experiments::example3_ktype(cfg);
            ordered_json j = base_report("ktype", config);
            ordered_json arr = ordered_json::array();
            std::ostringstream csv;
            csv << csv_header_block(config) << "m,mean_cr,mean_benchmark\n";
            for (const auto& row : rows) {
                arr.push_back({{"m", row.m},
                               {"mean_cr", row.mean_cr},
                               {"mean_benchmark", row.mean_benchmark}});
                csv << row.m << "," << row.mean_cr << "," << row.mean_benchmark << "\n";
            }
            j["results"] = {{"rows", std::move(arr)}};
            return write_output(out, j, csv.str());
        }

        if (*cmd_rc) {
            if (!(r1 > r2)) throw std::invalid_argument("r1 must exceed r2");
            sampcr::ProblemInstance inst = sampcr::ProblemInstance::two_type(m, p, r1, r2);
            ordered_json config = {{"m", m},   {"p", p},     {"r1", r1},
                                   {"r2", r2}, {"h", rh},    {"ell", rell},
                                   {"trials", trials}, {"seed", seed}};
            std::mt19937_64 rng = sampcr::substream(seed, 0);
            auto est = sampcr::cr_engine::realized_cr_estimate(inst, rh, rell, trials, rng);
            ordered_json j = base_report("realized-cr", config);
            j["results"] = {{"estimate", est.value},
                            {"std_error", est.std_error},
                            {"trials", est.trials}};
            std::ostringstream csv;
            csv << csv_header_block(config) << "estimate,std_error,trials\n"
                << est.value << "," << est.std_error << "," << est.trials << "\n";
            return write_output(out, j, csv.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
