// Command-line entry point: single learning runs, the exact-oracle
// benchmark, PAC-guarantee verification, the F1 grid, and DFA export.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pql/eval.hpp"
#include "pql/lstar.hpp"
#include "pql/plstar.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;

struct TargetFlags {
    std::string target;
    std::optional<int> depth;
    std::string alphabet = "tiny";
};

void add_target_flags(CLI::App* cmd, TargetFlags& flags, bool required = true) {
    auto* opt = cmd->add_option("--target", flags.target,
                                "Target language: arith, json, dyck, date, even_length");
    if (required) opt->required();
    cmd->add_option("--depth", flags.depth, "Nesting depth for arith/json/dyck");
    cmd->add_option("--alphabet", flags.alphabet, "Alphabet: tiny or full")
        ->check(CLI::IsMember({"tiny", "full"}));
}

pql::targets::TargetSpec resolve_target(const TargetFlags& flags) {
    auto name = pql::targets::parse_target_name(flags.target);
    if (!name) throw CLI::ValidationError("--target", "unknown target '" + flags.target + "'");
    pql::targets::TargetSpec spec;
    spec.name = *name;
    spec.depth = flags.depth;
    if (!spec.depth && pql::targets::requires_depth(*name)) {
        spec.depth = pql::eval::desk_depth(*name);
    }
    spec.alphabet = flags.alphabet == "full" ? pql::targets::default_alphabet()
                                             : pql::targets::tiny_alphabet(*name);
    return spec;
}

void apply_desk_lengths(const pql::targets::TargetSpec& spec, pql::SamplerConfig& config,
                        bool lmin_set, bool lmax_set) {
    auto [lo, hi] = pql::eval::desk_length_range(spec.name);
    if (!lmin_set) config.l_min = lo;
    if (!lmax_set) config.l_max = hi;
}

void write_metrics(const std::vector<pql::RunMetrics>& records, const std::string& out_jsonl,
                   const std::string& out_csv, bool record_wall_time) {
    if (!out_jsonl.empty()) {
        std::ofstream out(out_jsonl);
        for (const auto& m : records) out << pql::to_json(m, record_wall_time).dump() << '\n';
    }
    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        out << pql::metrics_csv_header() << '\n';
        for (const auto& m : records) out << pql::to_csv_row(m, record_wall_time) << '\n';
    }
}

void print_metrics_line(const pql::RunMetrics& m) {
    std::cout << "target=" << m.target << " learner=" << pql::to_string(m.learner)
              << " outcome=" << pql::to_string(m.outcome) << " states=" << m.hypothesis_states
              << " queries=" << m.mq_or_pq << " eq=" << m.eq << " table_size=" << m.table_size
              << " cell_comparisons=" << m.cell_comparisons << '\n';
}

bool all_timeouts(const std::vector<pql::RunMetrics>& records) {
    if (records.empty()) return false;
    for (const auto& m : records) {
        if (m.outcome != pql::Outcome::Timeout) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PL*/L* active DFA learning and benchmark harness"};
    app.require_subcommand(1);

    // learn ---------------------------------------------------------------
    auto* learn = app.add_subcommand("learn", "One learning run");
    TargetFlags learn_target;
    add_target_flags(learn, learn_target);
    std::string learner_name = "lstar";
    std::string oracle_name = "exact";
    std::string sampler_name = "prefix";
    pql::SamplerConfig learn_sampler_cfg;
    double learn_epsilon = 0.05, learn_delta = 0.05;
    std::uint64_t learn_seed = 0;
    double learn_timeout = 120.0;
    std::string learn_out, learn_out_csv;
    bool learn_wall = false;
    learn->add_option("--learner", learner_name, "lstar, plstar-std or plstar-opt")
        ->check(CLI::IsMember({"lstar", "plstar-std", "plstar-opt"}));
    learn->add_option("--oracle", oracle_name, "Equivalence oracle: exact or pac")
        ->check(CLI::IsMember({"exact", "pac"}));
    learn->add_option("--sampler", sampler_name, "PAC sampler: uniform or prefix")
        ->check(CLI::IsMember({"uniform", "prefix"}));
    learn->add_option("--p", learn_sampler_cfg.p, "Prefix sampler positive-attempt probability");
    learn->add_option("--m", learn_sampler_cfg.m, "Prefix sampler attempt budget");
    auto* learn_lmin = learn->add_option("--lmin", learn_sampler_cfg.l_min, "Minimum sample length");
    auto* learn_lmax = learn->add_option("--lmax", learn_sampler_cfg.l_max, "Maximum sample length");
    learn->add_option("--epsilon", learn_epsilon, "PAC accuracy");
    learn->add_option("--delta", learn_delta, "PAC confidence");
    learn->add_option("--seed", learn_seed, "Random seed");
    learn->add_option("--timeout-secs", learn_timeout, "Per-run timeout in seconds");
    learn->add_option("--out", learn_out, "Metrics output (JSON lines)");
    learn->add_option("--out-csv", learn_out_csv, "Metrics output (CSV)");
    learn->add_flag("--record-wall-time", learn_wall, "Emit real wall times in metric files");

    // bench ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Exact-oracle benchmark over targets and learners");
    std::string bench_targets = "all";
    std::string bench_alphabet = "tiny";
    std::optional<int> bench_depth;
    std::uint64_t bench_seed = 0;
    double bench_timeout = 120.0;
    std::string bench_out, bench_out_csv;
    bool bench_wall = false;
    bench->add_option("--targets", bench_targets, "'all' or comma-separated target names");
    bench->add_option("--depth", bench_depth, "Override depth for all depth-bounded targets");
    bench->add_option("--alphabet", bench_alphabet, "Alphabet: tiny or full")
        ->check(CLI::IsMember({"tiny", "full"}));
    bench->add_option("--seed", bench_seed, "Random seed");
    bench->add_option("--timeout-secs", bench_timeout, "Per-run timeout in seconds");
    bench->add_option("--out", bench_out, "Metrics output (JSON lines)");
    bench->add_option("--out-csv", bench_out_csv, "Metrics output (CSV)");
    bench->add_flag("--record-wall-time", bench_wall, "Emit real wall times in metric files");

    // pac-verify ----------------------------------------------------------
    auto* pac = app.add_subcommand("pac-verify", "Empirically check the PAC distance guarantee");
    TargetFlags pac_target;
    add_target_flags(pac, pac_target);
    std::string pac_sampler = "prefix";
    pql::SamplerConfig pac_cfg;
    double pac_epsilon = 0.05, pac_delta = 0.05;
    int pac_runs = 30;
    std::uint64_t pac_seed = 0;
    double pac_timeout = 120.0;
    std::string pac_out, pac_out_csv;
    bool pac_wall = false;
    pac->add_option("--sampler", pac_sampler, "uniform or prefix")
        ->check(CLI::IsMember({"uniform", "prefix"}));
    pac->add_option("--p", pac_cfg.p, "Prefix sampler positive-attempt probability");
    pac->add_option("--m", pac_cfg.m, "Prefix sampler attempt budget");
    auto* pac_lmin = pac->add_option("--lmin", pac_cfg.l_min, "Minimum sample length");
    auto* pac_lmax = pac->add_option("--lmax", pac_cfg.l_max, "Maximum sample length");
    pac->add_option("--epsilon", pac_epsilon, "PAC accuracy");
    pac->add_option("--delta", pac_delta, "PAC confidence");
    pac->add_option("--runs", pac_runs, "Number of learning runs");
    pac->add_option("--seed", pac_seed, "Random seed");
    pac->add_option("--timeout-secs", pac_timeout, "Per-run timeout in seconds");
    pac->add_option("--out", pac_out, "Report output (JSON)");
    pac->add_option("--out-csv", pac_out_csv, "Per-run metrics output (CSV)");
    pac->add_flag("--record-wall-time", pac_wall, "Emit real wall times in metric files");

    // f1-grid -------------------------------------------------------------
    auto* grid = app.add_subcommand("f1-grid", "Mean F1 over a (sampler, epsilon, delta) grid");
    TargetFlags grid_target;
    add_target_flags(grid, grid_target);
    std::vector<std::string> grid_samplers = {"uniform", "prefix"};
    std::vector<double> grid_ps = {1.0};
    std::vector<double> grid_epsilons = {0.05};
    std::vector<double> grid_deltas = {0.05};
    int grid_repeats = 5;
    pql::SamplerConfig grid_cfg;
    std::uint64_t grid_seed = 0;
    double grid_timeout = 120.0;
    int grid_f1_samples = 1000;
    std::string grid_out, grid_out_csv;
    grid->add_option("--sampler", grid_samplers, "Samplers to grid over (uniform and/or prefix)")
        ->check(CLI::IsMember({"uniform", "prefix"}));
    grid->add_option("--p", grid_ps, "Prefix sampler p values to grid over");
    grid->add_option("--epsilon", grid_epsilons, "Epsilon values");
    grid->add_option("--delta", grid_deltas, "Delta values");
    grid->add_option("--repeats", grid_repeats, "Runs per grid cell");
    grid->add_option("--m", grid_cfg.m, "Prefix sampler attempt budget");
    auto* grid_lmin = grid->add_option("--lmin", grid_cfg.l_min, "Minimum sample length");
    auto* grid_lmax = grid->add_option("--lmax", grid_cfg.l_max, "Maximum sample length");
    grid->add_option("--runs", grid_f1_samples, "Samples per side for each F1 estimate");
    grid->add_option("--seed", grid_seed, "Random seed");
    grid->add_option("--timeout-secs", grid_timeout, "Per-run timeout in seconds");
    grid->add_option("--out", grid_out, "Grid output (JSON)");
    grid->add_option("--out-csv", grid_out_csv, "Grid output (CSV)");

    // export-dfa ----------------------------------------------------------
    auto* exp = app.add_subcommand("export-dfa", "Print a target DFA");
    TargetFlags exp_target;
    add_target_flags(exp, exp_target);
    std::string exp_format = "dot";
    exp->add_option("--format", exp_format, "Output format: dot")
        ->check(CLI::IsMember({"dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (learn->parsed()) {
            pql::targets::TargetSpec spec = resolve_target(learn_target);
            apply_desk_lengths(spec, learn_sampler_cfg, learn_lmin->count() > 0,
                               learn_lmax->count() > 0);
            pql::Dfa target = pql::targets::build(spec);
            pql::Teacher teacher(target);
            std::mt19937_64 rng = pql::eval::child_rng(learn_seed, 0);
            pql::PacParams params{learn_epsilon, learn_delta, 1};
            pql::Sampler sampler =
                sampler_name == "uniform"
                    ? pql::make_pseudo_uniform_sampler(learn_sampler_cfg.l_min,
                                                       learn_sampler_cfg.l_max, target.alphabet)
                    : pql::make_prefix_sampler(learn_sampler_cfg, teacher);
            pql::EqOracle oracle = oracle_name == "exact"
                                       ? pql::make_exact_oracle(teacher)
                                       : pql::make_pac_oracle(teacher, params, sampler, rng);
            pql::Outcome success = oracle_name == "exact" ? pql::Outcome::ExactSuccess
                                                          : pql::Outcome::PacSuccess;
            pql::LearnResult result;
            if (learner_name == "lstar") {
                pql::LstarOptions options;
                options.timeout_secs = learn_timeout;
                options.success_outcome = success;
                result = pql::lstar_learn(teacher, oracle, options);
            } else {
                pql::PlstarOptions options;
                options.timeout_secs = learn_timeout;
                options.success_outcome = success;
                pql::PlMode mode = learner_name == "plstar-std" ? pql::PlMode::Standard
                                                                : pql::PlMode::Optimised;
                result = pql::plstar_learn(teacher, oracle, mode, options);
            }
            result.metrics.target = pql::targets::target_label(spec);
            result.metrics.seed = learn_seed;
            print_metrics_line(result.metrics);
            write_metrics({result.metrics}, learn_out, learn_out_csv, learn_wall);
            return result.metrics.outcome == pql::Outcome::Timeout ? kExitTimeout : kExitOk;
        }

        if (bench->parsed()) {
            std::vector<pql::targets::TargetSpec> specs;
            std::vector<std::string> names;
            if (bench_targets == "all") {
                names = {"arith", "json", "dyck", "date", "even_length"};
            } else {
                std::string rest = bench_targets;
                while (!rest.empty()) {
                    size_t comma = rest.find(',');
                    names.push_back(rest.substr(0, comma));
                    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
                }
            }
            for (const std::string& n : names) {
                TargetFlags flags;
                flags.target = n;
                flags.depth = bench_depth;
                flags.alphabet = bench_alphabet;
                specs.push_back(resolve_target(flags));
            }
            auto records = pql::eval::run_exact_benchmark(specs, bench_timeout, bench_seed);
            for (const auto& m : records) print_metrics_line(m);
            write_metrics(records, bench_out, bench_out_csv, bench_wall);
            return all_timeouts(records) ? kExitTimeout : kExitOk;
        }

        if (pac->parsed()) {
            pql::targets::TargetSpec spec = resolve_target(pac_target);
            apply_desk_lengths(spec, pac_cfg, pac_lmin->count() > 0, pac_lmax->count() > 0);
            auto kind = *pql::eval::parse_sampler(pac_sampler);
            std::vector<pql::RunMetrics> run_records;
            pql::eval::PacReport report =
                pql::eval::verify_pac(spec, kind, pac_cfg, pac_epsilon, pac_delta, pac_runs, 1000,
                                      pac_seed, pac_timeout, &run_records);
            std::cout << "target=" << pql::targets::target_label(spec) << " sampler=" << pac_sampler
                      << " runs=" << report.runs
                      << " fraction_within_epsilon=" << report.fraction_within_epsilon << '\n';
            if (!pac_out.empty()) {
                nlohmann::json j{{"target", pql::targets::target_label(spec)},
                                 {"sampler", pac_sampler},
                                 {"epsilon", pac_epsilon},
                                 {"delta", pac_delta},
                                 {"runs", report.runs},
                                 {"distances", report.distances},
                                 {"fraction_within_epsilon", report.fraction_within_epsilon}};
                std::ofstream out(pac_out);
                out << j.dump(2) << '\n';
            }
            write_metrics(run_records, "", pac_out_csv, pac_wall);
            return all_timeouts(run_records) ? kExitTimeout : kExitOk;
        }

        if (grid->parsed()) {
            pql::targets::TargetSpec spec = resolve_target(grid_target);
            apply_desk_lengths(spec, grid_cfg, grid_lmin->count() > 0, grid_lmax->count() > 0);
            std::vector<pql::eval::GridSampler> samplers;
            for (const std::string& s : grid_samplers) {
                auto kind = *pql::eval::parse_sampler(s);
                if (kind == pql::eval::SamplerKind::PseudoUniform) {
                    pql::SamplerConfig cfg = grid_cfg;
                    cfg.p = 0.0;
                    samplers.push_back({kind, cfg});
                } else {
                    for (double p : grid_ps) {
                        pql::SamplerConfig cfg = grid_cfg;
                        cfg.p = p;
                        samplers.push_back({kind, cfg});
                    }
                }
            }
            auto cells = pql::eval::f1_grid(spec, samplers, grid_epsilons, grid_deltas,
                                            grid_repeats, grid_timeout, grid_cfg.l_min,
                                            grid_cfg.l_max, grid_f1_samples, grid_seed);
            int total_timeouts = 0;
            int total_runs = 0;
            for (const auto& cell : cells) {
                std::cout << pql::eval::to_csv_row(cell) << '\n';
                total_timeouts += cell.timeouts;
                total_runs += cell.runs;
            }
            if (!grid_out_csv.empty()) {
                std::ofstream out(grid_out_csv);
                out << pql::eval::grid_csv_header() << '\n';
                for (const auto& cell : cells) out << pql::eval::to_csv_row(cell) << '\n';
            }
            if (!grid_out.empty()) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& cell : cells) {
                    j.push_back({{"target", cell.target},
                                 {"sampler", pql::eval::to_string(cell.sampler)},
                                 {"p", cell.p},
                                 {"epsilon", cell.epsilon},
                                 {"delta", cell.delta},
                                 {"mean_f1", cell.mean_f1},
                                 {"runs", cell.runs},
                                 {"timeouts", cell.timeouts}});
                }
                std::ofstream out(grid_out);
                out << j.dump(2) << '\n';
            }
            return (total_runs > 0 && total_timeouts == total_runs) ? kExitTimeout : kExitOk;
        }

        if (exp->parsed()) {
            pql::targets::TargetSpec spec = resolve_target(exp_target);
            pql::Dfa target = pql::targets::build(spec);
            std::cout << pql::to_dot(target);
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
