#include "pql/eval.hpp"

#include <sstream>
#include <stdexcept>

namespace pql::eval {

const char* to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::PseudoUniform: return "uniform";
        case SamplerKind::PrefixBased: return "prefix";
    }
    return "?";
}

std::optional<SamplerKind> parse_sampler(const std::string& s) {
    if (s == "uniform") return SamplerKind::PseudoUniform;
    if (s == "prefix") return SamplerKind::PrefixBased;
    return std::nullopt;
}

double f1_score(double precision, double recall) {
    if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0) {
        throw std::invalid_argument("precision and recall must lie in [0, 1]");
    }
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

F1Report estimate_f1(const Dfa& hypothesis, const Dfa& target, int l_min, int l_max, int n,
                     std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("sample count must be at least 1");
    UniformWordSampler target_sampler(target, l_min, l_max);
    if (target_sampler.empty()) {
        throw std::invalid_argument("target accepts no string in the length range");
    }
    UniformWordSampler hyp_sampler(hypothesis, l_min, l_max);

    F1Report report;
    report.sample_size = n;
    report.l_min = l_min;
    report.l_max = l_max;

    if (hyp_sampler.empty()) {
        report.precision = 1.0;
    } else {
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            if (run(target, hyp_sampler.draw(rng))) hits += 1;
        }
        report.precision = static_cast<double>(hits) / n;
    }

    int hits = 0;
    for (int i = 0; i < n; ++i) {
        if (run(hypothesis, target_sampler.draw(rng))) hits += 1;
    }
    report.recall = static_cast<double>(hits) / n;
    report.f1 = f1_score(report.precision, report.recall);
    return report;
}

double estimate_distance(const Dfa& hypothesis, const Dfa& target, const Sampler& sampler, int n,
                         std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("sample count must be at least 1");
    int differing = 0;
    for (int i = 0; i < n; ++i) {
        std::optional<Word> x = sampler(rng);
        if (x && run(hypothesis, *x) != run(target, *x)) differing += 1;
    }
    return static_cast<double>(differing) / n;
}

std::optional<int> desk_depth(targets::TargetName name) {
    switch (name) {
        case targets::TargetName::Arith: return 2;
        case targets::TargetName::Json: return 1;
        case targets::TargetName::Dyck: return 2;
        default: return std::nullopt;
    }
}

targets::TargetSpec desk_spec(targets::TargetName name) {
    return targets::TargetSpec{name, desk_depth(name), targets::tiny_alphabet(name)};
}

std::pair<int, int> desk_length_range(targets::TargetName name) {
    switch (name) {
        case targets::TargetName::Arith: return {40, 80};
        case targets::TargetName::Json: return {16, 32};
        case targets::TargetName::Dyck: return {10, 20};
        case targets::TargetName::Date: return {8, 40};
        case targets::TargetName::EvenLength: return {1, 20};
    }
    throw std::invalid_argument("unknown target");
}

std::mt19937_64 child_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

std::vector<RunMetrics> run_exact_benchmark(const std::vector<targets::TargetSpec>& specs,
                                            double timeout_secs, std::uint64_t seed) {
    std::vector<RunMetrics> records;
    for (const targets::TargetSpec& spec : specs) {
        Dfa target = targets::build(spec);
        std::string label = targets::target_label(spec);
        for (LearnerKind learner :
             {LearnerKind::Lstar, LearnerKind::PlstarStandard, LearnerKind::PlstarOptimised}) {
            Teacher teacher(target);
            EqOracle oracle = make_exact_oracle(teacher);
            LearnResult result;
            if (learner == LearnerKind::Lstar) {
                LstarOptions options;
                options.timeout_secs = timeout_secs;
                result = lstar_learn(teacher, oracle, options);
            } else {
                PlstarOptions options;
                options.timeout_secs = timeout_secs;
                PlMode mode = learner == LearnerKind::PlstarStandard ? PlMode::Standard
                                                                     : PlMode::Optimised;
                result = plstar_learn(teacher, oracle, mode, options);
            }
            result.metrics.target = label;
            result.metrics.seed = seed;
            records.push_back(result.metrics);
        }
    }
    return records;
}

namespace {

Sampler make_sampler(SamplerKind kind, const SamplerConfig& config, Teacher& teacher) {
    if (kind == SamplerKind::PseudoUniform) {
        return make_pseudo_uniform_sampler(config.l_min, config.l_max, teacher.target().alphabet);
    }
    return make_prefix_sampler(config, teacher);
}

}  // namespace

PacReport verify_pac(const targets::TargetSpec& spec, SamplerKind sampler_kind,
                     const SamplerConfig& config, double epsilon, double delta, int runs,
                     int n_distance, std::uint64_t seed, double timeout_secs,
                     std::vector<RunMetrics>* metrics_out) {
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    Dfa target = targets::build(spec);
    std::string label = targets::target_label(spec);

    PacReport report;
    report.runs = runs;
    int within = 0;
    for (int run_index = 0; run_index < runs; ++run_index) {
        std::mt19937_64 rng = child_rng(seed, static_cast<std::uint64_t>(run_index));
        Teacher teacher(target);
        Sampler sampler = make_sampler(sampler_kind, config, teacher);
        PacParams params{epsilon, delta, 1};
        EqOracle oracle = make_pac_oracle(teacher, params, sampler, rng);
        PlstarOptions options;
        options.timeout_secs = timeout_secs;
        options.success_outcome = Outcome::PacSuccess;
        LearnResult result = plstar_learn(teacher, oracle, PlMode::Optimised, options);

        double distance = 1.0;
        if (result.hypothesis) {
            distance = estimate_distance(*result.hypothesis, target, sampler, n_distance, rng);
        }
        report.distances.push_back(distance);
        if (distance <= epsilon) within += 1;

        if (metrics_out) {
            result.metrics.target = label;
            result.metrics.seed = seed;
            metrics_out->push_back(result.metrics);
        }
    }
    report.fraction_within_epsilon = static_cast<double>(within) / runs;
    return report;
}

std::vector<GridCell> f1_grid(const targets::TargetSpec& spec,
                              const std::vector<GridSampler>& samplers,
                              const std::vector<double>& epsilons,
                              const std::vector<double>& deltas, int repeats, double timeout_secs,
                              int f1_l_min, int f1_l_max, int f1_samples, std::uint64_t seed) {
    if (samplers.empty() || epsilons.empty() || deltas.empty()) {
        throw std::invalid_argument("grids must be non-empty");
    }
    if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
    Dfa target = targets::build(spec);
    std::string label = targets::target_label(spec);

    std::vector<GridCell> cells;
    std::uint64_t cell_index = 0;
    for (const GridSampler& gs : samplers) {
        for (double epsilon : epsilons) {
            for (double delta : deltas) {
                GridCell cell;
                cell.target = label;
                cell.sampler = gs.kind;
                cell.p = gs.config.p;
                cell.epsilon = epsilon;
                cell.delta = delta;
                cell.runs = repeats;

                double f1_sum = 0.0;
                for (int repeat = 0; repeat < repeats; ++repeat) {
                    std::mt19937_64 rng =
                        child_rng(seed, cell_index, static_cast<std::uint64_t>(repeat));
                    Teacher teacher(target);
                    Sampler sampler = make_sampler(gs.kind, gs.config, teacher);
                    PacParams params{epsilon, delta, 1};
                    EqOracle oracle = make_pac_oracle(teacher, params, sampler, rng);
                    PlstarOptions options;
                    options.timeout_secs = timeout_secs;
                    options.success_outcome = Outcome::PacSuccess;
                    LearnResult result = plstar_learn(teacher, oracle, PlMode::Optimised, options);
                    if (result.metrics.outcome == Outcome::Timeout) cell.timeouts += 1;
                    if (result.hypothesis) {
                        f1_sum += estimate_f1(*result.hypothesis, target, f1_l_min, f1_l_max,
                                              f1_samples, rng)
                                      .f1;
                    }
                }
                cell.mean_f1 = f1_sum / repeats;
                cells.push_back(cell);
                cell_index += 1;
            }
        }
    }
    return cells;
}

std::string grid_csv_header() { return "target,sampler,p,epsilon,delta,mean_f1,runs,timeouts"; }

std::string to_csv_row(const GridCell& cell) {
    std::ostringstream out;
    out << cell.target << ',' << to_string(cell.sampler) << ',' << cell.p << ',' << cell.epsilon
        << ',' << cell.delta << ',' << cell.mean_f1 << ',' << cell.runs << ',' << cell.timeouts;
    return out.str();
}

}  // namespace pql::eval
