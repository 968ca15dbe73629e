// Experiment drivers: exact-oracle benchmark comparison, PAC-guarantee
// verification, and the F1 grid over (sampler, p, epsilon, delta).
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pql/metrics.hpp"
#include "pql/oracle.hpp"
#include "pql/plstar.hpp"
#include "pql/targets.hpp"

namespace pql::eval {

enum class SamplerKind { PseudoUniform, PrefixBased };

const char* to_string(SamplerKind k);
std::optional<SamplerKind> parse_sampler(const std::string& s);

struct F1Report {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int sample_size = 0;
    int l_min = 0;
    int l_max = 0;
};

struct PacReport {
    int runs = 0;
    std::vector<double> distances;
    double fraction_within_epsilon = 0.0;
};

// 2pr/(p+r), or 0 when p + r = 0. Inputs must lie in [0, 1].
double f1_score(double precision, double recall);

// Precision: fraction of n uniform samples from the hypothesis (length
// in [l_min, l_max]) the target accepts; recall symmetric. A hypothesis
// with no strings in range scores precision 1. Throws
// std::invalid_argument when the TARGET has no strings in range.
F1Report estimate_f1(const Dfa& hypothesis, const Dfa& target, int l_min, int l_max, int n,
                     std::mt19937_64& rng);

// Fraction of n sampler draws landing in the symmetric difference;
// failed draws count as agreement.
double estimate_distance(const Dfa& hypothesis, const Dfa& target, const Sampler& sampler, int n,
                         std::mt19937_64& rng);

// Desk-scale defaults: depth per target (none for date/even_length).
std::optional<int> desk_depth(targets::TargetName name);
// Target at desk scale: desk depth and tiny alphabet.
targets::TargetSpec desk_spec(targets::TargetName name);
// Sampler/F1 length range [l_min, l_max] used at desk scale, chosen per
// target so members stay rare under blind uniform sampling.
std::pair<int, int> desk_length_range(targets::TargetName name);

// A deterministic child generator for run index (a, b) under a master
// seed; used so runs are independent yet replayable.
std::mt19937_64 child_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// One exact-oracle run per (target, learner) pair, learners in the
// order lstar, plstar-std, plstar-opt. Timeouts are recorded in the
// outcome field, never raised.
std::vector<RunMetrics> run_exact_benchmark(const std::vector<targets::TargetSpec>& specs,
                                            double timeout_secs, std::uint64_t seed);

// Runs optimised PL* with the PAC oracle `runs` times, estimating
// d(hypothesis, target) per run with n_distance sampler draws; a run
// that times out without a hypothesis scores distance 1. Appends one
// RunMetrics per run to metrics_out when given.
PacReport verify_pac(const targets::TargetSpec& spec, SamplerKind sampler,
                     const SamplerConfig& config, double epsilon, double delta, int runs,
                     int n_distance, std::uint64_t seed, double timeout_secs = 120.0,
                     std::vector<RunMetrics>* metrics_out = nullptr);

struct GridSampler {
    SamplerKind kind;
    SamplerConfig config;
};

struct GridCell {
    std::string target;
    SamplerKind sampler = SamplerKind::PseudoUniform;
    double p = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double mean_f1 = 0.0;
    int runs = 0;
    int timeouts = 0;
};

// For each (sampler, epsilon, delta) cell: `repeats` PAC-mode optimised
// PL* runs, each scored by estimate_f1 over [f1_l_min, f1_l_max] with
// f1_samples draws per side; cell value = mean F1. A timed-out run
// scores its last hypothesis, or 0 when none was built.
std::vector<GridCell> f1_grid(const targets::TargetSpec& spec,
                              const std::vector<GridSampler>& samplers,
                              const std::vector<double>& epsilons,
                              const std::vector<double>& deltas, int repeats, double timeout_secs,
                              int f1_l_min, int f1_l_max, int f1_samples, std::uint64_t seed);

std::string grid_csv_header();
std::string to_csv_row(const GridCell& cell);

}  // namespace pql::eval
