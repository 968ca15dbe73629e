// Per-run counters, observation-table size formulas, and structured
// emission (JSON lines + CSV) for the benchmark harness.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace pql {

class LStarTable;
class PlStarTable;

enum class LearnerKind { Lstar, PlstarStandard, PlstarOptimised };
enum class Outcome { ExactSuccess, PacSuccess, Timeout };

const char* to_string(LearnerKind k);
const char* to_string(Outcome o);
std::optional<LearnerKind> parse_learner(const std::string& s);

struct RunMetrics {
    LearnerKind learner = LearnerKind::Lstar;
    std::string target;
    // Membership queries for L*, prefix queries for PL*.
    long long mq_or_pq = 0;
    long long eq = 0;
    long long cell_comparisons = 0;
    long long table_size = 0;
    int hypothesis_states = 0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::ExactSuccess;
};

// |S_pre| + |S_suff| + |S_pre u S_pre.A| x |S_suff|, with the union
// cardinality computed over the actual string sets.
long long size_lstar(const LStarTable& tbl, int alphabet_size);

// |S_pre| + |S_suff| + |S_stored| + |S_DEAD_PREF| + |S_stored| x |S_suff|.
long long size_plstar(const PlStarTable& tbl);

// include_wall_time=false zeroes wall_time_ms in the emitted record so
// repeated runs with the same seed produce byte-identical files.
nlohmann::json to_json(const RunMetrics& m, bool include_wall_time = false);
std::string metrics_csv_header();
std::string to_csv_row(const RunMetrics& m, bool include_wall_time = false);

}  // namespace pql
