#include "pql/metrics.hpp"

#include <sstream>
#include <unordered_set>

#include "pql/lstar.hpp"
#include "pql/plstar.hpp"

namespace pql {

const char* to_string(LearnerKind k) {
    switch (k) {
        case LearnerKind::Lstar: return "lstar";
        case LearnerKind::PlstarStandard: return "plstar-std";
        case LearnerKind::PlstarOptimised: return "plstar-opt";
    }
    return "?";
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::ExactSuccess: return "exact-success";
        case Outcome::PacSuccess: return "pac-success";
        case Outcome::Timeout: return "timeout";
    }
    return "?";
}

std::optional<LearnerKind> parse_learner(const std::string& s) {
    if (s == "lstar") return LearnerKind::Lstar;
    if (s == "plstar-std") return LearnerKind::PlstarStandard;
    if (s == "plstar-opt") return LearnerKind::PlstarOptimised;
    return std::nullopt;
}

long long size_lstar(const LStarTable& tbl, int alphabet_size) {
    std::unordered_set<Word> rows(tbl.s_pre().begin(), tbl.s_pre().end());
    for (const Word& s : tbl.s_pre()) {
        for (int a = 0; a < alphabet_size; ++a) {
            rows.insert(s + tbl.alphabet().at(a));
        }
    }
    return static_cast<long long>(tbl.s_pre().size()) + static_cast<long long>(tbl.s_suff().size()) +
           static_cast<long long>(rows.size()) * static_cast<long long>(tbl.s_suff().size());
}

long long size_plstar(const PlStarTable& tbl) {
    return static_cast<long long>(tbl.s_pre().size()) + static_cast<long long>(tbl.s_suff().size()) +
           static_cast<long long>(tbl.s_stored().size()) +
           static_cast<long long>(tbl.s_dead_pref().size()) +
           static_cast<long long>(tbl.s_stored().size()) * static_cast<long long>(tbl.s_suff().size());
}

nlohmann::json to_json(const RunMetrics& m, bool include_wall_time) {
    return nlohmann::json{
        {"learner", to_string(m.learner)},
        {"target", m.target},
        {"mq_or_pq", m.mq_or_pq},
        {"eq", m.eq},
        {"cell_comparisons", m.cell_comparisons},
        {"table_size", m.table_size},
        {"hypothesis_states", m.hypothesis_states},
        {"wall_time_ms", include_wall_time ? m.wall_time_ms : 0.0},
        {"seed", m.seed},
        {"outcome", to_string(m.outcome)},
    };
}

std::string metrics_csv_header() {
    return "learner,target,mq_or_pq,eq,cell_comparisons,table_size,hypothesis_states,"
           "wall_time_ms,seed,outcome";
}

std::string to_csv_row(const RunMetrics& m, bool include_wall_time) {
    std::ostringstream out;
    out << to_string(m.learner) << ',' << m.target << ',' << m.mq_or_pq << ',' << m.eq << ','
        << m.cell_comparisons << ',' << m.table_size << ',' << m.hypothesis_states << ','
        << (include_wall_time ? m.wall_time_ms : 0.0) << ',' << m.seed << ','
        << to_string(m.outcome);
    return out.str();
}

}  // namespace pql
