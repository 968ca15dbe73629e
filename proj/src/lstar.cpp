#include "pql/lstar.hpp"

#include <chrono>
#include <map>
#include <stdexcept>

namespace pql {

LStarTable::LStarTable(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
    push_suff("");
}

bool LStarTable::value(const Word& w) const {
    auto it = values_.find(w);
    if (it == values_.end()) {
        throw std::logic_error("table cell not filled");
    }
    return it->second;
}

void LStarTable::push_pre(const Word& w) {
    s_pre_.push_back(w);
    pre_set_.insert(w);
}

void LStarTable::push_suff(const Word& w) {
    s_suff_.push_back(w);
    suff_set_.insert(w);
}

bool LStarTable::rows_equal(const Word& label1, const Word& label2) {
    for (const Word& e : s_suff_) {
        cell_comparisons += 1;
        if (value(label1 + e) != value(label2 + e)) return false;
    }
    return true;
}

std::optional<Word> LStarTable::rows_first_mismatch(const Word& label1, const Word& label2) {
    for (const Word& e : s_suff_) {
        cell_comparisons += 1;
        if (value(label1 + e) != value(label2 + e)) return e;
    }
    return std::nullopt;
}

bool LStarTable::operator==(const LStarTable& other) const {
    if (s_pre_ != other.s_pre_ || s_suff_ != other.s_suff_) return false;
    for (const Word& s : s_pre_) {
        for (int a = -1; a < alphabet_.size(); ++a) {
            Word label = a < 0 ? s : s + alphabet_.at(a);
            for (const Word& e : s_suff_) {
                if (value(label + e) != other.value(label + e)) return false;
            }
        }
    }
    return true;
}

std::optional<ClosednessWitness> lstar_is_closed(LStarTable& tbl) {
    for (const Word& s : tbl.s_pre()) {
        for (int a = 0; a < tbl.alphabet().size(); ++a) {
            Word sa = s + tbl.alphabet().at(a);
            bool matched = false;
            for (const Word& candidate : tbl.s_pre()) {
                if (tbl.rows_equal(sa, candidate)) {
                    matched = true;
                    break;
                }
            }
            if (!matched) return ClosednessWitness{s, tbl.alphabet().at(a)};
        }
    }
    return std::nullopt;
}

std::optional<Word> lstar_is_consistent(LStarTable& tbl) {
    const auto& pre = tbl.s_pre();
    for (size_t i = 0; i < pre.size(); ++i) {
        for (size_t j = i + 1; j < pre.size(); ++j) {
            if (!tbl.rows_equal(pre[i], pre[j])) continue;
            for (int a = 0; a < tbl.alphabet().size(); ++a) {
                char c = tbl.alphabet().at(a);
                auto mismatch = tbl.rows_first_mismatch(pre[i] + c, pre[j] + c);
                if (mismatch) return c + *mismatch;
            }
        }
    }
    return std::nullopt;
}

namespace {

std::vector<char> row_vector(const LStarTable& tbl, const Word& label) {
    std::vector<char> row;
    row.reserve(tbl.s_suff().size());
    for (const Word& e : tbl.s_suff()) row.push_back(tbl.value(label + e) ? 1 : 0);
    return row;
}

}  // namespace

Dfa build_hypothesis(const LStarTable& tbl) {
    std::map<std::vector<char>, int> row_to_state;
    std::vector<Word> representative;
    for (const Word& s : tbl.s_pre()) {
        auto [it, inserted] = row_to_state.emplace(row_vector(tbl, s), static_cast<int>(representative.size()));
        if (inserted) representative.push_back(s);
    }
    Dfa h;
    h.alphabet = tbl.alphabet();
    h.num_states = static_cast<int>(representative.size());
    h.start = row_to_state.at(row_vector(tbl, ""));
    h.accepting.resize(h.num_states);
    h.delta.assign(static_cast<size_t>(h.num_states) * h.alphabet.size(), 0);
    for (int q = 0; q < h.num_states; ++q) {
        const Word& s = representative[q];
        h.accepting[q] = tbl.value(s);
        for (int a = 0; a < h.alphabet.size(); ++a) {
            auto it = row_to_state.find(row_vector(tbl, s + h.alphabet.at(a)));
            if (it == row_to_state.end()) {
                throw std::logic_error("table not closed");
            }
            h.delta[static_cast<size_t>(q) * h.alphabet.size() + a] = it->second;
        }
    }
    return h;
}

namespace {

void fill(LStarTable& tbl, Teacher& teacher, const Word& w) {
    if (!tbl.has_value(w)) tbl.set_value(w, teacher.membership_query(w));
}

}  // namespace

void lstar_add_prefix(LStarTable& tbl, Teacher& teacher, const Word& s) {
    if (tbl.in_pre(s)) return;
    tbl.push_pre(s);
    for (const Word& e : tbl.s_suff()) fill(tbl, teacher, s + e);
    for (int a = 0; a < tbl.alphabet().size(); ++a) {
        for (const Word& e : tbl.s_suff()) fill(tbl, teacher, s + tbl.alphabet().at(a) + e);
    }
}

void lstar_add_suffix(LStarTable& tbl, Teacher& teacher, const Word& e) {
    if (tbl.in_suff(e)) return;
    tbl.push_suff(e);
    for (const Word& s : tbl.s_pre()) {
        fill(tbl, teacher, s + e);
        for (int a = 0; a < tbl.alphabet().size(); ++a) fill(tbl, teacher, s + tbl.alphabet().at(a) + e);
    }
}

void lstar_add_counterexample(LStarTable& tbl, Teacher& teacher, const Word& w) {
    for (size_t len = 0; len <= w.size(); ++len) {
        lstar_add_prefix(tbl, teacher, w.substr(0, len));
    }
}

LearnResult lstar_learn(Teacher& teacher, const EqOracle& eq_oracle, const LstarOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto start_time = Clock::now();
    const auto deadline = start_time + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(options.timeout_secs));
    const long long mq0 = teacher.membership_queries();
    const long long eq0 = teacher.equivalence_queries();

    LearnResult result;
    result.metrics.learner = LearnerKind::Lstar;

    LStarTable tbl(teacher.target().alphabet);
    lstar_add_prefix(tbl, teacher, "");

    bool timed_out = false;
    while (true) {
        while (true) {
            if (Clock::now() > deadline) {
                timed_out = true;
                break;
            }
            bool progressed = false;
            if (auto witness = lstar_is_closed(tbl)) {
                lstar_add_prefix(tbl, teacher, witness->s + witness->a);
                progressed = true;
            }
            if (auto suffix = lstar_is_consistent(tbl)) {
                lstar_add_suffix(tbl, teacher, *suffix);
                progressed = true;
            }
            if (!progressed) break;
        }
        if (timed_out) break;

        Dfa hypothesis = build_hypothesis(tbl);
        result.hypothesis = hypothesis;
        std::optional<Word> counterexample = eq_oracle(hypothesis);
        if (!counterexample) {
            if (options.after_round) options.after_round(tbl, hypothesis);
            break;
        }
        lstar_add_counterexample(tbl, teacher, *counterexample);
        if (options.after_round) options.after_round(tbl, hypothesis);
        if (Clock::now() > deadline) {
            timed_out = true;
            break;
        }
    }

    result.metrics.outcome = timed_out ? Outcome::Timeout : options.success_outcome;
    result.metrics.mq_or_pq = teacher.membership_queries() - mq0;
    result.metrics.eq = teacher.equivalence_queries() - eq0;
    result.metrics.cell_comparisons = tbl.cell_comparisons;
    result.metrics.table_size = size_lstar(tbl, tbl.alphabet().size());
    result.metrics.hypothesis_states = result.hypothesis ? result.hypothesis->num_states : 0;
    result.metrics.wall_time_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_time).count();
    return result;
}

}  // namespace pql
