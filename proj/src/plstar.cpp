#include "pql/plstar.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

namespace pql {

PlStarTable::PlStarTable(PlMode mode, Alphabet alphabet) : mode_(mode), alphabet_(std::move(alphabet)) {
    push_suff("");
}

bool PlStarTable::extends_dead_pref(const Word& w) const {
    for (const Word& d : s_dead_pref_) {
        if (w.size() >= d.size() && w.compare(0, d.size(), d) == 0) return true;
    }
    return false;
}

bool PlStarTable::value(const Word& w) const {
    auto it = values_.find(w);
    if (it == values_.end()) {
        throw std::logic_error("table cell not filled");
    }
    return it->second;
}

void PlStarTable::push_pre(const Word& w) {
    s_pre_.push_back(w);
    pre_set_.insert(w);
}

void PlStarTable::push_suff(const Word& w) {
    s_suff_.push_back(w);
    suff_set_.insert(w);
}

void PlStarTable::add_stored(const Word& w, bool dead) {
    if (!stored_set_.insert(w).second) return;
    s_stored_.push_back(w);
    if (dead) stored_dead_.push_back(w);
}

void PlStarTable::remove_stored(const Word& w) {
    if (stored_set_.erase(w) == 0) return;
    s_stored_.erase(std::find(s_stored_.begin(), s_stored_.end(), w));
    auto it = std::find(stored_dead_.begin(), stored_dead_.end(), w);
    if (it != stored_dead_.end()) stored_dead_.erase(it);
}

void PlStarTable::insert_dead_pref(const Word& w) {
    // Drop w when an existing element is a prefix of it (w still extends
    // that element, so nothing is lost).
    if (extends_dead_pref(w)) return;
    // Evict existing elements that extend w.
    std::erase_if(s_dead_pref_, [&](const Word& d) {
        return d.size() >= w.size() && d.compare(0, w.size(), w) == 0;
    });
    s_dead_pref_.push_back(w);
}

bool PlStarTable::rows_equal(const Word& label1, const Word& label2) {
    for (const Word& e : s_suff_) {
        cell_comparisons += 1;
        if (value(label1 + e) != value(label2 + e)) return false;
    }
    return true;
}

std::optional<Word> PlStarTable::rows_first_mismatch(const Word& label1, const Word& label2) {
    for (const Word& e : s_suff_) {
        cell_comparisons += 1;
        if (value(label1 + e) != value(label2 + e)) return e;
    }
    return std::nullopt;
}

PrefixResponse asked_prefix_query(PlStarTable& tbl, Teacher& teacher, const Word& x) {
    PrefixResponse response = teacher.prefix_query(x);
    if (response == PrefixResponse::DeadPrefix) {
        tbl.insert_dead_pref(x);
    }
    tbl.set_value(x, response == PrefixResponse::Member);
    return response;
}

namespace {

// True when x splits as s.e with s stored, e in S_suff, and the cell
// value already resolved.
bool has_stored_cell(const PlStarTable& tbl, const Word& x) {
    if (!tbl.has_value(x)) return false;
    for (const Word& e : tbl.s_suff()) {
        if (x.size() < e.size()) continue;
        if (x.compare(x.size() - e.size(), e.size(), e) != 0) continue;
        if (tbl.in_stored(x.substr(0, x.size() - e.size()))) return true;
    }
    return false;
}

}  // namespace

int resolve_membership(PlStarTable& tbl, Teacher& teacher, const Word& x) {
    if (has_stored_cell(tbl, x)) {
        return tbl.value(x) ? 1 : 0;
    }
    if (tbl.extends_dead_pref(x)) {
        tbl.set_value(x, false);
        return 0;
    }
    return asked_prefix_query(tbl, teacher, x) == PrefixResponse::Member ? 1 : 0;
}

PrefixResponse classify_cached(PlStarTable& tbl, Teacher& teacher, const Word& x) {
    if (tbl.extends_dead_pref(x)) {
        return PrefixResponse::DeadPrefix;
    }
    if (has_stored_cell(tbl, x)) {
        // A zero cell cannot be a dead prefix here: x does not extend
        // any element of S_DEAD_PREF.
        return tbl.value(x) ? PrefixResponse::Member : PrefixResponse::LivePrefix;
    }
    return asked_prefix_query(tbl, teacher, x);
}

namespace {

void store_and_fill(PlStarTable& tbl, Teacher& teacher, const Word& x, bool dead) {
    tbl.add_stored(x, dead);
    for (const Word& e : tbl.s_suff()) {
        resolve_membership(tbl, teacher, x + e);
    }
}

bool any_stored_dead_in_pre(const PlStarTable& tbl) {
    for (const Word& d : tbl.stored_dead()) {
        if (tbl.in_pre(d)) return true;
    }
    return false;
}

// First stored dead prefix lying in S_pre.A only (for the standard
// mode's swap case).
const Word& stored_dead_outside_pre(const PlStarTable& tbl) {
    for (const Word& d : tbl.stored_dead()) {
        if (!tbl.in_pre(d)) return d;
    }
    throw std::logic_error("no stored dead prefix outside S_pre");
}

}  // namespace

void update_after_spre_add(PlStarTable& tbl, Teacher& teacher, const Word& x) {
    PrefixResponse response = classify_cached(tbl, teacher, x);
    const bool dead = response == PrefixResponse::DeadPrefix;
    const bool x_in_pre = tbl.in_pre(x);
    const bool stored_dead_exists = !tbl.stored_dead().empty();

    if (!dead) {
        store_and_fill(tbl, teacher, x, false);  // x in Prefix(X)
        return;
    }
    if (x_in_pre) {
        if (!stored_dead_exists) {
            store_and_fill(tbl, teacher, x, true);
        } else if (any_stored_dead_in_pre(tbl)) {
            // do nothing
        } else if (tbl.mode() == PlMode::Standard) {
            // Swap: the stored dead prefix lives in S_pre.A; replace it
            // with x so the dead row is owned by an S_pre element.
            Word evicted = stored_dead_outside_pre(tbl);
            tbl.remove_stored(evicted);
            store_and_fill(tbl, teacher, x, true);
        } else {
            // Optimised mode stores dead prefixes in S_pre only, so a
            // stored dead prefix outside S_pre cannot exist.
            throw std::logic_error("optimised table has a stored dead prefix outside S_pre");
        }
    } else {
        if (!stored_dead_exists) {
            if (tbl.mode() == PlMode::Optimised) {
                // Promote x into S_pre immediately, then process its own
                // one-symbol extensions before returning.
                tbl.push_pre(x);
                store_and_fill(tbl, teacher, x, true);
                for (int a = 0; a < tbl.alphabet().size(); ++a) {
                    update_after_spre_add(tbl, teacher, x + tbl.alphabet().at(a));
                }
            } else {
                store_and_fill(tbl, teacher, x, true);
            }
        }
        // else: some stored dead prefix exists; do nothing.
    }
}

void pl_add_prefix(PlStarTable& tbl, Teacher& teacher, const Word& s) {
    if (tbl.in_pre(s)) return;
    tbl.push_pre(s);
    update_after_spre_add(tbl, teacher, s);
    for (int a = 0; a < tbl.alphabet().size(); ++a) {
        update_after_spre_add(tbl, teacher, s + tbl.alphabet().at(a));
    }
}

void pl_add_suffix(PlStarTable& tbl, Teacher& teacher, const Word& e) {
    if (tbl.in_suff(e)) return;
    tbl.push_suff(e);
    for (const Word& s : tbl.s_pre()) {
        if (tbl.in_stored(s)) resolve_membership(tbl, teacher, s + e);
        for (int a = 0; a < tbl.alphabet().size(); ++a) {
            Word sa = s + tbl.alphabet().at(a);
            if (tbl.in_stored(sa)) resolve_membership(tbl, teacher, sa + e);
        }
    }
}

void add_counterexample(PlStarTable& tbl, Teacher& teacher, const Word& w) {
    for (size_t len = 0; len <= w.size(); ++len) {
        pl_add_prefix(tbl, teacher, w.substr(0, len));
    }
}

std::optional<ClosednessWitness> pl_is_closed(PlStarTable& tbl) {
    for (const Word& s : tbl.s_pre()) {
        for (int a = 0; a < tbl.alphabet().size(); ++a) {
            Word sa = s + tbl.alphabet().at(a);
            if (!tbl.in_stored(sa)) continue;
            bool matched = false;
            for (const Word& candidate : tbl.s_pre()) {
                if (!tbl.in_stored(candidate)) continue;
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

namespace {

// Row label realizing r_sa: sa itself when stored, else the stored dead
// prefix's row.
const Word& r_label(const PlStarTable& tbl, const Word& sa) {
    if (tbl.in_stored(sa)) {
        auto it = std::find(tbl.s_stored().begin(), tbl.s_stored().end(), sa);
        return *it;
    }
    if (tbl.stored_dead().empty()) {
        throw std::logic_error("unstored successor but no stored dead prefix");
    }
    return tbl.stored_dead().front();
}

}  // namespace

std::optional<Word> pl_is_consistent(PlStarTable& tbl) {
    const auto& pre = tbl.s_pre();
    for (size_t i = 0; i < pre.size(); ++i) {
        if (!tbl.in_stored(pre[i])) continue;
        for (size_t j = i + 1; j < pre.size(); ++j) {
            if (!tbl.in_stored(pre[j])) continue;
            if (!tbl.rows_equal(pre[i], pre[j])) continue;
            for (int a = 0; a < tbl.alphabet().size(); ++a) {
                char c = tbl.alphabet().at(a);
                Word label1 = r_label(tbl, pre[i] + c);
                Word label2 = r_label(tbl, pre[j] + c);
                auto mismatch = tbl.rows_first_mismatch(label1, label2);
                if (mismatch) return c + *mismatch;
            }
        }
    }
    return std::nullopt;
}

namespace {

std::vector<char> row_vector(const PlStarTable& tbl, const Word& label) {
    std::vector<char> row;
    row.reserve(tbl.s_suff().size());
    for (const Word& e : tbl.s_suff()) row.push_back(tbl.value(label + e) ? 1 : 0);
    return row;
}

}  // namespace

Dfa build_hypothesis(const PlStarTable& tbl) {
    std::map<std::vector<char>, int> row_to_state;
    std::vector<Word> representative;
    for (const Word& s : tbl.s_pre()) {
        if (!tbl.in_stored(s)) continue;
        auto [it, inserted] = row_to_state.emplace(row_vector(tbl, s), static_cast<int>(representative.size()));
        if (inserted) representative.push_back(s);
    }
    if (!tbl.in_stored("")) {
        throw std::logic_error("epsilon is not stored");
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
            Word sa = s + h.alphabet.at(a);
            const Word& label = tbl.in_stored(sa) ? sa : [&]() -> const Word& {
                if (tbl.stored_dead().empty()) {
                    throw std::logic_error("unstored successor but no stored dead prefix");
                }
                return tbl.stored_dead().front();
            }();
            auto it = row_to_state.find(row_vector(tbl, label));
            if (it == row_to_state.end()) {
                throw std::logic_error("table not closed");
            }
            h.delta[static_cast<size_t>(q) * h.alphabet.size() + a] = it->second;
        }
    }
    return h;
}

LStarTable to_lstar_table(const PlStarTable& tbl) {
    LStarTable out(tbl.alphabet());
    for (const Word& e : tbl.s_suff()) {
        if (!e.empty()) out.push_suff(e);
    }
    for (const Word& s : tbl.s_pre()) out.push_pre(s);
    for (const Word& s : tbl.s_pre()) {
        for (int a = -1; a < tbl.alphabet().size(); ++a) {
            Word label = a < 0 ? s : s + tbl.alphabet().at(a);
            bool stored = tbl.in_stored(label);
            for (const Word& e : tbl.s_suff()) {
                out.set_value(label + e, stored && tbl.value(label + e));
            }
        }
    }
    return out;
}

LearnResult plstar_learn(Teacher& teacher, const EqOracle& eq_oracle, PlMode mode,
                         const PlstarOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto start_time = Clock::now();
    const auto deadline = start_time + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(options.timeout_secs));
    const long long pq0 = teacher.prefix_queries();
    const long long eq0 = teacher.equivalence_queries();

    LearnResult result;
    result.metrics.learner =
        mode == PlMode::Standard ? LearnerKind::PlstarStandard : LearnerKind::PlstarOptimised;

    PlStarTable tbl(mode, teacher.target().alphabet);
    pl_add_prefix(tbl, teacher, "");
    if (options.after_mutation) options.after_mutation(tbl);

    bool timed_out = false;
    while (true) {
        while (true) {
            if (Clock::now() > deadline) {
                timed_out = true;
                break;
            }
            bool progressed = false;
            if (auto witness = pl_is_closed(tbl)) {
                pl_add_prefix(tbl, teacher, witness->s + witness->a);
                if (options.after_mutation) options.after_mutation(tbl);
                progressed = true;
            }
            if (auto suffix = pl_is_consistent(tbl)) {
                pl_add_suffix(tbl, teacher, *suffix);
                if (options.after_mutation) options.after_mutation(tbl);
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
        add_counterexample(tbl, teacher, *counterexample);
        if (options.after_mutation) options.after_mutation(tbl);
        if (options.after_round) options.after_round(tbl, hypothesis);
        if (Clock::now() > deadline) {
            timed_out = true;
            break;
        }
    }

    result.metrics.outcome = timed_out ? Outcome::Timeout : options.success_outcome;
    result.metrics.mq_or_pq = teacher.prefix_queries() - pq0;
    result.metrics.eq = teacher.equivalence_queries() - eq0;
    result.metrics.cell_comparisons = tbl.cell_comparisons;
    result.metrics.table_size = size_plstar(tbl);
    result.metrics.hypothesis_states = result.hypothesis ? result.hypothesis->num_states : 0;
    result.metrics.wall_time_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_time).count();
    return result;
}

}  // namespace pql
