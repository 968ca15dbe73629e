// The PL* learner: five-component observation table, cached prefix
// queries, the standard and optimised table-update procedures, PL*
// closedness/consistency, and hypothesis construction.
#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pql/lstar.hpp"

namespace pql {

enum class PlMode { Standard, Optimised };

// Observation table (S_pre, S_suff, S_stored, S_DEAD_PREF, T). T is
// defined on exactly S_stored x S_suff; resolved word values are kept in
// a word-keyed cache so no information is ever re-queried.
class PlStarTable {
public:
    PlStarTable(PlMode mode, Alphabet alphabet);

    PlMode mode() const { return mode_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Word>& s_pre() const { return s_pre_; }
    const std::vector<Word>& s_suff() const { return s_suff_; }
    const std::vector<Word>& s_stored() const { return s_stored_; }
    const std::vector<Word>& s_dead_pref() const { return s_dead_pref_; }
    // Stored elements known to be dead prefixes (insertion order).
    const std::vector<Word>& stored_dead() const { return stored_dead_; }

    bool in_pre(const Word& w) const { return pre_set_.count(w) > 0; }
    bool in_suff(const Word& w) const { return suff_set_.count(w) > 0; }
    bool in_stored(const Word& w) const { return stored_set_.count(w) > 0; }

    // True iff some element of S_DEAD_PREF is a (not necessarily proper)
    // prefix of w.
    bool extends_dead_pref(const Word& w) const;

    bool has_value(const Word& w) const { return values_.count(w) > 0; }
    bool value(const Word& w) const;
    void set_value(const Word& w, bool v) { values_.emplace(w, v); }

    void push_pre(const Word& w);
    void push_suff(const Word& w);
    void add_stored(const Word& w, bool dead);
    void remove_stored(const Word& w);
    // Inserts while re-establishing minimality: the new element is
    // dropped when it extends an existing one; existing elements that
    // extend the new one are evicted.
    void insert_dead_pref(const Word& w);

    // Counted row comparisons per the shared counting rule.
    bool rows_equal(const Word& label1, const Word& label2);
    std::optional<Word> rows_first_mismatch(const Word& label1, const Word& label2);

    long long cell_comparisons = 0;

private:
    PlMode mode_;
    Alphabet alphabet_;
    std::vector<Word> s_pre_;
    std::vector<Word> s_suff_;
    std::vector<Word> s_stored_;
    std::vector<Word> s_dead_pref_;
    std::vector<Word> stored_dead_;
    std::unordered_set<Word> pre_set_;
    std::unordered_set<Word> suff_set_;
    std::unordered_set<Word> stored_set_;
    std::unordered_map<Word, bool> values_;
};

// Forwards x to the teacher; a DEAD_PREF answer records x in
// S_DEAD_PREF (minimality maintained). The answer's membership bit is
// cached.
PrefixResponse asked_prefix_query(PlStarTable& tbl, Teacher& teacher, const Word& x);

// Membership of x: stored cell first, then the dead-prefix rule, then a
// prefix query.
int resolve_membership(PlStarTable& tbl, Teacher& teacher, const Word& x);

// Member / live prefix / dead prefix of x: dead-prefix rule first, then
// stored cells, then a prefix query.
PrefixResponse classify_cached(PlStarTable& tbl, Teacher& teacher, const Word& x);

// Case analysis run for x = s and then each sa after s entered S_pre;
// standard mode has the swap case, optimised mode promotes the first
// dead prefix found in S_pre.A into S_pre immediately.
void update_after_spre_add(PlStarTable& tbl, Teacher& teacher, const Word& x);

// Adds s to S_pre (no-op when present) and runs update_after_spre_add
// for s and each one-symbol extension in alphabet order.
void pl_add_prefix(PlStarTable& tbl, Teacher& teacher, const Word& s);

// Adds e to S_suff (no-op when present) and fills the new column for
// every stored row.
void pl_add_suffix(PlStarTable& tbl, Teacher& teacher, const Word& e);

// Adds w and all its prefixes to S_pre, shortest first.
void add_counterexample(PlStarTable& tbl, Teacher& teacher, const Word& w);

// None if closed; else the first (s, a) with sa stored whose row matches
// no row of S_pre intersect S_stored.
std::optional<ClosednessWitness> pl_is_closed(PlStarTable& tbl);

// None if consistent; else the suffix a.e to add. Unstored successors
// contribute the stored dead prefix's row (throws std::logic_error when
// none exists, which would contradict the table invariants).
std::optional<Word> pl_is_consistent(PlStarTable& tbl);

// Hypothesis from a closed and consistent table.
Dfa build_hypothesis(const PlStarTable& tbl);

// Equivalent L* table: T(se) copied for stored s, all-zero otherwise.
LStarTable to_lstar_table(const PlStarTable& tbl);

struct PlstarOptions {
    double timeout_secs = 120.0;
    Outcome success_outcome = Outcome::ExactSuccess;
    std::function<void(const PlStarTable&, const Dfa&)> after_round;
    // Called after every table mutation step (prefix addition, suffix
    // addition, counterexample); used by invariant checks.
    std::function<void(const PlStarTable&)> after_mutation;
};

LearnResult plstar_learn(Teacher& teacher, const EqOracle& eq_oracle, PlMode mode,
                         const PlstarOptions& options = {});

}  // namespace pql
