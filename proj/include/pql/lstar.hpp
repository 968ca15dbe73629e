// Classic L* with deterministic iteration orders (insertion order for
// S_pre/S_suff, alphabet order for symbols) shared with the PL* learner
// so the two can be compared round by round.
#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pql/metrics.hpp"
#include "pql/oracle.hpp"

namespace pql {

// Observation table (S_pre, S_suff, T). T is keyed by the full word
// s.e, which doubles as the membership-query cache: no word is ever
// queried twice.
class LStarTable {
public:
    explicit LStarTable(Alphabet alphabet);

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Word>& s_pre() const { return s_pre_; }
    const std::vector<Word>& s_suff() const { return s_suff_; }
    bool in_pre(const Word& w) const { return pre_set_.count(w) > 0; }
    bool in_suff(const Word& w) const { return suff_set_.count(w) > 0; }

    bool has_value(const Word& w) const { return values_.count(w) > 0; }
    bool value(const Word& w) const;
    void set_value(const Word& w, bool v) { values_.emplace(w, v); }

    void push_pre(const Word& w);
    void push_suff(const Word& w);

    // Counted row comparison: cells compared suffix-by-suffix in S_suff
    // insertion order, stopping at the first mismatch; every performed
    // pair comparison bumps cell_comparisons.
    bool rows_equal(const Word& label1, const Word& label2);
    // Same counting rule; returns the first mismatching suffix, if any.
    std::optional<Word> rows_first_mismatch(const Word& label1, const Word& label2);

    long long cell_comparisons = 0;

    // Structural equality on (S_pre, S_suff) sequences and every defined
    // cell; comparison counters and caches are ignored.
    bool operator==(const LStarTable& other) const;

private:
    Alphabet alphabet_;
    std::vector<Word> s_pre_;
    std::vector<Word> s_suff_;
    std::unordered_set<Word> pre_set_;
    std::unordered_set<Word> suff_set_;
    std::unordered_map<Word, bool> values_;
};

struct ClosednessWitness {
    Word s;
    char a;
};

// None if closed; else the first violating (s, a) in S_pre insertion
// order then alphabet order.
std::optional<ClosednessWitness> lstar_is_closed(LStarTable& tbl);

// None if consistent; else the suffix a.e to add, from the first
// violating (s1, s2, a, e) in deterministic order.
std::optional<Word> lstar_is_consistent(LStarTable& tbl);

// Hypothesis from a closed and consistent table; throws std::logic_error
// when a successor row matches no S_pre row.
Dfa build_hypothesis(const LStarTable& tbl);

// Adds s to S_pre (no-op when present) and fills the rows for s and
// every one-symbol extension via cached membership queries.
void lstar_add_prefix(LStarTable& tbl, Teacher& teacher, const Word& s);
// Adds e to S_suff (no-op when present) and fills the new column.
void lstar_add_suffix(LStarTable& tbl, Teacher& teacher, const Word& e);
// Adds w and all its prefixes to S_pre, shortest first.
void lstar_add_counterexample(LStarTable& tbl, Teacher& teacher, const Word& w);

struct LearnResult {
    std::optional<Dfa> hypothesis;
    RunMetrics metrics;
};

struct LstarOptions {
    double timeout_secs = 120.0;
    Outcome success_outcome = Outcome::ExactSuccess;
    // Called once per round with the table after the equivalence query
    // was answered (and any counterexample incorporated).
    std::function<void(const LStarTable&, const Dfa&)> after_round;
};

LearnResult lstar_learn(Teacher& teacher, const EqOracle& eq_oracle, const LstarOptions& options = {});

}  // namespace pql
