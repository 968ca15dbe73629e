#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "pql/plstar.hpp"
#include "pql/targets.hpp"

using namespace pql;
using targets::TargetName;
using targets::TargetSpec;

namespace {

Dfa empty_language() {
    Dfa d;
    d.alphabet = Alphabet("01");
    d.num_states = 1;
    d.start = 0;
    d.accepting = {false};
    d.delta = {0, 0};
    return d;
}

Dfa tiny_target(TargetName name, std::optional<int> depth) {
    return targets::build(TargetSpec{name, depth, targets::tiny_alphabet(name)});
}

Dfa random_dfa(int num_states, const Alphabet& a, std::mt19937_64& rng) {
    Dfa d;
    d.alphabet = a;
    d.num_states = num_states;
    d.start = 0;
    std::uniform_int_distribution<int> state(0, num_states - 1);
    std::bernoulli_distribution acc(0.5);
    for (int q = 0; q < num_states; ++q) {
        d.accepting.push_back(acc(rng));
        for (int s = 0; s < a.size(); ++s) d.delta.push_back(state(rng));
    }
    return d;
}

// Structural invariants that must hold after every table mutation.
void check_invariants(const PlStarTable& tbl, const Dfa& target, const LivenessTable& live) {
    // Every recorded dead prefix really is one, and the set is minimal.
    for (size_t i = 0; i < tbl.s_dead_pref().size(); ++i) {
        const Word& d = tbl.s_dead_pref()[i];
        CHECK(classify(target, live, d) == PrefixResponse::DeadPrefix);
        for (size_t j = 0; j < tbl.s_dead_pref().size(); ++j) {
            if (i == j) continue;
            const Word& other = tbl.s_dead_pref()[j];
            bool is_prefix = other.size() >= d.size() && other.compare(0, d.size(), d) == 0;
            CHECK(!is_prefix);
        }
    }
    // At most one stored dead prefix in standard mode; in optimised mode
    // every stored dead prefix has been promoted into S_pre.
    if (tbl.mode() == PlMode::Standard) {
        CHECK(tbl.stored_dead().size() <= 1);
    } else {
        for (const Word& d : tbl.stored_dead()) CHECK(tbl.in_pre(d));
    }
    // Stored rows are fully resolved, with values matching the target.
    for (const Word& s : tbl.s_stored()) {
        for (const Word& e : tbl.s_suff()) {
            REQUIRE(tbl.has_value(s + e));
            CHECK(tbl.value(s + e) == run(target, s + e));
        }
    }
}

}  // namespace

TEST_CASE("the empty language costs a single prefix query") {
    Teacher t(empty_language());
    EqOracle oracle = make_exact_oracle(t);
    LearnResult r = plstar_learn(t, oracle, PlMode::Standard);
    REQUIRE(r.hypothesis.has_value());
    CHECK(r.hypothesis->num_states == 1);
    CHECK(!r.hypothesis->accepting[0]);
    CHECK(r.metrics.mq_or_pq == 1);  // epsilon is dead; everything else is inferred
    CHECK(r.metrics.eq == 1);
    CHECK(r.metrics.learner == LearnerKind::PlstarStandard);
}

TEST_CASE("dead prefixes shortcut later queries without asking the teacher") {
    Dfa target = tiny_target(TargetName::Dyck, 1);
    Teacher t(target);
    PlStarTable tbl(PlMode::Standard, target.alphabet);
    pl_add_prefix(tbl, t, "");

    // "(" is live but ")" and the other closers are dead one-symbol
    // extensions, so S_DEAD_PREF is populated after the first fill.
    CHECK(tbl.extends_dead_pref(")"));
    long long before = t.prefix_queries();
    CHECK(classify_cached(tbl, t, ")()[]") == PrefixResponse::DeadPrefix);
    CHECK(resolve_membership(tbl, t, ")]") == 0);
    CHECK(t.prefix_queries() == before);  // no new queries for dead extensions
}

TEST_CASE("classify_cached agrees with the target's classification") {
    std::mt19937_64 rng(5);
    Alphabet a("01");
    for (int i = 0; i < 30; ++i) {
        Dfa target = random_dfa(3, a, rng);
        LivenessTable live = coaccessible(target);
        Teacher t(target);
        PlStarTable tbl(PlMode::Standard, a);
        pl_add_prefix(tbl, t, "");
        pl_add_prefix(tbl, t, "0");
        for (const Word& w : {"", "0", "1", "00", "01", "10", "11", "010", "110"}) {
            CHECK(classify_cached(tbl, t, w) == classify(target, live, w));
        }
    }
}

TEST_CASE("table invariants hold after every mutation") {
    for (PlMode mode : {PlMode::Standard, PlMode::Optimised}) {
        for (auto spec : {TargetSpec{TargetName::Dyck, 1, targets::tiny_alphabet(TargetName::Dyck)},
                          TargetSpec{TargetName::Arith, 2, targets::tiny_alphabet(TargetName::Arith)},
                          TargetSpec{TargetName::Date, std::nullopt,
                                     targets::tiny_alphabet(TargetName::Date)}}) {
            Dfa target = targets::build(spec);
            LivenessTable live = coaccessible(target);
            Teacher t(target);
            EqOracle oracle = make_exact_oracle(t);
            PlstarOptions options;
            int mutations = 0;
            options.after_mutation = [&](const PlStarTable& tbl) {
                mutations += 1;
                check_invariants(tbl, target, live);
            };
            LearnResult r = plstar_learn(t, oracle, mode, options);
            REQUIRE(r.hypothesis.has_value());
            CHECK(!shortest_counterexample(*r.hypothesis, target).has_value());
            CHECK(mutations > 0);
        }
    }
}

TEST_CASE("standard tables convert to the tables classic learning builds") {
    for (auto spec : {TargetSpec{TargetName::Dyck, 2, targets::tiny_alphabet(TargetName::Dyck)},
                      TargetSpec{TargetName::Json, 1, targets::tiny_alphabet(TargetName::Json)},
                      TargetSpec{TargetName::EvenLength, std::nullopt,
                                 targets::tiny_alphabet(TargetName::EvenLength)}}) {
        Dfa target = targets::build(spec);

        std::vector<LStarTable> classic_rounds;
        Teacher t1(target);
        EqOracle o1 = make_exact_oracle(t1);
        LstarOptions lopts;
        lopts.after_round = [&](const LStarTable& tbl, const Dfa&) { classic_rounds.push_back(tbl); };
        LearnResult lr = lstar_learn(t1, o1, lopts);

        std::vector<LStarTable> converted_rounds;
        Teacher t2(target);
        EqOracle o2 = make_exact_oracle(t2);
        PlstarOptions popts;
        popts.after_round = [&](const PlStarTable& tbl, const Dfa&) {
            converted_rounds.push_back(to_lstar_table(tbl));
        };
        LearnResult pr = plstar_learn(t2, o2, PlMode::Standard, popts);

        // Lockstep: same number of rounds, identical tables each round,
        // identical equivalence-query counts, equivalent hypotheses.
        REQUIRE(classic_rounds.size() == converted_rounds.size());
        for (size_t i = 0; i < classic_rounds.size(); ++i) {
            CHECK(classic_rounds[i] == converted_rounds[i]);
        }
        CHECK(lr.metrics.eq == pr.metrics.eq);
        REQUIRE(lr.hypothesis.has_value());
        REQUIRE(pr.hypothesis.has_value());
        CHECK(!shortest_counterexample(*lr.hypothesis, *pr.hypothesis).has_value());
    }
}

TEST_CASE("converted tables give all-zero rows to unstored labels") {
    Dfa target = tiny_target(TargetName::Dyck, 1);
    Teacher t(target);
    PlStarTable tbl(PlMode::Standard, target.alphabet);
    pl_add_prefix(tbl, t, "");

    LStarTable converted = to_lstar_table(tbl);
    for (const Word& s : tbl.s_pre()) {
        for (int a = 0; a < target.alphabet.size(); ++a) {
            Word sa = s + target.alphabet.at(a);
            if (tbl.in_stored(sa)) continue;
            for (const Word& e : converted.s_suff()) CHECK(!converted.value(sa + e));
        }
    }
}

TEST_CASE("prefix queries beat membership queries on sparse targets") {
    // q - q' >= |S_suff| * (1 + |A|) - 1 whenever the learned table has
    // at least one dead prefix.
    for (auto spec : {TargetSpec{TargetName::Dyck, 2, targets::tiny_alphabet(TargetName::Dyck)},
                      TargetSpec{TargetName::Arith, 2, targets::tiny_alphabet(TargetName::Arith)},
                      TargetSpec{TargetName::Json, 1, targets::tiny_alphabet(TargetName::Json)},
                      TargetSpec{TargetName::Date, std::nullopt,
                                 targets::tiny_alphabet(TargetName::Date)}}) {
        Dfa target = targets::build(spec);

        Teacher t1(target);
        LearnResult lr = lstar_learn(t1, make_exact_oracle(t1));

        Teacher t2(target);
        long long suffixes = 0;
        PlstarOptions popts;
        popts.after_round = [&](const PlStarTable& tbl, const Dfa&) {
            suffixes = static_cast<long long>(tbl.s_suff().size());
        };
        LearnResult pr = plstar_learn(t2, make_exact_oracle(t2), PlMode::Standard, popts);

        long long gap = lr.metrics.mq_or_pq - pr.metrics.mq_or_pq;
        long long bound = suffixes * (1 + target.alphabet.size()) - 1;
        CHECK(gap >= bound);
    }
}

TEST_CASE("dense targets cost exactly as many prefix as membership queries") {
    Dfa target = tiny_target(TargetName::EvenLength, std::nullopt);
    Teacher t1(target);
    LearnResult lr = lstar_learn(t1, make_exact_oracle(t1));
    Teacher t2(target);
    LearnResult pr = plstar_learn(t2, make_exact_oracle(t2), PlMode::Standard);
    CHECK(lr.metrics.mq_or_pq == pr.metrics.mq_or_pq);

    // The 257-query worst case flips to a single query on the empty
    // language: with epsilon dead, the whole table is inferred.
    Dfa empty256;
    empty256.alphabet = targets::default_alphabet();
    empty256.num_states = 1;
    empty256.start = 0;
    empty256.accepting = {false};
    empty256.delta.assign(256, 0);
    Teacher t3(empty256);
    LearnResult lr256 = lstar_learn(t3, make_exact_oracle(t3));
    Teacher t4(empty256);
    LearnResult pr256 = plstar_learn(t4, make_exact_oracle(t4), PlMode::Standard);
    CHECK(lr256.metrics.mq_or_pq == 257);
    CHECK(pr256.metrics.mq_or_pq == 1);
}

TEST_CASE("both modes learn random targets exactly") {
    std::mt19937_64 rng(23);
    Alphabet a("01");
    for (int i = 0; i < 30; ++i) {
        Dfa target = random_dfa(3, a, rng);
        for (PlMode mode : {PlMode::Standard, PlMode::Optimised}) {
            Teacher t(target);
            LearnResult r = plstar_learn(t, make_exact_oracle(t), mode);
            REQUIRE(r.hypothesis.has_value());
            CHECK(!shortest_counterexample(*r.hypothesis, target).has_value());
            CHECK(r.hypothesis->num_states == minimize(target).num_states);
        }
    }
}

TEST_CASE("closedness and consistency agree with the classic predicates") {
    std::mt19937_64 rng(29);
    Alphabet a("01");
    int states_checked = 0;
    for (int i = 0; i < 120 && states_checked < 200; ++i) {
        Dfa target = random_dfa(3, a, rng);
        Teacher t(target);
        EqOracle oracle = make_exact_oracle(t);
        PlstarOptions options;
        options.after_mutation = [&](const PlStarTable& tbl) {
            states_checked += 1;
            PlStarTable& mutable_tbl = const_cast<PlStarTable&>(tbl);
            LStarTable converted = to_lstar_table(tbl);
            CHECK(pl_is_closed(mutable_tbl).has_value() == lstar_is_closed(converted).has_value());
            CHECK(pl_is_consistent(mutable_tbl).has_value() ==
                  lstar_is_consistent(converted).has_value());
        };
        plstar_learn(t, oracle, PlMode::Standard, options);
    }
    CHECK(states_checked >= 200);
}

TEST_CASE("optimised promotion stores the promoted prefix") {
    Dfa target = tiny_target(TargetName::Dyck, 1);
    Teacher t(target);
    EqOracle oracle = make_exact_oracle(t);
    PlstarOptions options;
    bool saw_promoted_dead = false;
    options.after_mutation = [&](const PlStarTable& tbl) {
        for (const Word& d : tbl.stored_dead()) {
            if (tbl.in_pre(d) && tbl.in_stored(d)) saw_promoted_dead = true;
        }
    };
    LearnResult r = plstar_learn(t, oracle, PlMode::Optimised, options);
    REQUIRE(r.hypothesis.has_value());
    CHECK(!shortest_counterexample(*r.hypothesis, target).has_value());
    CHECK(saw_promoted_dead);
}
