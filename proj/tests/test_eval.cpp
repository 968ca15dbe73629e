#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pql/eval.hpp"

using namespace pql;
using namespace pql::eval;
using targets::TargetName;

namespace {

Dfa all_strings() {
    Dfa d;
    d.alphabet = Alphabet("01");
    d.num_states = 1;
    d.start = 0;
    d.accepting = {true};
    d.delta = {0, 0};
    return d;
}

Dfa empty_language() {
    Dfa d = all_strings();
    d.accepting = {false};
    return d;
}

Dfa ending_in_zero() {
    Dfa d;
    d.alphabet = Alphabet("01");
    d.num_states = 2;
    d.start = 0;
    d.accepting = {false, true};
    d.delta = {1, 0, 1, 0};
    return d;
}

}  // namespace

TEST_CASE("f1_score") {
    CHECK(f1_score(1.0, 1.0) == 1.0);
    CHECK(f1_score(0.5, 0.5) == 0.5);
    CHECK(f1_score(1.0, 0.0) == 0.0);
    CHECK(f1_score(0.0, 0.0) == 0.0);
    CHECK(f1_score(1.0, 0.5) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(f1_score(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(f1_score(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("estimate_f1") {
    std::mt19937_64 rng(3);
    SUBCASE("a hypothesis equal to the target scores a perfect 1") {
        F1Report r = estimate_f1(ending_in_zero(), ending_in_zero(), 1, 6, 500, rng);
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.f1 == 1.0);
    }
    SUBCASE("an empty hypothesis scores precision 1 but f1 0") {
        F1Report r = estimate_f1(empty_language(), ending_in_zero(), 1, 6, 500, rng);
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 0.0);
        CHECK(r.f1 == 0.0);
    }
    SUBCASE("an overgeneralized hypothesis loses precision, not recall") {
        // At length 1, half of all strings end in 0.
        F1Report r = estimate_f1(all_strings(), ending_in_zero(), 1, 1, 20000, rng);
        CHECK(r.precision == doctest::Approx(0.5).epsilon(0.1));
        CHECK(r.recall == 1.0);
    }
    SUBCASE("a target with no strings in range is rejected") {
        CHECK_THROWS_AS(estimate_f1(all_strings(), empty_language(), 1, 6, 10, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(estimate_f1(all_strings(), ending_in_zero(), 1, 6, 0, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("estimate_distance") {
    std::mt19937_64 rng(7);
    Sampler uniform = make_pseudo_uniform_sampler(1, 1, Alphabet("01"));
    CHECK(estimate_distance(ending_in_zero(), ending_in_zero(), uniform, 200, rng) == 0.0);
    CHECK(estimate_distance(empty_language(), all_strings(), uniform, 200, rng) == 1.0);
    double d = estimate_distance(empty_language(), ending_in_zero(), uniform, 20000, rng);
    CHECK(d == doctest::Approx(0.5).epsilon(0.1));

    // Failed draws count as agreement.
    Sampler always_fails = [](std::mt19937_64&) -> std::optional<Word> { return std::nullopt; };
    CHECK(estimate_distance(empty_language(), all_strings(), always_fails, 50, rng) == 0.0);
}

TEST_CASE("desk-scale defaults") {
    CHECK(desk_depth(TargetName::Arith) == 2);
    CHECK(desk_depth(TargetName::Json) == 1);
    CHECK(desk_depth(TargetName::Dyck) == 2);
    CHECK(!desk_depth(TargetName::Date).has_value());
    CHECK(!desk_depth(TargetName::EvenLength).has_value());
    for (TargetName name : {TargetName::Arith, TargetName::Json, TargetName::Dyck,
                            TargetName::Date, TargetName::EvenLength}) {
        auto [lo, hi] = desk_length_range(name);
        CHECK(lo >= 1);
        CHECK(lo <= hi);
        // The range must contain members of the desk-scale target.
        UniformWordSampler sampler(targets::build(desk_spec(name)), lo, hi);
        CHECK(!sampler.empty());
    }
}

TEST_CASE("child_rng streams are deterministic and distinct") {
    std::mt19937_64 a = child_rng(42, 1, 2);
    std::mt19937_64 b = child_rng(42, 1, 2);
    std::mt19937_64 c = child_rng(42, 1, 3);
    CHECK(a() == b());
    std::mt19937_64 a2 = child_rng(42, 1, 2);
    CHECK(a2() != c());
}

TEST_CASE("the exact benchmark agrees across learners") {
    std::vector<targets::TargetSpec> specs = {desk_spec(TargetName::Dyck),
                                              desk_spec(TargetName::EvenLength)};
    std::vector<RunMetrics> records = run_exact_benchmark(specs, 60.0, 0);
    REQUIRE(records.size() == 6);  // 2 targets x 3 learners
    for (size_t i = 0; i < records.size(); i += 3) {
        CHECK(records[i].learner == LearnerKind::Lstar);
        CHECK(records[i + 1].learner == LearnerKind::PlstarStandard);
        CHECK(records[i + 2].learner == LearnerKind::PlstarOptimised);
        // All learners find the same minimal machine, and the classic and
        // standard-prefix learners issue the same number of equivalence
        // queries.
        CHECK(records[i].hypothesis_states == records[i + 1].hypothesis_states);
        CHECK(records[i].hypothesis_states == records[i + 2].hypothesis_states);
        CHECK(records[i].eq == records[i + 1].eq);
        CHECK(records[i].outcome == Outcome::ExactSuccess);
    }
    // even_length is dense: identical query counts.
    CHECK(records[3].mq_or_pq == records[4].mq_or_pq);
}

TEST_CASE("verify_pac on a small target") {
    SamplerConfig config;
    auto [lo, hi] = desk_length_range(TargetName::Dyck);
    config.l_min = lo;
    config.l_max = hi;
    config.p = 1.0;
    std::vector<RunMetrics> metrics;
    PacReport report = verify_pac(desk_spec(TargetName::Dyck), SamplerKind::PrefixBased, config,
                                  0.05, 0.05, 5, 400, 0, 60.0, &metrics);
    CHECK(report.runs == 5);
    CHECK(report.distances.size() == 5);
    CHECK(report.fraction_within_epsilon >= 0.8);
    REQUIRE(metrics.size() == 5);
    for (const RunMetrics& m : metrics) {
        CHECK(m.learner == LearnerKind::PlstarOptimised);
        CHECK(m.target == "dyck-d2");
        CHECK(m.outcome == Outcome::PacSuccess);
    }

    // Same seed, same report.
    PacReport again = verify_pac(desk_spec(TargetName::Dyck), SamplerKind::PrefixBased, config,
                                 0.05, 0.05, 5, 400, 0);
    CHECK(again.distances == report.distances);
}

TEST_CASE("f1_grid shapes and determinism") {
    auto [lo, hi] = desk_length_range(TargetName::Dyck);
    SamplerConfig prefix_cfg;
    prefix_cfg.p = 1.0;
    prefix_cfg.l_min = lo;
    prefix_cfg.l_max = hi;
    SamplerConfig uniform_cfg;
    uniform_cfg.l_min = lo;
    uniform_cfg.l_max = hi;
    std::vector<GridSampler> samplers = {{SamplerKind::PrefixBased, prefix_cfg},
                                         {SamplerKind::PseudoUniform, uniform_cfg}};
    std::vector<GridCell> cells = f1_grid(desk_spec(TargetName::Dyck), samplers, {0.05}, {0.05},
                                          2, 60.0, lo, hi, 300, 0);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].sampler == SamplerKind::PrefixBased);
    CHECK(cells[1].sampler == SamplerKind::PseudoUniform);
    // Members-only sampling recovers the language; blind sampling on a
    // sparse target does not.
    CHECK(cells[0].mean_f1 >= 0.9);
    CHECK(cells[1].mean_f1 <= 0.05);

    std::vector<GridCell> again = f1_grid(desk_spec(TargetName::Dyck), samplers, {0.05}, {0.05},
                                          2, 60.0, lo, hi, 300, 0);
    for (size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].mean_f1 == again[i].mean_f1);

    CHECK(grid_csv_header() == "target,sampler,p,epsilon,delta,mean_f1,runs,timeouts");
    CHECK(to_csv_row(cells[0]).rfind("dyck-d2,prefix,1,", 0) == 0);
}

TEST_CASE("sampler names round-trip") {
    CHECK(parse_sampler("uniform") == SamplerKind::PseudoUniform);
    CHECK(parse_sampler("prefix") == SamplerKind::PrefixBased);
    CHECK(!parse_sampler("nope").has_value());
    CHECK(std::string(to_string(SamplerKind::PrefixBased)) == "prefix");
}
