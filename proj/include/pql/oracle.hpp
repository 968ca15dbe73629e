// Teachers and samplers: prefix/membership oracles over a target DFA,
// exact and PAC equivalence oracles, and the two sampling distributions
// used in PAC mode.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "pql/automata.hpp"

namespace pql {

// Answers prefix, membership and equivalence queries for a fixed target
// DFA, tallying each query. Confine one instance to one learning run.
class Teacher {
public:
    explicit Teacher(Dfa target);

    const Dfa& target() const { return target_; }
    const LivenessTable& liveness() const { return liveness_; }

    PrefixResponse prefix_query(const Word& w);
    bool membership_query(const Word& w);
    // None iff L(h) = L(target); otherwise the deterministic shortest
    // counterexample.
    std::optional<Word> equivalence_exact(const Dfa& h);
    // Lets the PAC oracle tally its equivalence tests through the
    // teacher's counter.
    void tally_equivalence_query() { equivalence_queries_ += 1; }

    long long prefix_queries() const { return prefix_queries_; }
    long long membership_queries() const { return membership_queries_; }
    long long equivalence_queries() const { return equivalence_queries_; }

private:
    Dfa target_;
    LivenessTable liveness_;
    long long prefix_queries_ = 0;
    long long membership_queries_ = 0;
    long long equivalence_queries_ = 0;
};

struct PacParams {
    double epsilon = 0.05;  // accuracy, in (0, 1]
    double delta = 0.05;    // confidence, in (0, 1]
    long long eq_index = 1; // i, count of equivalence tests issued so far
};

// q_i = ceil((1/epsilon) * (ln(1/delta) + i * ln 2)).
long long pac_calls(const PacParams& params);

// Draws one word from a fixed distribution over A*; nullopt = failed
// draw (possible for the prefix-based sampler).
using Sampler = std::function<std::optional<Word>(std::mt19937_64&)>;

// PAC equivalence test: exactly q_i draws (failed draws count as
// vacuously correct); returns the first sample the hypothesis
// misclassifies, else nullopt. Increments the teacher's equivalence
// counter and params.eq_index.
std::optional<Word> equivalence_pac(Teacher& t, const Dfa& h, PacParams& params,
                                    const Sampler& sampler, std::mt19937_64& rng);

// Length uniform on [l_min, l_max], then symbols i.i.d. uniform.
Word sample_pseudo_uniform(int l_min, int l_max, const Alphabet& alphabet, std::mt19937_64& rng);

struct SamplerConfig {
    double p = 0.5;   // probability of attempting a positive example
    int m = 200;      // maximum attempts
    int l_min = 1;    // minimum length for positive examples
    int l_max = 20;   // maximum length
};

// Prefix-query-based sampler. Walks the target via prefix queries
// (each counted by the teacher), extending a prefix symbol by symbol;
// returns nullopt after m failed attempts. Overlong prefixes and
// exhausted choice sets reset the walk and consume an attempt.
std::optional<Word> sample_prefix_based(const SamplerConfig& cfg, Teacher& t, std::mt19937_64& rng);

Sampler make_pseudo_uniform_sampler(int l_min, int l_max, Alphabet alphabet);
// Captures the teacher by reference; keep the teacher alive while the
// sampler is in use.
Sampler make_prefix_sampler(const SamplerConfig& cfg, Teacher& t);

// Equivalence oracles as passed to the learners.
using EqOracle = std::function<std::optional<Word>(const Dfa&)>;

EqOracle make_exact_oracle(Teacher& t);
EqOracle make_pac_oracle(Teacher& t, PacParams& params, Sampler sampler, std::mt19937_64& rng);

}  // namespace pql
