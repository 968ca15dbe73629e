// Core DFA representation and algorithmic services: run, classify,
// liveness, minimization, deterministic counterexamples, grammar
// conversion, exact word counting and uniform sampling.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pql {

// A word is a sequence of symbols; each symbol is one byte (code points
// 0..255), so std::string doubles as the word type.
using Word = std::string;

enum class PrefixResponse { Member, LivePrefix, DeadPrefix };

const char* to_string(PrefixResponse r);

// Ordered set of distinct symbols with O(1) symbol -> position lookup.
class Alphabet {
public:
    Alphabet();
    explicit Alphabet(std::string symbols);

    int size() const { return static_cast<int>(symbols_.size()); }
    char at(int i) const { return symbols_[static_cast<size_t>(i)]; }
    bool contains(char c) const { return index_[static_cast<unsigned char>(c)] >= 0; }
    // Throws std::invalid_argument if c is not in the alphabet.
    int index_of(char c) const;
    const std::string& symbols() const { return symbols_; }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

private:
    std::string symbols_;
    std::array<int, 256> index_;
};

// Total-transition DFA over an ordered alphabet. States are 0..num_states-1.
struct Dfa {
    Alphabet alphabet;
    int num_states = 0;
    int start = 0;
    std::vector<bool> accepting;
    // Row-major: delta[q * alphabet.size() + symbol_index].
    std::vector<int> delta;

    int next(int q, int sym_index) const { return delta[static_cast<size_t>(q) * alphabet.size() + sym_index]; }
    bool valid() const;
};

// live[q] == true iff some accepting state is reachable from q.
struct LivenessTable {
    std::vector<bool> live;
};

// Right-linear grammar with one variable per DFA state.
// A rule is B -> aC (rhs set) or B -> a (rhs empty).
struct GrammarRule {
    int lhs;
    char symbol;
    std::optional<int> rhs;

    bool operator==(const GrammarRule& o) const {
        return lhs == o.lhs && symbol == o.symbol && rhs == o.rhs;
    }
};

struct RegularGrammar {
    int num_variables = 0;
    int start = 0;
    std::vector<GrammarRule> rules;
};

// Accepts iff delta*(start, w) is accepting. Throws on foreign symbols.
bool run(const Dfa& dfa, const Word& w);

// Backward reachability from accepting states over reversed edges.
LivenessTable coaccessible(const Dfa& dfa);

// Member / live prefix / dead prefix of L(dfa).
PrefixResponse classify(const Dfa& dfa, const LivenessTable& liveness, const Word& w);

// Language-equivalent DFA with the minimal number of states, renumbered
// canonically (breadth-first from the start state, symbols in alphabet
// order).
Dfa minimize(const Dfa& dfa);

// None iff L(a) = L(b); otherwise the length-lexicographically least
// string in the symmetric difference (BFS over the product automaton,
// symbols explored in alphabet order). Throws on alphabet mismatch.
std::optional<Word> shortest_counterexample(const Dfa& a, const Dfa& b);

// {B -> aC | delta(B,a)=C} union {B -> a | delta(B,a) in F};
// L(G) = L(M) \ {epsilon}.
RegularGrammar to_regular_grammar(const Dfa& dfa);

// per_state[q][n] = exact number of length-n words accepted from q.
struct WordCounts {
    std::vector<std::vector<mpz_class>> per_state;
};

WordCounts count_words(const Dfa& dfa, int l_max);

// Uniform draw over all accepted words with length in [l_min, l_max].
// Precomputes counts once; draw() is cheap thereafter.
class UniformWordSampler {
public:
    UniformWordSampler(const Dfa& dfa, int l_min, int l_max);

    bool empty() const { return total_ == 0; }
    // Throws std::domain_error when no accepted word lies in the range.
    Word draw(std::mt19937_64& rng) const;

private:
    const Dfa* dfa_;
    int l_min_;
    int l_max_;
    WordCounts counts_;
    mpz_class total_;
};

Word sample_uniform(const Dfa& dfa, int l_min, int l_max, std::mt19937_64& rng);

// Uniform integer in [0, bound), bound > 0, via rejection sampling on
// the top chunk so no floating-point bias is introduced.
mpz_class random_below(const mpz_class& bound, std::mt19937_64& rng);

// Graphviz export: one node per state, doubled circle for accepting
// states, edge labels with consecutive code points coalesced into ranges.
std::string to_dot(const Dfa& dfa);

}  // namespace pql
