#include "pql/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pql {

const char* to_string(PrefixResponse r) {
    switch (r) {
        case PrefixResponse::Member: return "MEMBER";
        case PrefixResponse::LivePrefix: return "LIVE_PREF";
        case PrefixResponse::DeadPrefix: return "DEAD_PREF";
    }
    return "?";
}

Alphabet::Alphabet() { index_.fill(-1); }

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) {
        throw std::invalid_argument("alphabet must be non-empty");
    }
    index_.fill(-1);
    for (size_t i = 0; i < symbols_.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(symbols_[i]);
        if (index_[c] >= 0) {
            throw std::invalid_argument("alphabet symbols must be distinct");
        }
        index_[c] = static_cast<int>(i);
    }
}

int Alphabet::index_of(char c) const {
    int i = index_[static_cast<unsigned char>(c)];
    if (i < 0) {
        throw std::invalid_argument("symbol not in alphabet");
    }
    return i;
}

bool Dfa::valid() const {
    if (num_states <= 0 || start < 0 || start >= num_states) return false;
    if (static_cast<int>(accepting.size()) != num_states) return false;
    if (delta.size() != static_cast<size_t>(num_states) * alphabet.size()) return false;
    for (int q : delta) {
        if (q < 0 || q >= num_states) return false;
    }
    return true;
}

bool run(const Dfa& dfa, const Word& w) {
    int q = dfa.start;
    for (char c : w) {
        q = dfa.next(q, dfa.alphabet.index_of(c));
    }
    return dfa.accepting[q];
}

LivenessTable coaccessible(const Dfa& dfa) {
    // Backward BFS from the accepting states over reversed edges.
    std::vector<std::vector<int>> rev(dfa.num_states);
    for (int q = 0; q < dfa.num_states; ++q) {
        for (int a = 0; a < dfa.alphabet.size(); ++a) {
            rev[dfa.next(q, a)].push_back(q);
        }
    }
    LivenessTable result;
    result.live.assign(dfa.num_states, false);
    std::deque<int> queue;
    for (int q = 0; q < dfa.num_states; ++q) {
        if (dfa.accepting[q]) {
            result.live[q] = true;
            queue.push_back(q);
        }
    }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int p : rev[q]) {
            if (!result.live[p]) {
                result.live[p] = true;
                queue.push_back(p);
            }
        }
    }
    return result;
}

PrefixResponse classify(const Dfa& dfa, const LivenessTable& liveness, const Word& w) {
    int q = dfa.start;
    for (char c : w) {
        q = dfa.next(q, dfa.alphabet.index_of(c));
    }
    if (dfa.accepting[q]) return PrefixResponse::Member;
    return liveness.live[q] ? PrefixResponse::LivePrefix : PrefixResponse::DeadPrefix;
}

namespace {

// States reachable from the start; returns old -> new id (-1 if dropped),
// numbering in BFS discovery order so results are canonical.
std::vector<int> reachable_renumbering(const Dfa& dfa, int* out_count) {
    std::vector<int> renum(dfa.num_states, -1);
    std::deque<int> queue;
    renum[dfa.start] = 0;
    int count = 1;
    queue.push_back(dfa.start);
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int a = 0; a < dfa.alphabet.size(); ++a) {
            int r = dfa.next(q, a);
            if (renum[r] < 0) {
                renum[r] = count++;
                queue.push_back(r);
            }
        }
    }
    *out_count = count;
    return renum;
}

Dfa apply_renumbering(const Dfa& dfa, const std::vector<int>& renum, int count) {
    Dfa result;
    result.alphabet = dfa.alphabet;
    result.num_states = count;
    result.start = renum[dfa.start];
    result.accepting.assign(count, false);
    result.delta.assign(static_cast<size_t>(count) * dfa.alphabet.size(), 0);
    for (int q = 0; q < dfa.num_states; ++q) {
        if (renum[q] < 0) continue;
        result.accepting[renum[q]] = dfa.accepting[q];
        for (int a = 0; a < dfa.alphabet.size(); ++a) {
            result.delta[static_cast<size_t>(renum[q]) * dfa.alphabet.size() + a] = renum[dfa.next(q, a)];
        }
    }
    return result;
}

}  // namespace

Dfa minimize(const Dfa& dfa) {
    // Trim unreachable states first.
    int reach_count = 0;
    std::vector<int> reach = reachable_renumbering(dfa, &reach_count);
    Dfa trimmed = apply_renumbering(dfa, reach, reach_count);

    // Moore partition refinement: split classes by (class, successor
    // class signature) until a fixpoint.
    int n = trimmed.num_states;
    int k = trimmed.alphabet.size();
    std::vector<int> cls(n);
    int num_classes = 1;
    bool has_accepting = false, has_rejecting = false;
    for (int q = 0; q < n; ++q) {
        cls[q] = trimmed.accepting[q] ? 1 : 0;
        (trimmed.accepting[q] ? has_accepting : has_rejecting) = true;
    }
    if (has_accepting && has_rejecting) {
        num_classes = 2;
    } else {
        std::fill(cls.begin(), cls.end(), 0);
    }

    while (true) {
        std::map<std::vector<int>, int> sig_to_class;
        std::vector<int> next_cls(n);
        std::vector<int> sig(k + 1);
        for (int q = 0; q < n; ++q) {
            sig[0] = cls[q];
            for (int a = 0; a < k; ++a) sig[a + 1] = cls[trimmed.next(q, a)];
            auto [it, inserted] = sig_to_class.emplace(sig, static_cast<int>(sig_to_class.size()));
            next_cls[q] = it->second;
        }
        int next_count = static_cast<int>(sig_to_class.size());
        cls = std::move(next_cls);
        // Each pass refines the previous partition, so an unchanged class
        // count means the partition itself is unchanged.
        if (next_count == num_classes) break;
        num_classes = next_count;
    }
    Dfa quotient;
    quotient.alphabet = trimmed.alphabet;
    quotient.num_states = num_classes;
    quotient.start = cls[trimmed.start];
    quotient.accepting.assign(num_classes, false);
    quotient.delta.assign(static_cast<size_t>(num_classes) * k, 0);
    for (int q = 0; q < n; ++q) {
        quotient.accepting[cls[q]] = trimmed.accepting[q];
        for (int a = 0; a < k; ++a) {
            quotient.delta[static_cast<size_t>(cls[q]) * k + a] = cls[trimmed.next(q, a)];
        }
    }

    // Canonical numbering for deterministic output.
    int count = 0;
    std::vector<int> renum = reachable_renumbering(quotient, &count);
    return apply_renumbering(quotient, renum, count);
}

std::optional<Word> shortest_counterexample(const Dfa& a, const Dfa& b) {
    if (a.alphabet != b.alphabet) {
        throw std::invalid_argument("alphabet mismatch");
    }
    int k = a.alphabet.size();
    auto pack = [&](int qa, int qb) { return static_cast<int64_t>(qa) * b.num_states + qb; };
    auto differs = [&](int qa, int qb) { return a.accepting[qa] != b.accepting[qb]; };

    // BFS over the product automaton; within a level states are enqueued
    // in lexicographic path order, so the first differing state dequeued
    // is reached by the length-lexicographically least distinguishing
    // word.
    std::vector<bool> visited(static_cast<size_t>(a.num_states) * b.num_states, false);
    struct Node {
        int qa, qb;
        int64_t parent;  // index into nodes, -1 for root
        char sym;
    };
    std::vector<Node> nodes;
    std::deque<int64_t> queue;
    nodes.push_back({a.start, b.start, -1, 0});
    visited[pack(a.start, b.start)] = true;
    queue.push_back(0);
    while (!queue.empty()) {
        int64_t idx = queue.front();
        queue.pop_front();
        Node node = nodes[static_cast<size_t>(idx)];
        if (differs(node.qa, node.qb)) {
            Word w;
            for (int64_t i = idx; nodes[static_cast<size_t>(i)].parent >= 0; i = nodes[static_cast<size_t>(i)].parent) {
                w.push_back(nodes[static_cast<size_t>(i)].sym);
            }
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (int s = 0; s < k; ++s) {
            int qa = a.next(node.qa, s);
            int qb = b.next(node.qb, s);
            int64_t key = pack(qa, qb);
            if (!visited[static_cast<size_t>(key)]) {
                visited[static_cast<size_t>(key)] = true;
                nodes.push_back({qa, qb, idx, a.alphabet.at(s)});
                queue.push_back(static_cast<int64_t>(nodes.size()) - 1);
            }
        }
    }
    return std::nullopt;
}

RegularGrammar to_regular_grammar(const Dfa& dfa) {
    RegularGrammar g;
    g.num_variables = dfa.num_states;
    g.start = dfa.start;
    for (int q = 0; q < dfa.num_states; ++q) {
        for (int a = 0; a < dfa.alphabet.size(); ++a) {
            int r = dfa.next(q, a);
            g.rules.push_back({q, dfa.alphabet.at(a), r});
            if (dfa.accepting[r]) {
                g.rules.push_back({q, dfa.alphabet.at(a), std::nullopt});
            }
        }
    }
    return g;
}

WordCounts count_words(const Dfa& dfa, int l_max) {
    if (l_max < 0) {
        throw std::invalid_argument("l_max must be non-negative");
    }
    WordCounts counts;
    counts.per_state.assign(dfa.num_states, std::vector<mpz_class>(l_max + 1, 0));
    for (int q = 0; q < dfa.num_states; ++q) {
        counts.per_state[q][0] = dfa.accepting[q] ? 1 : 0;
    }
    for (int n = 1; n <= l_max; ++n) {
        for (int q = 0; q < dfa.num_states; ++q) {
            mpz_class sum = 0;
            for (int a = 0; a < dfa.alphabet.size(); ++a) {
                sum += counts.per_state[dfa.next(q, a)][n - 1];
            }
            counts.per_state[q][n] = sum;
        }
    }
    return counts;
}

mpz_class random_below(const mpz_class& bound, std::mt19937_64& rng) {
    if (bound <= 0) {
        throw std::invalid_argument("bound must be positive");
    }
    size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    size_t chunks = (bits + 63) / 64;
    while (true) {
        mpz_class value = 0;
        for (size_t i = 0; i < chunks; ++i) {
            value <<= 64;
            mpz_class chunk;
            mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(uint64_t), 0, 0,
                       std::array<uint64_t, 1>{rng()}.data());
            value |= chunk;
        }
        // Keep only `bits` bits so the acceptance probability is >= 1/2.
        mpz_class mask = (mpz_class(1) << bits) - 1;
        value &= mask;
        if (value < bound) return value;
    }
}

UniformWordSampler::UniformWordSampler(const Dfa& dfa, int l_min, int l_max)
    : dfa_(&dfa), l_min_(l_min), l_max_(l_max), total_(0) {
    if (l_min < 0 || l_min > l_max) {
        throw std::invalid_argument("invalid length range");
    }
    counts_ = count_words(dfa, l_max);
    for (int n = l_min; n <= l_max; ++n) {
        total_ += counts_.per_state[dfa.start][n];
    }
}

Word UniformWordSampler::draw(std::mt19937_64& rng) const {
    if (total_ == 0) {
        throw std::domain_error("no accepted string in the length range");
    }
    // Choose the length with probability proportional to its exact count,
    // then walk transitions weighting each symbol by downstream counts.
    mpz_class r = random_below(total_, rng);
    int length = l_min_;
    for (; length <= l_max_; ++length) {
        const mpz_class& c = counts_.per_state[dfa_->start][length];
        if (r < c) break;
        r -= c;
    }
    Word w;
    int q = dfa_->start;
    for (int remaining = length; remaining > 0; --remaining) {
        for (int a = 0; a < dfa_->alphabet.size(); ++a) {
            const mpz_class& c = counts_.per_state[dfa_->next(q, a)][remaining - 1];
            if (r < c) {
                w.push_back(dfa_->alphabet.at(a));
                q = dfa_->next(q, a);
                break;
            }
            r -= c;
        }
    }
    return w;
}

Word sample_uniform(const Dfa& dfa, int l_min, int l_max, std::mt19937_64& rng) {
    return UniformWordSampler(dfa, l_min, l_max).draw(rng);
}

namespace {

std::string dot_escape_symbol(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x21 && u <= 0x7e && c != '"' && c != '\\') {
        return std::string(1, c);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "\\\\x%02x", u);
    return buf;
}

}  // namespace

std::string to_dot(const Dfa& dfa) {
    std::ostringstream out;
    out << "digraph dfa {\n";
    out << "  rankdir=LR;\n";
    out << "  __start [shape=point];\n";
    for (int q = 0; q < dfa.num_states; ++q) {
        out << "  q" << q << " [shape=" << (dfa.accepting[q] ? "doublecircle" : "circle") << "];\n";
    }
    out << "  __start -> q" << dfa.start << ";\n";
    for (int q = 0; q < dfa.num_states; ++q) {
        // Group symbols by destination, then coalesce consecutive code
        // points into ranges for readable labels over large alphabets.
        std::map<int, std::vector<unsigned char>> by_dest;
        for (int a = 0; a < dfa.alphabet.size(); ++a) {
            by_dest[dfa.next(q, a)].push_back(static_cast<unsigned char>(dfa.alphabet.at(a)));
        }
        for (auto& [dest, syms] : by_dest) {
            std::sort(syms.begin(), syms.end());
            std::string label;
            size_t i = 0;
            while (i < syms.size()) {
                size_t j = i;
                while (j + 1 < syms.size() && syms[j + 1] == syms[j] + 1) ++j;
                if (!label.empty()) label += ",";
                if (j == i) {
                    label += dot_escape_symbol(static_cast<char>(syms[i]));
                } else {
                    label += dot_escape_symbol(static_cast<char>(syms[i])) + "-" +
                             dot_escape_symbol(static_cast<char>(syms[j]));
                }
                i = j + 1;
            }
            out << "  q" << q << " -> q" << dest << " [label=\"" << label << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace pql
