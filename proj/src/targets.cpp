#include "pql/targets.hpp"

#include <bitset>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace pql::targets {

const char* to_string(TargetName name) {
    switch (name) {
        case TargetName::Arith: return "arith";
        case TargetName::Json: return "json";
        case TargetName::Dyck: return "dyck";
        case TargetName::Date: return "date";
        case TargetName::EvenLength: return "even_length";
    }
    return "?";
}

std::optional<TargetName> parse_target_name(const std::string& s) {
    if (s == "arith") return TargetName::Arith;
    if (s == "json") return TargetName::Json;
    if (s == "dyck") return TargetName::Dyck;
    if (s == "date") return TargetName::Date;
    if (s == "even_length") return TargetName::EvenLength;
    return std::nullopt;
}

bool requires_depth(TargetName name) {
    return name == TargetName::Arith || name == TargetName::Json || name == TargetName::Dyck;
}

std::string target_label(const TargetSpec& spec) {
    std::string label = to_string(spec.name);
    if (spec.depth) label += "-d" + std::to_string(*spec.depth);
    return label;
}

namespace {

void require_terminals(const Alphabet& alphabet, const std::string& terminals) {
    for (char c : terminals) {
        if (!alphabet.contains(c)) {
            throw std::invalid_argument(std::string("alphabet lacks grammar terminal '") + c + "'");
        }
    }
}

// Helper for direct constructions: grows a DFA one state at a time with
// all transitions initially pointing at a dead sink (state 0).
struct DfaBuilder {
    explicit DfaBuilder(Alphabet alphabet) : dfa{std::move(alphabet)} {
        dfa.num_states = 0;
        add_state(false);  // state 0: dead sink
    }

    int add_state(bool accepting) {
        dfa.num_states += 1;
        dfa.accepting.push_back(accepting);
        dfa.delta.resize(static_cast<size_t>(dfa.num_states) * dfa.alphabet.size(), 0);
        return dfa.num_states - 1;
    }

    void edge(int from, char symbol, int to) {
        dfa.delta[static_cast<size_t>(from) * dfa.alphabet.size() + dfa.alphabet.index_of(symbol)] = to;
    }

    Dfa dfa;
};

// arith depth d: language of E = T ((+|-|*|/) T)*, T = digit | ( E' )
// with parenthesis nesting at most d. State = (paren level, expecting a
// term or just finished one).
Dfa build_arith(const Alphabet& alphabet, int depth) {
    static const std::string digits = "0123456789";
    require_terminals(alphabet, digits + "+-*/()");
    DfaBuilder b(alphabet);
    std::vector<int> expect_term(depth + 1), after_term(depth + 1);
    for (int k = 0; k <= depth; ++k) {
        expect_term[k] = b.add_state(false);
        after_term[k] = b.add_state(k == 0);
    }
    for (int k = 0; k <= depth; ++k) {
        for (char c : digits) b.edge(expect_term[k], c, after_term[k]);
        if (k < depth) b.edge(expect_term[k], '(', expect_term[k + 1]);
        if (k >= 1) b.edge(after_term[k], ')', after_term[k - 1]);
        for (char c : std::string("+-*/")) b.edge(after_term[k], c, expect_term[k]);
    }
    b.dfa.start = expect_term[0];
    return b.dfa;
}

// json depth d: objects of comma-separated pairs "key":value, where keys
// and string values hold at most one character (any symbol except '"'),
// values are single digits, strings, or nested objects up to depth d.
Dfa build_json(const Alphabet& alphabet, int depth) {
    static const std::string digits = "0123456789";
    require_terminals(alphabet, std::string("{},:\"") + digits);
    DfaBuilder b(alphabet);
    int start = b.add_state(false);
    int accept = b.add_state(true);
    // Per nesting level: expect-pair, in-key, key-end, expect-colon,
    // expect-value, in-value-string, value-string-end, after-value.
    struct Level {
        int pair, key, key_end, colon, value, vstr, vstr_end, after;
    };
    std::vector<Level> levels(depth + 1);
    for (int k = 1; k <= depth; ++k) {
        levels[k] = {b.add_state(false), b.add_state(false), b.add_state(false),
                     b.add_state(false), b.add_state(false), b.add_state(false),
                     b.add_state(false), b.add_state(false)};
    }
    b.edge(start, '{', levels[1].pair);
    for (int k = 1; k <= depth; ++k) {
        const Level& l = levels[k];
        b.edge(l.pair, '"', l.key);
        for (int a = 0; a < alphabet.size(); ++a) {
            char c = alphabet.at(a);
            if (c == '"') continue;
            b.edge(l.key, c, l.key_end);
            b.edge(l.vstr, c, l.vstr_end);
        }
        b.edge(l.key, '"', l.colon);  // empty key
        b.edge(l.key_end, '"', l.colon);
        b.edge(l.colon, ':', l.value);
        for (char c : digits) b.edge(l.value, c, l.after);
        b.edge(l.value, '"', l.vstr);
        b.edge(l.vstr, '"', l.after);  // empty string value
        b.edge(l.vstr_end, '"', l.after);
        if (k < depth) b.edge(l.value, '{', levels[k + 1].pair);
        b.edge(l.after, ',', l.pair);
        b.edge(l.after, '}', k == 1 ? accept : levels[k - 1].after);
    }
    b.dfa.start = start;
    return b.dfa;
}

// dyck depth d over (), []: state = current stack of open brackets
// (length <= d), discovered breadth-first.
Dfa build_dyck(const Alphabet& alphabet, int depth) {
    require_terminals(alphabet, "()[]");
    DfaBuilder b(alphabet);
    std::map<std::string, int> ids;
    std::deque<std::string> queue;
    auto state_of = [&](const std::string& stack) {
        auto it = ids.find(stack);
        if (it != ids.end()) return it->second;
        int id = b.add_state(stack.empty());
        ids.emplace(stack, id);
        queue.push_back(stack);
        return id;
    };
    int start = state_of("");
    while (!queue.empty()) {
        std::string stack = queue.front();
        queue.pop_front();
        int q = ids[stack];
        if (static_cast<int>(stack.size()) < depth) {
            b.edge(q, '(', state_of(stack + "("));
            b.edge(q, '[', state_of(stack + "["));
        }
        if (!stack.empty()) {
            std::string popped = stack.substr(0, stack.size() - 1);
            if (stack.back() == '(') b.edge(q, ')', state_of(popped));
            if (stack.back() == '[') b.edge(q, ']', state_of(popped));
        }
    }
    b.dfa.start = start;
    return b.dfa;
}

// --- date: compiled from the DD/MM/YY regular expression ---
//
// The pattern is transcribed literally, including the commas inside the
// character classes [1,2] and [0,1] (they match a literal ','), so the
// compiled DFA agrees with a reference regex engine given the same
// pattern.

using CharClass = std::bitset<256>;

CharClass cls(const std::string& chars) {
    CharClass c;
    for (char ch : chars) c.set(static_cast<unsigned char>(ch));
    return c;
}

struct Nfa {
    // eps[q] = epsilon successors; edges[q] = labeled successors.
    std::vector<std::vector<int>> eps;
    std::vector<std::vector<std::pair<CharClass, int>>> edges;

    int add_state() {
        eps.emplace_back();
        edges.emplace_back();
        return static_cast<int>(eps.size()) - 1;
    }
};

struct Frag {
    int start, accept;
};

Frag lit(Nfa& nfa, const CharClass& c) {
    Frag f{nfa.add_state(), nfa.add_state()};
    nfa.edges[f.start].emplace_back(c, f.accept);
    return f;
}

Frag cat(Nfa& nfa, Frag a, Frag b) {
    nfa.eps[a.accept].push_back(b.start);
    return {a.start, b.accept};
}

Frag alt(Nfa& nfa, const std::vector<Frag>& options) {
    Frag f{nfa.add_state(), nfa.add_state()};
    for (const Frag& o : options) {
        nfa.eps[f.start].push_back(o.start);
        nfa.eps[o.accept].push_back(f.accept);
    }
    return f;
}

Frag seq(Nfa& nfa, const std::vector<Frag>& parts) {
    Frag f = parts.front();
    for (size_t i = 1; i < parts.size(); ++i) f = cat(nfa, f, parts[i]);
    return f;
}

Frag word(Nfa& nfa, const std::string& w) {
    std::vector<Frag> parts;
    for (char c : w) parts.push_back(lit(nfa, cls(std::string(1, c))));
    return seq(nfa, parts);
}

void eps_close(const Nfa& nfa, std::set<int>& states) {
    std::deque<int> queue(states.begin(), states.end());
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int r : nfa.eps[q]) {
            if (states.insert(r).second) queue.push_back(r);
        }
    }
}

Dfa determinize(const Nfa& nfa, int nfa_start, int nfa_accept, const Alphabet& alphabet) {
    DfaBuilder b(alphabet);
    std::map<std::set<int>, int> ids;
    std::deque<std::set<int>> queue;
    auto state_of = [&](std::set<int> states) {
        eps_close(nfa, states);
        auto it = ids.find(states);
        if (it != ids.end()) return it->second;
        int id = b.add_state(states.count(nfa_accept) > 0);
        ids.emplace(states, id);
        queue.push_back(std::move(states));
        return id;
    };
    b.dfa.start = state_of({nfa_start});
    while (!queue.empty()) {
        std::set<int> states = queue.front();
        queue.pop_front();
        int q = ids[states];
        for (int a = 0; a < alphabet.size(); ++a) {
            unsigned char c = static_cast<unsigned char>(alphabet.at(a));
            std::set<int> next;
            for (int s : states) {
                for (const auto& [charclass, dest] : nfa.edges[s]) {
                    if (charclass.test(c)) next.insert(dest);
                }
            }
            if (!next.empty()) b.edge(q, alphabet.at(a), state_of(std::move(next)));
        }
    }
    return b.dfa;
}

Dfa build_date(const Alphabet& alphabet) {
    static const std::string digits = "0123456789";
    require_terminals(alphabet, digits + "/,");
    Nfa nfa;
    Frag slash = lit(nfa, cls("/"));
    auto yy = [&] { return seq(nfa, {lit(nfa, cls(digits)), lit(nfa, cls(digits))}); };
    // (0[1-9]|[1,2][0-9]|3[0,1]) / (01|03|05|07|08|10|12) / [0-9][0-9]
    Frag day31 = alt(nfa, {cat(nfa, lit(nfa, cls("0")), lit(nfa, cls("123456789"))),
                           cat(nfa, lit(nfa, cls("1,2")), lit(nfa, cls(digits))),
                           cat(nfa, lit(nfa, cls("3")), lit(nfa, cls("0,1")))});
    Frag month31 = alt(nfa, {word(nfa, "01"), word(nfa, "03"), word(nfa, "05"), word(nfa, "07"),
                             word(nfa, "08"), word(nfa, "10"), word(nfa, "12")});
    Frag alt1 = seq(nfa, {day31, slash, month31, lit(nfa, cls("/")), yy()});
    // (0[1-9]|[1,2][0-9]|30) / (04|06|09|11) / [0-9][0-9]
    Frag day30 = alt(nfa, {cat(nfa, lit(nfa, cls("0")), lit(nfa, cls("123456789"))),
                           cat(nfa, lit(nfa, cls("1,2")), lit(nfa, cls(digits))),
                           word(nfa, "30")});
    Frag month30 = alt(nfa, {word(nfa, "04"), word(nfa, "06"), word(nfa, "09"), word(nfa, "11")});
    Frag alt2 = seq(nfa, {day30, lit(nfa, cls("/")), month30, lit(nfa, cls("/")), yy()});
    // (0[1-9]|[1,2][0-9]) / 02 / [0-9][0-9]
    Frag day29 = alt(nfa, {cat(nfa, lit(nfa, cls("0")), lit(nfa, cls("123456789"))),
                           cat(nfa, lit(nfa, cls("1,2")), lit(nfa, cls(digits)))});
    Frag alt3 = seq(nfa, {day29, lit(nfa, cls("/")), word(nfa, "02"), lit(nfa, cls("/")), yy()});
    Frag whole = alt(nfa, {alt1, alt2, alt3});
    return determinize(nfa, whole.start, whole.accept, alphabet);
}

Dfa build_even_length(const Alphabet& alphabet) {
    DfaBuilder b(alphabet);
    int even = b.add_state(true);
    int odd = b.add_state(false);
    for (int a = 0; a < alphabet.size(); ++a) {
        b.edge(even, alphabet.at(a), odd);
        b.edge(odd, alphabet.at(a), even);
    }
    b.dfa.start = even;
    // Drop the builder's unused dead sink by minimizing like the others.
    return b.dfa;
}

}  // namespace

Dfa build(const TargetSpec& spec) {
    if (requires_depth(spec.name)) {
        if (!spec.depth || *spec.depth < 1) {
            throw std::invalid_argument("target requires a positive nesting depth");
        }
    } else if (spec.depth) {
        throw std::invalid_argument("target does not take a depth");
    }
    Dfa dfa;
    switch (spec.name) {
        case TargetName::Arith: dfa = build_arith(spec.alphabet, *spec.depth); break;
        case TargetName::Json: dfa = build_json(spec.alphabet, *spec.depth); break;
        case TargetName::Dyck: dfa = build_dyck(spec.alphabet, *spec.depth); break;
        case TargetName::Date: dfa = build_date(spec.alphabet); break;
        case TargetName::EvenLength: dfa = build_even_length(spec.alphabet); break;
    }
    return minimize(dfa);
}

Alphabet default_alphabet() {
    std::string symbols(256, '\0');
    for (int i = 0; i < 256; ++i) symbols[i] = static_cast<char>(i);
    return Alphabet(symbols);
}

Alphabet tiny_alphabet(TargetName name) {
    switch (name) {
        case TargetName::Arith: return Alphabet("0123456789+-*/()!?");
        case TargetName::Json: return Alphabet("{},:\"0123456789!?");
        case TargetName::Dyck: return Alphabet("()[]!?");
        case TargetName::Date: return Alphabet("0123456789/,!?");
        case TargetName::EvenLength: return Alphabet("ab");
    }
    throw std::invalid_argument("unknown target");
}

}  // namespace pql::targets
