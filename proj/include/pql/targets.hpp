// Benchmark target languages: depth-restricted arith/json/dyck, the
// DD/MM/YY date language, and the dense even-length control.
#pragma once

#include <optional>
#include <string>

#include "pql/automata.hpp"

namespace pql::targets {

enum class TargetName { Arith, Json, Dyck, Date, EvenLength };

struct TargetSpec {
    TargetName name;
    // Required for arith/json/dyck, disallowed otherwise. The outermost
    // nesting pair counts as depth 1.
    std::optional<int> depth;
    Alphabet alphabet;
};

const char* to_string(TargetName name);
std::optional<TargetName> parse_target_name(const std::string& s);
bool requires_depth(TargetName name);

// Label used in metrics/report output, e.g. "dyck-d2" or "date".
std::string target_label(const TargetSpec& spec);

// Minimized DFA for the named language embedded in spec.alphabet:
// symbols the grammar does not use transition to a dead sink. Throws
// std::invalid_argument on invalid specs (missing/extra depth, alphabet
// lacking a terminal).
Dfa build(const TargetSpec& spec);

// Code points 0..255 in ascending order.
Alphabet default_alphabet();

// The grammar's terminals plus two junk symbols, for desk-scale runs.
Alphabet tiny_alphabet(TargetName name);

}  // namespace pql::targets
