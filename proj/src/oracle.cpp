#include "pql/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pql {

Teacher::Teacher(Dfa target) : target_(std::move(target)), liveness_(coaccessible(target_)) {}

PrefixResponse Teacher::prefix_query(const Word& w) {
    prefix_queries_ += 1;
    return classify(target_, liveness_, w);
}

bool Teacher::membership_query(const Word& w) {
    membership_queries_ += 1;
    return run(target_, w);
}

std::optional<Word> Teacher::equivalence_exact(const Dfa& h) {
    equivalence_queries_ += 1;
    return shortest_counterexample(target_, h);
}

long long pac_calls(const PacParams& params) {
    if (!(params.epsilon > 0.0 && params.epsilon <= 1.0) ||
        !(params.delta > 0.0 && params.delta <= 1.0) || params.eq_index < 1) {
        throw std::invalid_argument("invalid PAC parameters");
    }
    long double value = (std::log(1.0L / static_cast<long double>(params.delta)) +
                         static_cast<long double>(params.eq_index) * std::log(2.0L)) /
                        static_cast<long double>(params.epsilon);
    return static_cast<long long>(std::ceil(value));
}

std::optional<Word> equivalence_pac(Teacher& t, const Dfa& h, PacParams& params,
                                    const Sampler& sampler, std::mt19937_64& rng) {
    long long draws = pac_calls(params);
    t.tally_equivalence_query();
    params.eq_index += 1;
    for (long long i = 0; i < draws; ++i) {
        std::optional<Word> x = sampler(rng);
        if (!x) continue;  // failed draw: vacuously correct
        if (run(h, *x) != run(t.target(), *x)) return x;
    }
    return std::nullopt;
}

Word sample_pseudo_uniform(int l_min, int l_max, const Alphabet& alphabet, std::mt19937_64& rng) {
    if (l_min < 0 || l_min > l_max) {
        throw std::invalid_argument("invalid length range");
    }
    std::uniform_int_distribution<int> length_dist(l_min, l_max);
    std::uniform_int_distribution<int> symbol_dist(0, alphabet.size() - 1);
    int length = length_dist(rng);
    Word w;
    w.reserve(static_cast<size_t>(length));
    for (int i = 0; i < length; ++i) w.push_back(alphabet.at(symbol_dist(rng)));
    return w;
}

std::optional<Word> sample_prefix_based(const SamplerConfig& cfg, Teacher& t, std::mt19937_64& rng) {
    if (cfg.p < 0.0 || cfg.p > 1.0 || cfg.m < 1 || cfg.l_min < 0 || cfg.l_min > cfg.l_max) {
        throw std::invalid_argument("invalid sampler config");
    }
    const Alphabet& alphabet = t.target().alphabet;
    const bool positive = std::bernoulli_distribution(cfg.p)(rng);

    Word prefix;                 // current prefix (r in the sampler's state machine)
    std::vector<bool> seen(alphabet.size(), false);  // symbols seen at this prefix (S)
    int seen_count = 0;
    int attempts = 0;

    auto reset = [&] {
        prefix.clear();
        std::fill(seen.begin(), seen.end(), false);
        seen_count = 0;
    };

    while (attempts < cfg.m) {
        // Choice set C = A \ S; an empty choice set ends the attempt.
        int choices = alphabet.size() - seen_count;
        if (choices == 0) {
            attempts += 1;
            reset();
            continue;
        }
        int pick = std::uniform_int_distribution<int>(0, choices - 1)(rng);
        int sym_index = 0;
        for (int a = 0; a < alphabet.size(); ++a) {
            if (seen[a]) continue;
            if (pick == 0) {
                sym_index = a;
                break;
            }
            pick -= 1;
        }
        Word candidate = prefix + alphabet.at(sym_index);
        PrefixResponse response = t.prefix_query(candidate);

        switch (response) {
            case PrefixResponse::Member:
                if (positive && static_cast<int>(candidate.size()) >= cfg.l_min) {
                    return candidate;
                }
                if (std::bernoulli_distribution(0.5)(rng)) {  // extend
                    prefix = candidate;
                    std::fill(seen.begin(), seen.end(), false);
                    seen_count = 0;
                } else {  // restart from the same prefix, symbol now seen
                    seen[sym_index] = true;
                    seen_count += 1;
                }
                break;
            case PrefixResponse::LivePrefix:
                if (positive) {
                    prefix = candidate;
                    std::fill(seen.begin(), seen.end(), false);
                    seen_count = 0;
                } else {
                    return candidate;
                }
                break;
            case PrefixResponse::DeadPrefix:
                if (positive) {
                    seen[sym_index] = true;
                    seen_count += 1;
                } else {
                    return candidate;
                }
                break;
        }

        if (static_cast<int>(candidate.size()) > cfg.l_max) {
            // Overlong walk: consume an attempt and start over.
            attempts += 1;
            reset();
        }
    }
    return std::nullopt;
}

Sampler make_pseudo_uniform_sampler(int l_min, int l_max, Alphabet alphabet) {
    return [l_min, l_max, alphabet = std::move(alphabet)](std::mt19937_64& rng) -> std::optional<Word> {
        return sample_pseudo_uniform(l_min, l_max, alphabet, rng);
    };
}

Sampler make_prefix_sampler(const SamplerConfig& cfg, Teacher& t) {
    return [cfg, &t](std::mt19937_64& rng) { return sample_prefix_based(cfg, t, rng); };
}

EqOracle make_exact_oracle(Teacher& t) {
    return [&t](const Dfa& h) { return t.equivalence_exact(h); };
}

EqOracle make_pac_oracle(Teacher& t, PacParams& params, Sampler sampler, std::mt19937_64& rng) {
    return [&t, &params, sampler = std::move(sampler), &rng](const Dfa& h) {
        return equivalence_pac(t, h, params, sampler, rng);
    };
}

}  // namespace pql
