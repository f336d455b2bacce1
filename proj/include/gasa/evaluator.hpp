#pragma once

// Left-to-right arithmetic scoring of a sentence from per-word
// classification-value pairs.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gasa/lexicon.hpp"

namespace gasa {

/// Literal follows the published pseudocode: the amplifier accumulator is
/// never reset and, when nonzero after the last word, is added to the score.
/// Prose resets the accumulator once it has scaled a sentiment word and adds
/// it at the end only if the final word is an amplifier.
enum class Semantics : unsigned char { Literal, Prose };

inline std::string_view semantics_name(Semantics s) { return s == Semantics::Literal ? "literal" : "prose"; }

inline std::optional<Semantics> parse_semantics(std::string_view text) {
    if (text == "literal") return Semantics::Literal;
    if (text == "prose") return Semantics::Prose;
    return std::nullopt;
}

enum class Verdict : unsigned char { Positive, Negative, Tie };

inline std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Positive: return "positive";
        case Verdict::Negative: return "negative";
        case Verdict::Tie: break;
    }
    return "tie";
}

/// Scores a sentence of `length` words where `pair_at(i)` yields the pair of
/// word i. The hot path of every fitness evaluation.
template <class PairAt>
double score_sentence(std::size_t length, PairAt&& pair_at, Semantics semantics) {
    double score = 0.0;
    double amp = 0.0;
    bool last_was_amplifier = false;
    for (std::size_t i = 0; i < length; ++i) {
        const ClassificationValuePair& p = pair_at(i);
        if (p.kind == Kind::Amplifier) {
            amp += p.value;
            last_was_amplifier = true;
            continue;
        }
        last_was_amplifier = false;
        if (amp != 0.0) {
            score += amp * p.value;
            if (semantics == Semantics::Prose) amp = 0.0;
        } else {
            score += p.value;
        }
    }
    if (amp != 0.0 && (semantics == Semantics::Literal || last_was_amplifier)) score += amp;
    return score;
}

inline double score_pairs(std::span<const ClassificationValuePair> pairs, Semantics semantics) {
    return score_sentence(
        pairs.size(), [&](std::size_t i) -> const ClassificationValuePair& { return pairs[i]; }, semantics);
}

/// `resolve` maps a word to its pair and must be total over `tokens`.
template <class Resolver>
double evaluate_sentence(std::span<const std::string> tokens, Resolver&& resolve, Semantics semantics) {
    ClassificationValuePair current;
    return score_sentence(
        tokens.size(),
        [&](std::size_t i) -> const ClassificationValuePair& {
            current = resolve(tokens[i]);
            return current;
        },
        semantics);
}

inline Verdict classify_score(double score) {
    if (score > 0.0) return Verdict::Positive;
    if (score < 0.0) return Verdict::Negative;
    return Verdict::Tie;
}

}  // namespace gasa
