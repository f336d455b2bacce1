#pragma once

// GASA: one classification-value gene per unknown word.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gasa/corpus.hpp"
#include "gasa/errors.hpp"
#include "gasa/evaluator.hpp"
#include "gasa/ga_engine.hpp"
#include "gasa/lexicon.hpp"
#include "gasa/rng.hpp"

namespace gasa {

struct GasaChromosome {
    std::vector<ClassificationValuePair> genes;

    std::size_t size() const noexcept { return genes.size(); }
    friend bool operator==(const GasaChromosome&, const GasaChromosome&) = default;
};

/// Kind first (fair coin), then one of that kind's three values.
inline ClassificationValuePair random_gene(Rng& rng) {
    const bool is_sentiment = rng.index(2) == 0;
    const std::size_t v = rng.index(3);
    return is_sentiment ? sentiment(kSentimentValues[v]) : amplifier(kAmplifierValues[v]);
}

/// Uniform over the five evolvable pairs other than `current`. A
/// non-evolvable `current` (a dictionary seed value) draws from all six.
inline ClassificationValuePair different_pair(const ClassificationValuePair& current, Rng& rng) {
    const auto at = evolvable_index(current);
    if (!at) return kEvolvablePairs[rng.index(kEvolvablePairs.size())];
    std::size_t r = rng.index(kEvolvablePairs.size() - 1);
    if (r >= *at) ++r;
    return kEvolvablePairs[r];
}

inline GasaChromosome random_chromosome(std::size_t n, Rng& rng) {
    GasaChromosome c;
    c.genes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.genes.push_back(random_gene(rng));
    return c;
}

/// Copy of `parent` with gene `position` set to `replacement`.
inline GasaChromosome mutate_at(const GasaChromosome& parent, std::size_t position,
                                const ClassificationValuePair& replacement) {
    if (position >= parent.size()) throw ContractError("mutate: position out of range");
    GasaChromosome child = parent;
    child.genes[position] = replacement;
    return child;
}

/// One uniformly chosen gene is replaced by a different evolvable pair.
inline GasaChromosome mutate(const GasaChromosome& parent, Rng& rng) {
    if (parent.genes.empty()) throw ContractError("mutate: empty chromosome");
    const std::size_t pos = rng.index(parent.size());
    return mutate_at(parent, pos, different_pair(parent.genes[pos], rng));
}

template <class Chromosome>
std::pair<Chromosome, Chromosome> swap_gene_at(const Chromosome& p1, const Chromosome& p2, std::size_t position) {
    if (p1.genes.size() != p2.genes.size()) throw ContractError("crossover: parent lengths differ");
    if (position >= p1.genes.size()) throw ContractError("crossover: position out of range");
    std::pair<Chromosome, Chromosome> children{p1, p2};
    children.first.genes[position] = p2.genes[position];
    children.second.genes[position] = p1.genes[position];
    return children;
}

inline std::pair<GasaChromosome, GasaChromosome> crossover_at(const GasaChromosome& p1, const GasaChromosome& p2,
                                                              std::size_t position) {
    return swap_gene_at(p1, p2, position);
}

/// Single-position exchange: the gene at a uniform position is swapped.
inline std::pair<GasaChromosome, GasaChromosome> crossover(const GasaChromosome& p1, const GasaChromosome& p2,
                                                           Rng& rng) {
    if (p1.size() != p2.size()) throw ContractError("crossover: parent lengths differ");
    if (p1.genes.empty()) throw ContractError("crossover: empty parents");
    return crossover_at(p1, p2, rng.index(p1.size()));
}

/// Pair used for a word missing from the dictionaries and the gene index.
inline constexpr ClassificationValuePair kOutOfVocabulary = sentiment(0.0);

/// Dictionary first, then the chromosome, else neutral.
inline ClassificationValuePair resolve_gasa(std::string_view word, const GasaChromosome& chromosome,
                                            const UnknownWordIndex& index, const Dictionaries& dicts) {
    if (auto known = lookup(word, dicts)) return *known;
    if (auto pos = index.position_of(word)) return chromosome.genes.at(*pos);
    return kOutOfVocabulary;
}

inline Verdict predict(const GasaChromosome& chromosome, std::span<const std::string> tokens,
                       const UnknownWordIndex& index, const Dictionaries& dicts, Semantics semantics) {
    return classify_score(evaluate_sentence(
        tokens, [&](const std::string& w) { return resolve_gasa(w, chromosome, index, dicts); }, semantics));
}

inline Verdict predict(const GasaChromosome& chromosome, const Instance& instance, const UnknownWordIndex& index,
                       const Dictionaries& dicts, Semantics semantics) {
    return predict(chromosome, std::span<const std::string>(instance.tokens), index, dicts, semantics);
}

inline bool matches(Verdict v, Label label) {
    return (v == Verdict::Positive && label == Label::Positive) || (v == Verdict::Negative && label == Label::Negative);
}

/// Instances whose verdict equals their label. Ties never count.
inline std::size_t fitness(const GasaChromosome& chromosome, const Corpus& corpus, const UnknownWordIndex& index,
                           const Dictionaries& dicts, Semantics semantics) {
    if (chromosome.size() != index.size())
        throw ContractError("fitness: chromosome has " + std::to_string(chromosome.size()) + " genes for " +
                            std::to_string(index.size()) + " unknown words");
    std::size_t correct = 0;
    for (const auto& inst : corpus.instances) correct += matches(predict(chromosome, inst, index, dicts, semantics), inst.label);
    return correct;
}

/// Genes for `query_words`, in query order.
inline std::vector<ClassificationValuePair> extract_classifications(const GasaChromosome& chromosome,
                                                                    std::span<const std::string> query_words,
                                                                    const UnknownWordIndex& index) {
    std::vector<ClassificationValuePair> out;
    out.reserve(query_words.size());
    for (const auto& w : query_words) {
        auto pos = index.position_of(w);
        if (!pos) throw ContractError("extract_classifications: '" + w + "' is not an unknown word");
        out.push_back(chromosome.genes.at(*pos));
    }
    return out;
}

/// A corpus with every token pre-resolved to either a fixed dictionary pair or
/// a gene position.
class CompiledCorpus {
public:
    struct Slot {
        std::int32_t gene = -1;  ///< -1: use `fixed`
        ClassificationValuePair fixed;
    };

    CompiledCorpus(const Corpus& corpus, const UnknownWordIndex& index, const Dictionaries& dicts) {
        offsets_.reserve(corpus.size() + 1);
        offsets_.push_back(0);
        for (const auto& inst : corpus.instances) {
            for (const auto& tok : inst.tokens) {
                Slot s;
                if (auto known = lookup(tok, dicts))
                    s.fixed = *known;
                else if (auto pos = index.position_of(tok))
                    s.gene = static_cast<std::int32_t>(*pos);
                else
                    s.fixed = kOutOfVocabulary;
                slots_.push_back(s);
            }
            offsets_.push_back(slots_.size());
            labels_.push_back(inst.label);
        }
    }

    std::size_t size() const noexcept { return labels_.size(); }
    Label label(std::size_t i) const { return labels_[i]; }
    std::span<const Slot> tokens(std::size_t i) const {
        return std::span<const Slot>(slots_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }

private:
    std::vector<Slot> slots_;
    std::vector<std::size_t> offsets_;
    std::vector<Label> labels_;
};

/// GASA as a GeneticProblem over a fixed training corpus.
class GasaProblem {
public:
    using Genome = GasaChromosome;

    GasaProblem(const Corpus& train, Dictionaries dicts, Semantics semantics)
        : dicts_(std::move(dicts)),
          index_(build_unknown_index(train, dicts_)),
          compiled_(train, index_, dicts_),
          semantics_(semantics) {}

    const UnknownWordIndex& index() const noexcept { return index_; }
    const Dictionaries& dictionaries() const noexcept { return dicts_; }
    Semantics semantics() const noexcept { return semantics_; }
    std::size_t instance_count() const noexcept { return compiled_.size(); }

    Genome random_genome(Rng& rng) const { return random_chromosome(index_.size(), rng); }

    std::size_t fitness(const Genome& g) const {
        if (g.size() != index_.size()) throw ContractError("fitness: chromosome length mismatch");
        std::size_t correct = 0;
        for (std::size_t i = 0; i < compiled_.size(); ++i) {
            const auto slots = compiled_.tokens(i);
            const double score = score_sentence(
                slots.size(),
                [&](std::size_t j) -> const ClassificationValuePair& {
                    const auto& s = slots[j];
                    return s.gene < 0 ? s.fixed : g.genes[static_cast<std::size_t>(s.gene)];
                },
                semantics_);
            correct += matches(classify_score(score), compiled_.label(i));
        }
        return correct;
    }

    // With no unknown words there is nothing to vary; offspring are copies.
    Genome mutate(const Genome& g, Rng& rng) const { return g.genes.empty() ? g : gasa::mutate(g, rng); }
    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) const {
        if (a.genes.empty()) return {a, b};
        return gasa::crossover(a, b, rng);
    }
    std::optional<std::size_t> max_fitness() const { return compiled_.size(); }

private:
    Dictionaries dicts_;
    UnknownWordIndex index_;
    CompiledCorpus compiled_;
    Semantics semantics_;
};

static_assert(GeneticProblem<GasaProblem>);

}  // namespace gasa
