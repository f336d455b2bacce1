#pragma once

// CA-GASA: genes carrying a context rule that can override the word's
// context-free pair when its neighbourhood matches.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gasa/corpus.hpp"
#include "gasa/errors.hpp"
#include "gasa/evaluator.hpp"
#include "gasa/ga_engine.hpp"
#include "gasa/gasa.hpp"
#include "gasa/lexicon.hpp"
#include "gasa/rng.hpp"

namespace gasa {

/// Upper bound on list capacities and look distances.
inline constexpr std::size_t kContextCap = 3;

struct ContextRule {
    std::size_t next_size = 0;      ///< capacity of list_next
    std::size_t previous_size = 0;  ///< capacity of list_previous
    std::vector<std::string> list_next;      ///< sorted, distinct
    std::vector<std::string> list_previous;  ///< sorted, distinct
    std::size_t number_ahead = 0;
    std::size_t number_behind = 0;
    ClassificationValuePair context_pair;

    friend bool operator==(const ContextRule&, const ContextRule&) = default;
};

struct CagasaGene {
    std::string word;
    ContextRule rule;
    ClassificationValuePair context_free_pair;

    friend bool operator==(const CagasaGene&, const CagasaGene&) = default;
};

struct CagasaChromosome {
    std::vector<CagasaGene> genes;

    std::size_t size() const noexcept { return genes.size(); }
    friend bool operator==(const CagasaChromosome&, const CagasaChromosome&) = default;
};

/// Sorts and de-duplicates in place.
template <class T>
void make_set(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// Throws ContractError unless the rule's lists are sets within capacity and
/// all sizes respect kContextCap.
inline void validate(const ContextRule& rule) {
    auto is_set = [](const std::vector<std::string>& v) {
        return std::adjacent_find(v.begin(), v.end(), [](auto& a, auto& b) { return !(a < b); }) == v.end();
    };
    if (rule.next_size > kContextCap || rule.previous_size > kContextCap || rule.number_ahead > kContextCap ||
        rule.number_behind > kContextCap)
        throw ContractError("ContextRule: size above cap");
    if (rule.list_next.size() > rule.next_size || rule.list_previous.size() > rule.previous_size)
        throw ContractError("ContextRule: list exceeds its capacity");
    if (!is_set(rule.list_next) || !is_set(rule.list_previous))
        throw ContractError("ContextRule: lists must be sorted and distinct");
}

template <class T>
struct Neighbourhood {
    std::vector<T> following;  ///< list_x: up to number_ahead words after the position
    std::vector<T> preceding;  ///< list_y: up to number_behind words before it
};

/// Words within the look distances of `position`, truncated at the sentence
/// boundaries and reduced to sets.
template <class T>
Neighbourhood<T> gather_context(std::span<const T> tokens, std::size_t position, std::size_t number_ahead,
                                std::size_t number_behind) {
    if (position >= tokens.size()) throw ContractError("gather_context: position out of range");
    Neighbourhood<T> n;
    const std::size_t end = std::min(tokens.size(), position + 1 + number_ahead);
    n.following.assign(tokens.begin() + static_cast<std::ptrdiff_t>(position + 1),
                       tokens.begin() + static_cast<std::ptrdiff_t>(end));
    const std::size_t begin = position > number_behind ? position - number_behind : 0;
    n.preceding.assign(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                       tokens.begin() + static_cast<std::ptrdiff_t>(position));
    make_set(n.following);
    make_set(n.preceding);
    return n;
}

template <class T>
std::size_t sorted_intersection_size(std::span<const T> a, std::span<const T> b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++n, ++i, ++j;
        }
    }
    return n;
}

/// (a + b) / (size_x + size_y) >= 0.5 with a = |following ∩ list_next| and
/// b = |preceding ∩ list_previous|. An empty neighbourhood never matches.
/// All inputs are sorted sets.
template <class T>
bool context_matches(std::span<const T> list_next, std::span<const T> list_previous, std::span<const T> following,
                     std::span<const T> preceding) {
    const std::size_t denom = following.size() + preceding.size();
    if (denom == 0) return false;
    const std::size_t hits =
        sorted_intersection_size(following, list_next) + sorted_intersection_size(preceding, list_previous);
    return 2 * hits >= denom;
}

inline bool context_applies(const ContextRule& rule, std::span<const std::string> list_x,
                            std::span<const std::string> list_y) {
    return context_matches<std::string>(rule.list_next, rule.list_previous, list_x, list_y);
}

/// The pair gene.word takes at `position` in `tokens`.
inline ClassificationValuePair resolve_word(const CagasaGene& gene, std::span<const std::string> tokens,
                                            std::size_t position) {
    if (position >= tokens.size() || tokens[position] != gene.word)
        throw ContractError("resolve_word: token at position is not the gene's word");
    const auto ctx = gather_context(tokens, position, gene.rule.number_ahead, gene.rule.number_behind);
    return context_applies(gene.rule, ctx.following, ctx.preceding) ? gene.rule.context_pair
                                                                    : gene.context_free_pair;
}

/// Distinct words seen within kContextCap positions of a word in training data.
struct CorpusNeighbours {
    std::vector<std::string> preceding;  ///< sorted
    std::vector<std::string> following;  ///< sorted
};

/// Neighbour sets for every word of `index`, aligned with its positions.
inline std::vector<CorpusNeighbours> collect_neighbours(const Corpus& corpus, const UnknownWordIndex& index) {
    std::vector<CorpusNeighbours> table(index.size());
    for (const auto& inst : corpus.instances) {
        const std::span<const std::string> toks(inst.tokens);
        for (std::size_t i = 0; i < toks.size(); ++i) {
            auto pos = index.position_of(toks[i]);
            if (!pos) continue;
            auto ctx = gather_context(toks, i, kContextCap, kContextCap);
            auto& entry = table[*pos];
            entry.following.insert(entry.following.end(), ctx.following.begin(), ctx.following.end());
            entry.preceding.insert(entry.preceding.end(), ctx.preceding.begin(), ctx.preceding.end());
        }
    }
    for (auto& entry : table) {
        make_set(entry.following);
        make_set(entry.preceding);
    }
    return table;
}

namespace detail {

inline std::vector<std::string> sample_without_replacement(const std::vector<std::string>& pool, std::size_t k,
                                                           Rng& rng) {
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    k = std::min(k, pool.size());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);
        out.push_back(pool[idx[i]]);
    }
    make_set(out);
    return out;
}

}  // namespace detail

/// Draw order: next_size, previous_size, list_next, list_previous,
/// number_ahead, number_behind, context pair, context-free pair.
inline CagasaGene random_cagasa_gene(std::string word, const CorpusNeighbours& neighbours, Rng& rng) {
    CagasaGene g;
    g.word = std::move(word);
    auto& r = g.rule;
    r.next_size = static_cast<std::size_t>(rng.between(1, kContextCap));
    r.previous_size = static_cast<std::size_t>(rng.between(1, kContextCap));
    r.list_next = detail::sample_without_replacement(neighbours.following, r.next_size, rng);
    r.list_previous = detail::sample_without_replacement(neighbours.preceding, r.previous_size, rng);
    r.number_ahead = static_cast<std::size_t>(rng.between(1, kContextCap));
    r.number_behind = static_cast<std::size_t>(rng.between(1, kContextCap));
    r.context_pair = random_gene(rng);
    g.context_free_pair = random_gene(rng);
    return g;
}

enum class CagasaEdit : unsigned char { ContextFreePair, ContextPair, ContextWord };

namespace detail {

/// Replaces a random member of `list` with a random fresh neighbour, or adds
/// one when the list is empty and has spare capacity. False if neither is
/// possible.
inline bool swap_in_neighbour(std::vector<std::string>& list, std::size_t capacity,
                              const std::vector<std::string>& pool, Rng& rng) {
    std::vector<std::string> fresh;
    std::set_difference(pool.begin(), pool.end(), list.begin(), list.end(), std::back_inserter(fresh));
    if (fresh.empty() || (list.empty() && capacity == 0)) return false;
    const std::string& incoming = fresh[rng.index(fresh.size())];
    if (list.empty())
        list.push_back(incoming);
    else
        list[rng.index(list.size())] = incoming;
    make_set(list);
    return true;
}

}  // namespace detail

/// Applies `edit` to gene `position`. A context-word edit picks a side at
/// random, tries the other side when that one has no fresh neighbour, and
/// falls back to a context-free pair edit when neither side can change.
inline CagasaChromosome mutate_cagasa_at(const CagasaChromosome& parent, std::size_t position, CagasaEdit edit,
                                         std::span<const CorpusNeighbours> neighbours, Rng& rng) {
    if (position >= parent.size()) throw ContractError("mutate_cagasa: position out of range");
    CagasaChromosome child = parent;
    auto& gene = child.genes[position];
    if (edit == CagasaEdit::ContextWord) {
        if (position >= neighbours.size()) throw ContractError("mutate_cagasa: neighbour table too short");
        const auto& pool = neighbours[position];
        const bool next_first = rng.index(2) == 0;
        auto try_side = [&](bool next) {
            return next ? detail::swap_in_neighbour(gene.rule.list_next, gene.rule.next_size, pool.following, rng)
                        : detail::swap_in_neighbour(gene.rule.list_previous, gene.rule.previous_size, pool.preceding,
                                                    rng);
        };
        if (try_side(next_first) || try_side(!next_first)) return child;
        edit = CagasaEdit::ContextFreePair;
    }
    if (edit == CagasaEdit::ContextFreePair)
        gene.context_free_pair = different_pair(gene.context_free_pair, rng);
    else
        gene.rule.context_pair = different_pair(gene.rule.context_pair, rng);
    return child;
}

/// Uniform position, then uniformly one of the three edits.
inline CagasaChromosome mutate_cagasa(const CagasaChromosome& parent, std::span<const CorpusNeighbours> neighbours,
                                      Rng& rng) {
    if (parent.genes.empty()) throw ContractError("mutate_cagasa: empty chromosome");
    const std::size_t pos = rng.index(parent.size());
    const auto edit = static_cast<CagasaEdit>(rng.index(3));
    return mutate_cagasa_at(parent, pos, edit, neighbours, rng);
}

/// Whole genes are exchanged at one uniform position.
inline std::pair<CagasaChromosome, CagasaChromosome> crossover_cagasa(const CagasaChromosome& p1,
                                                                      const CagasaChromosome& p2, Rng& rng) {
    if (p1.size() != p2.size()) throw ContractError("crossover_cagasa: parent lengths differ");
    if (p1.genes.empty()) throw ContractError("crossover_cagasa: empty parents");
    return swap_gene_at(p1, p2, rng.index(p1.size()));
}

/// Dictionary first, then the word's gene (context dispatch), else neutral.
inline ClassificationValuePair resolve_cagasa(std::span<const std::string> tokens, std::size_t position,
                                              const CagasaChromosome& chromosome, const UnknownWordIndex& index,
                                              const Dictionaries& dicts) {
    const auto& word = tokens[position];
    if (auto known = lookup(word, dicts)) return *known;
    if (auto pos = index.position_of(word)) return resolve_word(chromosome.genes.at(*pos), tokens, position);
    return kOutOfVocabulary;
}

inline Verdict predict_cagasa(const CagasaChromosome& chromosome, std::span<const std::string> tokens,
                              const UnknownWordIndex& index, const Dictionaries& dicts, Semantics semantics) {
    return classify_score(score_sentence(
        tokens.size(), [&](std::size_t i) { return resolve_cagasa(tokens, i, chromosome, index, dicts); },
        semantics));
}

inline std::size_t fitness_cagasa(const CagasaChromosome& chromosome, const Corpus& corpus,
                                  const UnknownWordIndex& index, const Dictionaries& dicts, Semantics semantics) {
    if (chromosome.size() != index.size()) throw ContractError("fitness_cagasa: chromosome length mismatch");
    std::size_t correct = 0;
    for (const auto& inst : corpus.instances)
        correct += matches(predict_cagasa(chromosome, inst.tokens, index, dicts, semantics), inst.label);
    return correct;
}

/// CA-GASA as a GeneticProblem. Fitness runs on integer word ids; rule
/// words absent from the training vocabulary cannot match and are dropped.
class CagasaProblem {
public:
    using Genome = CagasaChromosome;

    CagasaProblem(const Corpus& train, Dictionaries dicts, Semantics semantics)
        : dicts_(std::move(dicts)), index_(build_unknown_index(train, dicts_)), semantics_(semantics) {
        neighbours_ = collect_neighbours(train, index_);
        offsets_.push_back(0);
        for (const auto& inst : train.instances) {
            for (const auto& tok : inst.tokens) {
                auto [it, inserted] = vocab_.try_emplace(tok, static_cast<std::uint32_t>(vocab_.size()));
                Slot s;
                s.word = it->second;
                if (auto known = lookup(tok, dicts_))
                    s.fixed = *known;
                else
                    s.gene = static_cast<std::int32_t>(*index_.position_of(tok));
                slots_.push_back(s);
            }
            offsets_.push_back(slots_.size());
            labels_.push_back(inst.label);
        }
    }

    const UnknownWordIndex& index() const noexcept { return index_; }
    const Dictionaries& dictionaries() const noexcept { return dicts_; }
    Semantics semantics() const noexcept { return semantics_; }
    const std::vector<CorpusNeighbours>& neighbours() const noexcept { return neighbours_; }
    std::size_t instance_count() const noexcept { return labels_.size(); }

    Genome random_genome(Rng& rng) const {
        Genome g;
        g.genes.reserve(index_.size());
        for (std::size_t i = 0; i < index_.size(); ++i)
            g.genes.push_back(random_cagasa_gene(index_.word(i), neighbours_[i], rng));
        return g;
    }

    std::size_t fitness(const Genome& g) const {
        if (g.size() != index_.size()) throw ContractError("fitness: chromosome length mismatch");
        std::vector<IdRule> rules;
        rules.reserve(g.size());
        for (const auto& gene : g.genes) rules.push_back(to_ids(gene));

        std::vector<std::uint32_t> words;
        std::size_t correct = 0;
        for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
            const std::span<const Slot> slots(slots_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]);
            words.clear();
            for (const auto& s : slots) words.push_back(s.word);
            const double score = score_sentence(
                slots.size(),
                [&](std::size_t j) -> const ClassificationValuePair& {
                    const auto& s = slots[j];
                    if (s.gene < 0) return s.fixed;
                    const auto& r = rules[static_cast<std::size_t>(s.gene)];
                    const auto ctx =
                        gather_context(std::span<const std::uint32_t>(words), j, r.number_ahead, r.number_behind);
                    return context_matches<std::uint32_t>(r.next, r.previous, ctx.following, ctx.preceding)
                               ? *r.context_pair
                               : *r.context_free_pair;
                },
                semantics_);
            correct += matches(classify_score(score), labels_[i]);
        }
        return correct;
    }

    Genome mutate(const Genome& g, Rng& rng) const {
        return g.genes.empty() ? g : mutate_cagasa(g, neighbours_, rng);
    }
    std::pair<Genome, Genome> crossover(const Genome& a, const Genome& b, Rng& rng) const {
        if (a.genes.empty()) return {a, b};
        return crossover_cagasa(a, b, rng);
    }
    std::optional<std::size_t> max_fitness() const { return labels_.size(); }

private:
    struct Slot {
        std::uint32_t word = 0;
        std::int32_t gene = -1;
        ClassificationValuePair fixed;
    };
    struct IdRule {
        std::vector<std::uint32_t> next, previous;
        std::size_t number_ahead = 0, number_behind = 0;
        const ClassificationValuePair* context_pair = nullptr;
        const ClassificationValuePair* context_free_pair = nullptr;
    };

    IdRule to_ids(const CagasaGene& gene) const {
        IdRule r;
        auto convert = [&](const std::vector<std::string>& words, std::vector<std::uint32_t>& out) {
            for (const auto& w : words)
                if (auto it = vocab_.find(w); it != vocab_.end()) out.push_back(it->second);
            make_set(out);
        };
        convert(gene.rule.list_next, r.next);
        convert(gene.rule.list_previous, r.previous);
        r.number_ahead = gene.rule.number_ahead;
        r.number_behind = gene.rule.number_behind;
        r.context_pair = &gene.rule.context_pair;
        r.context_free_pair = &gene.context_free_pair;
        return r;
    }

    Dictionaries dicts_;
    UnknownWordIndex index_;
    Semantics semantics_;
    std::vector<CorpusNeighbours> neighbours_;
    std::unordered_map<std::string, std::uint32_t> vocab_;
    std::vector<Slot> slots_;
    std::vector<std::size_t> offsets_;
    std::vector<Label> labels_;
};

static_assert(GeneticProblem<CagasaProblem>);

}  // namespace gasa
