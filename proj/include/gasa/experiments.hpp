#pragma once

// Experiment protocols: word-level cross-validation (sentiment vs amplifier,
// polarity value), instance-level holdout and cross-validation, and the
// planted-lexicon corpus generator used as a ground-truth oracle.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gasa/cagasa.hpp"
#include "gasa/corpus.hpp"
#include "gasa/errors.hpp"
#include "gasa/evaluator.hpp"
#include "gasa/ga_engine.hpp"
#include "gasa/gasa.hpp"
#include "gasa/lexicon.hpp"
#include "gasa/rng.hpp"

namespace gasa {

enum class Protocol : unsigned char { SentVsAmp, PolarityValue, HoldoutAccuracy, GasaVsCagasa };
enum class Algorithm : unsigned char { Gasa, Cagasa };

inline std::string_view protocol_name(Protocol p) {
    switch (p) {
        case Protocol::SentVsAmp: return "sent-vs-amp";
        case Protocol::PolarityValue: return "polarity-value";
        case Protocol::HoldoutAccuracy: return "holdout-accuracy";
        case Protocol::GasaVsCagasa: break;
    }
    return "gasa-vs-cagasa";
}

inline std::string_view algorithm_name(Algorithm a) { return a == Algorithm::Gasa ? "gasa" : "cagasa"; }

inline std::optional<Algorithm> parse_algorithm(std::string_view text) {
    if (text == "gasa") return Algorithm::Gasa;
    if (text == "cagasa") return Algorithm::Cagasa;
    return std::nullopt;
}

/// Test-set outcome counts keyed by true label.
struct Confusion {
    std::size_t true_positive = 0;
    std::size_t false_negative = 0;  ///< positive predicted negative
    std::size_t positive_ties = 0;
    std::size_t true_negative = 0;
    std::size_t false_positive = 0;  ///< negative predicted positive
    std::size_t negative_ties = 0;

    void add(Label truth, Verdict v) {
        if (truth == Label::Positive)
            ++(v == Verdict::Positive ? true_positive : v == Verdict::Negative ? false_negative : positive_ties);
        else
            ++(v == Verdict::Negative ? true_negative : v == Verdict::Positive ? false_positive : negative_ties);
    }
    std::size_t total() const {
        return true_positive + false_negative + positive_ties + true_negative + false_positive + negative_ties;
    }
    std::size_t correct() const { return true_positive + true_negative; }
};

struct FoldResult {
    double accuracy = 0.0;
    std::size_t test_size = 0;                 ///< test words or test instances
    std::size_t training_dictionary_size = 0;  ///< seeded sentiment words (word protocols)
    std::size_t best_fitness = 0;
    std::size_t training_instances = 0;
    std::size_t generations_executed = 0;
};

struct ExperimentReport {
    Protocol protocol = Protocol::HoldoutAccuracy;
    Algorithm algorithm = Algorithm::Gasa;
    Semantics semantics = Semantics::Literal;
    GAConfig config;
    std::optional<std::size_t> frequency_threshold;
    std::size_t words_considered = 0;
    std::vector<FoldResult> folds;
    double mean_accuracy = 0.0;
    std::optional<Confusion> confusion;

    std::vector<double> fold_accuracies() const {
        std::vector<double> out;
        for (const auto& f : folds) out.push_back(f.accuracy);
        return out;
    }

    void finalize() {
        mean_accuracy = folds.empty() ? 0.0
                                      : std::accumulate(folds.begin(), folds.end(), 0.0,
                                                        [](double acc, const FoldResult& f) { return acc + f.accuracy; }) /
                                            static_cast<double>(folds.size());
    }
};

namespace detail {

inline std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace detail

/// Machine-readable `field<TAB>value` lines. Fold fields are numbered from 1.
inline void write_report_tsv(const ExperimentReport& r, std::ostream& out) {
    auto field = [&](std::string_view name, const auto& value) { out << name << '\t' << value << '\n'; };
    field("protocol", protocol_name(r.protocol));
    field("algorithm", algorithm_name(r.algorithm));
    field("semantics", semantics_name(r.semantics));
    field("population_size", r.config.population_size);
    field("tournament_size", r.config.tournament_size);
    field("max_generations", r.config.max_generations);
    field("crossover_rate", detail::fixed(r.config.crossover_rate, 2));
    field("mutation_rate", detail::fixed(r.config.mutation_rate, 2));
    field("seed", r.config.seed);
    if (r.frequency_threshold) field("frequency_threshold", *r.frequency_threshold);
    if (r.protocol == Protocol::SentVsAmp || r.protocol == Protocol::PolarityValue)
        field("words_considered", r.words_considered);
    field("folds", r.folds.size());
    for (std::size_t i = 0; i < r.folds.size(); ++i) {
        const auto& f = r.folds[i];
        const std::string p = "fold_" + std::to_string(i + 1) + "_";
        field(p + "accuracy", detail::fixed(f.accuracy));
        field(p + "test_size", f.test_size);
        if (r.protocol == Protocol::SentVsAmp || r.protocol == Protocol::PolarityValue)
            field(p + "training_dictionary_size", f.training_dictionary_size);
        field(p + "training_instances", f.training_instances);
        field(p + "best_fitness", f.best_fitness);
        field(p + "generations_executed", f.generations_executed);
    }
    field("mean_accuracy", detail::fixed(r.mean_accuracy));
    if (r.confusion) {
        const auto& c = *r.confusion;
        field("true_positive", c.true_positive);
        field("false_negative", c.false_negative);
        field("positive_ties", c.positive_ties);
        field("true_negative", c.true_negative);
        field("false_positive", c.false_positive);
        field("negative_ties", c.negative_ties);
    }
    if (!out) throw IoError("write_report_tsv: write failed");
}

/// Aligned table for terminals.
inline void write_report_table(const ExperimentReport& r, std::ostream& out) {
    out << "protocol   " << protocol_name(r.protocol) << " (" << algorithm_name(r.algorithm) << ", "
        << semantics_name(r.semantics) << " semantics)\n";
    out << "ga         pop " << r.config.population_size << ", tournament " << r.config.tournament_size
        << ", generations " << r.config.max_generations << ", crossover " << detail::fixed(r.config.crossover_rate, 2)
        << ", mutation " << detail::fixed(r.config.mutation_rate, 2) << ", seed " << r.config.seed << '\n';
    const bool word_level = r.protocol == Protocol::SentVsAmp || r.protocol == Protocol::PolarityValue;
    if (r.frequency_threshold) out << "threshold  count >= " << std::max<std::size_t>(*r.frequency_threshold, 1) << '\n';
    if (word_level) out << "words      " << r.words_considered << '\n';
    out << '\n'
        << std::setw(6) << "fold" << std::setw(12) << (word_level ? "test words" : "test inst") << std::setw(12)
        << (word_level ? "dict words" : "train inst") << std::setw(14) << "best fitness" << std::setw(12)
        << "accuracy" << '\n';
    for (std::size_t i = 0; i < r.folds.size(); ++i) {
        const auto& f = r.folds[i];
        out << std::setw(6) << i + 1 << std::setw(12) << f.test_size << std::setw(12)
            << (word_level ? f.training_dictionary_size : f.training_instances) << std::setw(14) << f.best_fitness
            << std::setw(11) << detail::fixed(100.0 * f.accuracy, 2) << "%\n";
    }
    out << std::setw(44) << "mean" << std::setw(11) << detail::fixed(100.0 * r.mean_accuracy, 2) << "%\n";
    if (r.confusion) {
        const auto& c = *r.confusion;
        out << "\n              pred +   pred -      tie\n"
            << "true +  " << std::setw(9) << c.true_positive << std::setw(9) << c.false_negative << std::setw(9)
            << c.positive_ties << '\n'
            << "true -  " << std::setw(9) << c.false_positive << std::setw(9) << c.true_negative << std::setw(9)
            << c.negative_ties << '\n';
    }
}

/// Dictionary words occurring at least max(threshold, 1) times in `corpus`,
/// sorted by word.
inline std::vector<std::string> frequent_dictionary_words(const Corpus& corpus, const Dictionary& dict,
                                                          std::size_t threshold) {
    const auto counts = word_frequencies(corpus);
    const std::size_t min_count = std::max<std::size_t>(threshold, 1);
    std::vector<std::string> words;
    for (const auto& [word, pair] : dict.entries()) {
        auto it = counts.find(word);
        if (it != counts.end() && it->second >= min_count) words.push_back(word);
    }
    return words;
}

inline bool learned_as_sentiment(const ClassificationValuePair& gene) { return gene.kind == Kind::Sentiment; }

/// A sentiment gene with the dictionary's sign. Zero and amplifier genes miss.
inline bool polarity_recovered(const ClassificationValuePair& gene, const ClassificationValuePair& truth) {
    return gene.kind == Kind::Sentiment && gene.value != 0.0 && (gene.value > 0.0) == (truth.value > 0.0);
}

namespace detail {

template <class Score>
ExperimentReport run_word_cv(Protocol protocol, const Corpus& corpus, const Dictionaries& dicts,
                             std::size_t threshold, std::size_t k, const GAConfig& config, Semantics semantics,
                             Score&& score_word) {
    ExperimentReport report;
    report.protocol = protocol;
    report.semantics = semantics;
    report.config = config;
    report.frequency_threshold = threshold;

    auto words = frequent_dictionary_words(corpus, dicts.sentiment(), threshold);
    if (words.empty()) throw ContractError("no dictionary word meets the frequency threshold");
    report.words_considered = words.size();
    const auto folds = make_folds(words, k, config.seed);

    for (std::size_t f = 0; f < k; ++f) {
        Dictionary seeded(Kind::Sentiment);
        for (std::size_t g = 0; g < k; ++g)
            if (g != f)
                for (const auto& w : folds[g]) seeded.add(w, dicts.sentiment().find(w)->value);
        for (const auto& w : folds[f])
            if (seeded.contains(w)) throw std::logic_error("test word leaked into seed dictionary: " + w);

        GasaProblem problem(corpus, Dictionaries(std::move(seeded), dicts.amplifier()), semantics);
        GAConfig fold_config = config;
        fold_config.seed = config.seed + f;
        const auto run = run_ga(problem, fold_config);
        const auto genes = extract_classifications(run.best.genome, folds[f], problem.index());

        std::size_t correct = 0;
        for (std::size_t i = 0; i < genes.size(); ++i)
            correct += score_word(genes[i], *dicts.sentiment().find(folds[f][i])) ? 1 : 0;

        FoldResult fr;
        fr.test_size = folds[f].size();
        fr.training_dictionary_size = problem.dictionaries().sentiment().size();
        fr.accuracy = static_cast<double>(correct) / static_cast<double>(fr.test_size);
        fr.best_fitness = run.best.fitness;
        fr.training_instances = problem.instance_count();
        fr.generations_executed = run.stats.generations_executed;
        report.folds.push_back(fr);
    }
    report.finalize();
    return report;
}

}  // namespace detail

/// Frequent sentiment-dictionary words are dealt into k folds. Per fold the
/// other folds seed the sentiment dictionary, the fold's words become genes,
/// and the GA maximises instance accuracy on `corpus`. A test word scores when
/// its evolved gene is a sentiment gene.
inline ExperimentReport run_sent_vs_amp_cv(const Corpus& corpus, const Dictionaries& dicts, std::size_t threshold,
                                           std::size_t k, const GAConfig& config, Semantics semantics) {
    return detail::run_word_cv(Protocol::SentVsAmp, corpus, dicts, threshold, k, config, semantics,
                               [](const ClassificationValuePair& gene, const ClassificationValuePair&) {
                                   return learned_as_sentiment(gene);
                               });
}

/// Same fold machinery; a test word scores when its gene is a sentiment gene
/// whose sign matches the dictionary polarity. Zero and amplifier genes miss.
inline ExperimentReport run_polarity_value_cv(const Corpus& corpus, const Dictionaries& dicts, std::size_t threshold,
                                              std::size_t k, const GAConfig& config, Semantics semantics) {
    return detail::run_word_cv(Protocol::PolarityValue, corpus, dicts, threshold, k, config, semantics,
                               [](const ClassificationValuePair& gene, const ClassificationValuePair& truth) {
                                   return polarity_recovered(gene, truth);
                               });
}

/// A trained GASA or CA-GASA model bundled with its resolution context.
struct TrainedModel {
    Algorithm algorithm = Algorithm::Gasa;
    Semantics semantics = Semantics::Literal;
    Dictionaries dicts;
    UnknownWordIndex index;
    std::optional<GasaChromosome> gasa;
    std::optional<CagasaChromosome> cagasa;
    std::size_t best_fitness = 0;
    std::size_t training_instances = 0;
    RunStats stats;

    Verdict predict(std::span<const std::string> tokens) const {
        if (algorithm == Algorithm::Gasa) return gasa::predict(*gasa, tokens, index, dicts, semantics);
        return predict_cagasa(*cagasa, tokens, index, dicts, semantics);
    }
};

inline TrainedModel train_model(const Corpus& train, const Dictionaries& dicts, const GAConfig& config,
                                Semantics semantics, Algorithm algorithm) {
    TrainedModel model;
    model.algorithm = algorithm;
    model.semantics = semantics;
    model.dicts = dicts;
    if (algorithm == Algorithm::Gasa) {
        GasaProblem problem(train, dicts, semantics);
        auto run = run_ga(problem, config);
        model.index = problem.index();
        model.gasa = std::move(run.best.genome);
        model.best_fitness = run.best.fitness;
        model.stats = std::move(run.stats);
        model.training_instances = problem.instance_count();
    } else {
        CagasaProblem problem(train, dicts, semantics);
        auto run = run_ga(problem, config);
        model.index = problem.index();
        model.cagasa = std::move(run.best.genome);
        model.best_fitness = run.best.fitness;
        model.stats = std::move(run.stats);
        model.training_instances = problem.instance_count();
    }
    return model;
}

inline Confusion evaluate_model(const TrainedModel& model, const Corpus& test) {
    Confusion c;
    for (const auto& inst : test.instances) c.add(inst.label, model.predict(inst.tokens));
    return c;
}

namespace detail {

inline FoldResult fold_from(const TrainedModel& model, const Confusion& c) {
    FoldResult fr;
    fr.test_size = c.total();
    fr.accuracy = fr.test_size ? static_cast<double>(c.correct()) / static_cast<double>(fr.test_size) : 0.0;
    fr.best_fitness = model.best_fitness;
    fr.training_instances = model.training_instances;
    fr.generations_executed = model.stats.generations_executed;
    return fr;
}

}  // namespace detail

/// Stratified 70/30 split (split seed = config.seed), train, score the test part.
inline ExperimentReport run_holdout_accuracy(const Corpus& corpus, const Dictionaries& dicts, const GAConfig& config,
                                             Semantics semantics, Algorithm algorithm,
                                             double train_fraction = 0.7) {
    const auto split = split_holdout(corpus, train_fraction, config.seed);
    const auto model = train_model(split.train, dicts, config, semantics, algorithm);
    const auto confusion = evaluate_model(model, split.test);

    ExperimentReport report;
    report.protocol = Protocol::HoldoutAccuracy;
    report.algorithm = algorithm;
    report.semantics = semantics;
    report.config = config;
    report.folds.push_back(detail::fold_from(model, confusion));
    report.confusion = confusion;
    report.finalize();
    return report;
}

/// k-fold cross-validation over instances; fold i trains with seed
/// config.seed + i. Run once per algorithm on the same seed to compare them.
inline ExperimentReport run_instance_cv(const Corpus& corpus, const Dictionaries& dicts, std::size_t k,
                                        const GAConfig& config, Semantics semantics, Algorithm algorithm) {
    std::vector<std::size_t> positions(corpus.size());
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    const auto folds = make_folds(positions, k, config.seed);

    ExperimentReport report;
    report.protocol = Protocol::GasaVsCagasa;
    report.algorithm = algorithm;
    report.semantics = semantics;
    report.config = config;
    Confusion total;
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_pos;
        for (std::size_t g = 0; g < k; ++g)
            if (g != f) train_pos.insert(train_pos.end(), folds[g].begin(), folds[g].end());
        std::sort(train_pos.begin(), train_pos.end());
        auto test_pos = folds[f];
        std::sort(test_pos.begin(), test_pos.end());

        GAConfig fold_config = config;
        fold_config.seed = config.seed + f;
        const auto model = train_model(subset(corpus, train_pos), dicts, fold_config, semantics, algorithm);
        const auto confusion = evaluate_model(model, subset(corpus, test_pos));
        report.folds.push_back(detail::fold_from(model, confusion));
        total.true_positive += confusion.true_positive;
        total.false_negative += confusion.false_negative;
        total.positive_ties += confusion.positive_ties;
        total.true_negative += confusion.true_negative;
        total.false_positive += confusion.false_positive;
        total.negative_ties += confusion.negative_ties;
    }
    report.confusion = total;
    report.finalize();
    return report;
}

// ---------------------------------------------------------------------------
// Planted lexicon

struct PlantedLexicon {
    std::vector<LexiconEntry> words;   ///< ground truth, non-filler
    std::vector<std::string> fillers;  ///< all Sentiment:0.0
    /// Relative sampling weight per word then per filler; empty = uniform.
    std::vector<double> weights;

    std::size_t vocabulary_size() const { return words.size() + fillers.size(); }

    ClassificationValuePair truth(std::string_view word) const {
        for (const auto& e : words)
            if (e.word == word) return e.pair;
        return sentiment(0.0);
    }

    /// Planted sentiment words with nonzero value, as a +1/-1 polarity dictionary.
    Dictionary polarity_dictionary() const {
        Dictionary d(Kind::Sentiment);
        for (const auto& e : words)
            if (e.pair.kind == Kind::Sentiment && e.pair.value != 0.0) d.add(e.word, e.pair.value > 0 ? 1.0 : -1.0);
        return d;
    }
};

struct PlantedLexiconShape {
    std::size_t positive = 13;
    std::size_t negative = 13;
    std::size_t amplifiers = 4;
    std::size_t fillers = 10;
    /// Zipf exponent over the shuffled vocabulary; 0 gives uniform sampling.
    double zipf_exponent = 0.0;
};

/// Pseudo-words `posNN`, `negNN`, `ampNN` (alternating 1.5 / 0.5) and
/// `fillNN`. With a nonzero exponent, word ranks are a seeded permutation.
inline PlantedLexicon make_planted_lexicon(const PlantedLexiconShape& shape, std::uint64_t seed = 1) {
    PlantedLexicon lex;
    auto name = [](const char* stem, std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%02zu", stem, i);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < shape.positive; ++i) lex.words.push_back({name("pos", i), sentiment(1.0)});
    for (std::size_t i = 0; i < shape.negative; ++i) lex.words.push_back({name("neg", i), sentiment(-1.0)});
    for (std::size_t i = 0; i < shape.amplifiers; ++i)
        lex.words.push_back({name("amp", i), amplifier(i % 2 == 0 ? 1.5 : 0.5)});
    for (std::size_t i = 0; i < shape.fillers; ++i) lex.fillers.push_back(name("fill", i));
    if (shape.zipf_exponent != 0.0) {
        std::vector<std::size_t> rank(lex.vocabulary_size());
        std::iota(rank.begin(), rank.end(), std::size_t{0});
        Rng rng(seed);
        rng.shuffle(rank);
        for (auto r : rank) lex.weights.push_back(1.0 / std::pow(static_cast<double>(r + 1), shape.zipf_exponent));
    }
    return lex;
}

/// Samples sentences (length uniform in [min_length, max_length], words drawn
/// by weight from lexicon words and fillers), labels each by its planted
/// score, discards ties and over-quota labels, and stops at n_instances with
/// an even label split. Gives up after 10 * n_instances sentence draws.
inline Corpus generate_synthetic_corpus(const PlantedLexicon& lexicon, std::size_t n_instances,
                                        std::pair<std::size_t, std::size_t> length_range, Semantics semantics,
                                        Rng& rng) {
    if (lexicon.words.empty()) throw ContractError("generate_synthetic_corpus: empty planted lexicon");
    if (n_instances % 2 != 0) throw ContractError("generate_synthetic_corpus: instance count must be even");
    if (length_range.first == 0 || length_range.first > length_range.second)
        throw ContractError("generate_synthetic_corpus: bad length range");
    const auto seeds = seed_amplifier_dictionary();
    for (const auto& e : lexicon.words)
        if (seeds.contains(e.word)) throw ContractError("planted word collides with a seed: " + e.word);
    for (const auto& f : lexicon.fillers)
        if (seeds.contains(f)) throw ContractError("filler collides with a seed: " + f);
    if (!lexicon.weights.empty() && lexicon.weights.size() != lexicon.vocabulary_size())
        throw ContractError("generate_synthetic_corpus: weights do not match vocabulary");

    std::vector<std::string> vocab;
    std::vector<ClassificationValuePair> truth;
    for (const auto& e : lexicon.words) vocab.push_back(e.word), truth.push_back(e.pair);
    for (const auto& f : lexicon.fillers) vocab.push_back(f), truth.push_back(sentiment(0.0));
    std::vector<double> cumulative(vocab.size());
    double running = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i)
        cumulative[i] = running += lexicon.weights.empty() ? 1.0 : lexicon.weights[i];

    auto draw_word = [&]() -> std::size_t {
        const double u = rng.uniform01() * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), vocab.size() - 1);
    };

    Corpus corpus;
    corpus.provenance = "synthetic";
    std::size_t quota[2] = {n_instances / 2, n_instances / 2};
    std::vector<std::size_t> ids;
    std::vector<ClassificationValuePair> pairs;
    for (std::size_t attempt = 0; corpus.size() < n_instances; ++attempt) {
        if (attempt >= 10 * n_instances)
            throw GenerationError("could not draw " + std::to_string(n_instances) +
                                  " balanced, non-tied sentences within the retry budget");
        const auto len = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(length_range.first),
                                                              static_cast<std::int64_t>(length_range.second)));
        ids.clear();
        pairs.clear();
        for (std::size_t i = 0; i < len; ++i) {
            ids.push_back(draw_word());
            pairs.push_back(truth[ids.back()]);
        }
        const Verdict v = classify_score(score_pairs(pairs, semantics));
        if (v == Verdict::Tie) continue;
        const Label label = v == Verdict::Positive ? Label::Positive : Label::Negative;
        auto& left = quota[label == Label::Positive ? 0 : 1];
        if (left == 0) continue;
        --left;
        Instance inst;
        inst.label = label;
        for (auto id : ids) inst.tokens.push_back(vocab[id]);
        corpus.instances.push_back(std::move(inst));
    }
    return corpus;
}

/// Planted words and fillers in lexicon format (ground truth).
inline void write_planted_lexicon(const PlantedLexicon& lexicon, std::ostream& out) {
    for (const auto& e : lexicon.words) write_lexicon_record(out, e.word, e.pair);
    for (const auto& f : lexicon.fillers) write_lexicon_record(out, f, sentiment(0.0));
    if (!out) throw IoError("write_planted_lexicon: write failed");
}

}  // namespace gasa
