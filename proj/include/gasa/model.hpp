#pragma once

// Model files: the lexicon format with a `#`-prefixed header, the embedded
// seed dictionaries, and one record per gene.
//
//   #gasa-model<TAB>1
//   #algo<TAB>gasa|cagasa
//   #semantics<TAB>literal|prose
//   #population_size<TAB>200            (and the other GA settings)
//   #best_fitness<TAB>...  #training_instances<TAB>...  #generations_executed<TAB>...
//   #section<TAB>sentiment-dictionary
//   word<TAB>sentiment<TAB>1.0
//   #section<TAB>amplifier-dictionary
//   not<TAB>amplifier<TAB>-1.0
//   #section<TAB>genes
//   word<TAB>kind<TAB>value[<TAB>context columns]
//
// CA-GASA gene records carry the context-free pair in the first three columns,
// then next_size, previous_size, list_next, list_previous, number_ahead,
// number_behind, context kind, context value. Lists are comma-joined, `-`
// when empty (neither character can occur in a token).

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gasa/cagasa.hpp"
#include "gasa/errors.hpp"
#include "gasa/experiments.hpp"
#include "gasa/lexicon.hpp"

namespace gasa {

inline constexpr std::string_view kModelMagic = "#gasa-model";

namespace detail {

inline std::string join_words(const std::vector<std::string>& words) {
    if (words.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? "," : "") + words[i];
    return out;
}

inline std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> out;
    if (text == "-") return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (!piece.empty()) out.emplace_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    make_set(out);
    return out;
}

inline std::size_t parse_count(std::string_view text, std::size_t line_no) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("bad integer '" + std::string(text) + "'", line_no);
    return v;
}

inline double parse_double(std::string_view text, std::size_t line_no) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("bad number '" + std::string(text) + "'", line_no);
    return v;
}

}  // namespace detail

inline void write_cagasa_record(std::ostream& out, const CagasaGene& g) {
    out << g.word << '\t' << kind_name(g.context_free_pair.kind) << '\t' << format_value(g.context_free_pair.value)
        << '\t' << g.rule.next_size << '\t' << g.rule.previous_size << '\t' << detail::join_words(g.rule.list_next)
        << '\t' << detail::join_words(g.rule.list_previous) << '\t' << g.rule.number_ahead << '\t'
        << g.rule.number_behind << '\t' << kind_name(g.rule.context_pair.kind) << '\t'
        << format_value(g.rule.context_pair.value) << '\n';
}

inline CagasaGene parse_cagasa_record(std::span<const std::string_view> fields, std::size_t line_no) {
    if (fields.size() != 11) throw ParseError("context gene record needs 11 fields", line_no);
    auto head = parse_lexicon_record(fields.first(3), line_no);
    CagasaGene g;
    g.word = std::move(head.word);
    g.context_free_pair = head.pair;
    g.rule.next_size = detail::parse_count(fields[3], line_no);
    g.rule.previous_size = detail::parse_count(fields[4], line_no);
    g.rule.list_next = detail::split_words(fields[5]);
    g.rule.list_previous = detail::split_words(fields[6]);
    g.rule.number_ahead = detail::parse_count(fields[7], line_no);
    g.rule.number_behind = detail::parse_count(fields[8], line_no);
    auto kind = parse_kind(fields[9]);
    if (!kind) throw ParseError("unknown kind '" + std::string(fields[9]) + "'", line_no);
    g.rule.context_pair = {*kind, detail::parse_double(fields[10], line_no)};
    try {
        validate(g.rule);
    } catch (const ContractError& e) {
        throw ParseError(e.what(), line_no);
    }
    return g;
}

inline void write_model(const TrainedModel& m, const GAConfig& config, std::ostream& out) {
    auto header = [&](std::string_view key, const auto& value) { out << '#' << key << '\t' << value << '\n'; };
    out << kModelMagic << "\t1\n";
    header("algo", algorithm_name(m.algorithm));
    header("semantics", semantics_name(m.semantics));
    header("population_size", config.population_size);
    header("tournament_size", config.tournament_size);
    header("max_generations", config.max_generations);
    header("crossover_rate", detail::fixed(config.crossover_rate, 2));
    header("mutation_rate", detail::fixed(config.mutation_rate, 2));
    header("seed", config.seed);
    header("best_fitness", m.best_fitness);
    header("training_instances", m.training_instances);
    header("generations_executed", m.stats.generations_executed);
    header("section", "sentiment-dictionary");
    for (const auto& [w, p] : m.dicts.sentiment().entries()) write_lexicon_record(out, w, p);
    header("section", "amplifier-dictionary");
    for (const auto& [w, p] : m.dicts.amplifier().entries()) write_lexicon_record(out, w, p);
    header("section", "genes");
    if (m.algorithm == Algorithm::Gasa)
        export_lexicon(m.index.words(), m.gasa->genes, out);
    else
        for (const auto& g : m.cagasa->genes) write_cagasa_record(out, g);
    if (!out) throw IoError("write_model: write failed");
}

struct LoadedModel {
    TrainedModel model;
    GAConfig config;
    std::map<std::string, std::string, std::less<>> header;
};

inline LoadedModel read_model(std::istream& in) {
    LoadedModel loaded;
    auto& m = loaded.model;
    std::string line;
    std::size_t line_no = 0;
    if (!read_line(in, line) || split_tabs(line).at(0) != kModelMagic) throw ParseError("not a model file", 1);
    ++line_no;

    enum class Section { Header, Sentiment, Amplifier, Genes } section = Section::Header;
    Dictionary sent(Kind::Sentiment), amp(Kind::Amplifier);
    std::vector<std::string> words;
    std::vector<ClassificationValuePair> pairs;
    std::vector<CagasaGene> cgenes;
    bool have_algo = false;

    while (read_line(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_tabs(line);
        if (line.front() == '#') {
            if (fields.size() != 2) throw ParseError("bad header line", line_no);
            const auto key = fields[0].substr(1);
            const auto value = fields[1];
            if (key == "section") {
                if (value == "sentiment-dictionary")
                    section = Section::Sentiment;
                else if (value == "amplifier-dictionary")
                    section = Section::Amplifier;
                else if (value == "genes")
                    section = Section::Genes;
                else
                    throw ParseError("unknown section '" + std::string(value) + "'", line_no);
                continue;
            }
            loaded.header[std::string(key)] = std::string(value);
            if (key == "algo") {
                auto a = parse_algorithm(value);
                if (!a) throw ParseError("unknown algorithm '" + std::string(value) + "'", line_no);
                m.algorithm = *a;
                have_algo = true;
            } else if (key == "semantics") {
                auto s = parse_semantics(value);
                if (!s) throw ParseError("unknown semantics '" + std::string(value) + "'", line_no);
                m.semantics = *s;
            } else if (key == "population_size") {
                loaded.config.population_size = detail::parse_count(value, line_no);
            } else if (key == "tournament_size") {
                loaded.config.tournament_size = detail::parse_count(value, line_no);
            } else if (key == "max_generations") {
                loaded.config.max_generations = detail::parse_count(value, line_no);
            } else if (key == "crossover_rate") {
                loaded.config.crossover_rate = detail::parse_double(value, line_no);
            } else if (key == "mutation_rate") {
                loaded.config.mutation_rate = detail::parse_double(value, line_no);
            } else if (key == "seed") {
                loaded.config.seed = detail::parse_count(value, line_no);
            } else if (key == "best_fitness") {
                m.best_fitness = detail::parse_count(value, line_no);
            } else if (key == "training_instances") {
                m.training_instances = detail::parse_count(value, line_no);
            } else if (key == "generations_executed") {
                m.stats.generations_executed = detail::parse_count(value, line_no);
            }
            continue;
        }
        switch (section) {
            case Section::Header: throw ParseError("record before any section", line_no);
            case Section::Sentiment:
            case Section::Amplifier: {
                auto e = parse_lexicon_record(fields, line_no);
                const Kind want = section == Section::Sentiment ? Kind::Sentiment : Kind::Amplifier;
                if (e.pair.kind != want) throw ParseError("dictionary entry of the wrong kind", line_no);
                (section == Section::Sentiment ? sent : amp).add(e.word, e.pair.value);
                break;
            }
            case Section::Genes:
                if (m.algorithm == Algorithm::Gasa) {
                    auto e = parse_lexicon_record(fields, line_no);
                    words.push_back(std::move(e.word));
                    pairs.push_back(e.pair);
                } else {
                    cgenes.push_back(parse_cagasa_record(fields, line_no));
                    words.push_back(cgenes.back().word);
                }
                break;
        }
    }
    if (!have_algo) throw ParseError("model header lacks #algo", 0);
    m.dicts = Dictionaries(std::move(sent), std::move(amp));
    try {
        m.index = UnknownWordIndex(words);
    } catch (const ContractError& e) {
        throw ParseError(e.what(), 0);
    }
    for (const auto& w : words)
        if (m.dicts.contains(w)) throw ConflictError(w);
    if (m.algorithm == Algorithm::Gasa)
        m.gasa = GasaChromosome{std::move(pairs)};
    else
        m.cagasa = CagasaChromosome{std::move(cgenes)};
    return loaded;
}

/// The learned lexicon: one record per gene (CA-GASA: the context-free pair).
inline void export_model_lexicon(const TrainedModel& m, std::ostream& out) {
    if (m.algorithm == Algorithm::Gasa) {
        export_lexicon(m.index.words(), m.gasa->genes, out);
        return;
    }
    for (const auto& g : m.cagasa->genes) write_lexicon_record(out, g.word, g.context_free_pair);
    if (!out) throw IoError("export_model_lexicon: write failed");
}

}  // namespace gasa
