#pragma once

// Classification-value pairs, seed dictionaries and the tab-separated
// lexicon format used for learned dictionaries.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gasa/errors.hpp"

namespace gasa {

enum class Kind : unsigned char { Sentiment, Amplifier };

struct ClassificationValuePair {
    Kind kind = Kind::Sentiment;
    double value = 0.0;

    friend bool operator==(const ClassificationValuePair&, const ClassificationValuePair&) = default;
};

inline constexpr ClassificationValuePair sentiment(double v) { return {Kind::Sentiment, v}; }
inline constexpr ClassificationValuePair amplifier(double v) { return {Kind::Amplifier, v}; }

inline constexpr std::array<double, 3> kSentimentValues{-1.0, 0.0, 1.0};
inline constexpr std::array<double, 3> kAmplifierValues{0.5, 1.0, 1.5};

/// The six pairs a gene may take, sentiment values first.
inline constexpr std::array<ClassificationValuePair, 6> kEvolvablePairs{
    sentiment(-1.0), sentiment(0.0), sentiment(1.0),
    amplifier(0.5),  amplifier(1.0), amplifier(1.5)};

/// Position of `pair` in kEvolvablePairs, or empty if it is not evolvable.
inline std::optional<std::size_t> evolvable_index(const ClassificationValuePair& pair) {
    for (std::size_t i = 0; i < kEvolvablePairs.size(); ++i)
        if (kEvolvablePairs[i] == pair) return i;
    return std::nullopt;
}

inline bool is_evolvable(const ClassificationValuePair& pair) {
    return evolvable_index(pair).has_value();
}

inline std::string_view kind_name(Kind kind) {
    return kind == Kind::Sentiment ? "sentiment" : "amplifier";
}

inline std::optional<Kind> parse_kind(std::string_view text) {
    if (text == "sentiment") return Kind::Sentiment;
    if (text == "amplifier") return Kind::Amplifier;
    return std::nullopt;
}

/// Decimal with one fractional digit, e.g. "1.0", "-1.0", "0.5".
inline std::string format_value(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value == 0.0 ? 0.0 : value);
    return buf;
}

inline std::string to_string(const ClassificationValuePair& pair) {
    return std::string(kind_name(pair.kind)) + ":" + format_value(pair.value);
}

inline std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string_view trim(std::string_view text) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    auto first = std::find_if(text.begin(), text.end(), not_space);
    auto last = std::find_if(text.rbegin(), text.rend(), not_space).base();
    return first < last ? std::string_view(first, last) : std::string_view{};
}

/// Splits on TAB without collapsing empty fields.
inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return fields;
}

/// Reads lines, dropping a trailing CR so CRLF files behave like LF files.
inline bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

/// Word -> pair table whose entries all share one kind.
class Dictionary {
public:
    using Map = std::map<std::string, ClassificationValuePair, std::less<>>;

    explicit Dictionary(Kind kind) : kind_(kind) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Adds `word` with `value`. Re-adding the same value is a no-op; a
    /// different value throws ConflictError.
    void add(std::string_view word, double value) {
        if (word.empty()) throw ContractError("Dictionary::add: empty word");
        auto [it, inserted] = entries_.try_emplace(std::string(word), ClassificationValuePair{kind_, value});
        if (!inserted && it->second.value != value) throw ConflictError(std::string(word));
    }

    bool contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }

    std::optional<ClassificationValuePair> find(std::string_view word) const {
        auto it = entries_.find(word);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    /// Sorted by word.
    const Map& entries() const noexcept { return entries_; }

    /// Copy without the given words.
    Dictionary without(std::span<const std::string> words) const {
        Dictionary out = *this;
        for (const auto& w : words) {
            auto it = out.entries_.find(w);
            if (it != out.entries_.end()) out.entries_.erase(it);
        }
        return out;
    }

private:
    Kind kind_;
    Map entries_;
};

/// The sentiment and amplifier seed dictionaries. Construction rejects any
/// word present in both.
class Dictionaries {
public:
    Dictionaries() : sentiment_(Kind::Sentiment), amplifier_(Kind::Amplifier) {}

    Dictionaries(Dictionary sentiment_dict, Dictionary amplifier_dict)
        : sentiment_(std::move(sentiment_dict)), amplifier_(std::move(amplifier_dict)) {
        if (sentiment_.kind() != Kind::Sentiment || amplifier_.kind() != Kind::Amplifier)
            throw ContractError("Dictionaries: dictionary kinds swapped");
        for (const auto& [word, pair] : amplifier_.entries())
            if (sentiment_.contains(word)) throw ConflictError(word);
    }

    const Dictionary& sentiment() const noexcept { return sentiment_; }
    const Dictionary& amplifier() const noexcept { return amplifier_; }

    bool contains(std::string_view word) const {
        return sentiment_.contains(word) || amplifier_.contains(word);
    }

private:
    Dictionary sentiment_;
    Dictionary amplifier_;
};

/// Sentiment dictionary first, then amplifier. Empty means the word is unknown.
inline std::optional<ClassificationValuePair> lookup(std::string_view word, const Dictionary& sentiment_dict,
                                                     const Dictionary& amplifier_dict) {
    if (auto hit = sentiment_dict.find(word)) return hit;
    return amplifier_dict.find(word);
}

inline std::optional<ClassificationValuePair> lookup(std::string_view word, const Dictionaries& dicts) {
    return lookup(word, dicts.sentiment(), dicts.amplifier());
}

enum class PolarityFormat {
    TwoFileLists,  ///< one word per line, separate positive and negative files
    SingleFileLabeled,  ///< `word<TAB>positive|negative`
};

namespace detail {

// '#' per our list format; ';' because the published opinion-lexicon files
// open with a ';'-commented preamble.
inline bool is_comment_or_blank(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#' || t.front() == ';';
}

inline std::string normalized_word(std::string_view raw, std::size_t line_no) {
    auto word = trim(raw);
    if (word.empty()) throw ParseError("empty word", line_no);
    if (std::any_of(word.begin(), word.end(), [](unsigned char c) { return std::isspace(c); }))
        throw ParseError("expected a single word, got '" + std::string(word) + "'", line_no);
    return to_lower(word);
}

inline void add_polar(Dictionary& dict, std::map<std::string, double, std::less<>>& seen, const std::string& word,
                      double value) {
    auto [it, inserted] = seen.try_emplace(word, value);
    if (!inserted && it->second != value) throw ConflictError(word);
    dict.add(word, value);
}

}  // namespace detail

/// Reads one polarity list (one word per line; '#' / ';' comments and blank
/// lines ignored) into `dict` with the given value.
inline void read_polarity_list(std::istream& in, double value, Dictionary& dict,
                               std::map<std::string, double, std::less<>>& seen) {
    std::string line;
    std::size_t line_no = 0;
    while (read_line(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        detail::add_polar(dict, seen, detail::normalized_word(line, line_no), value);
    }
}

/// Two-file form: positive words map to Sentiment:+1.0, negative words to
/// Sentiment:-1.0. A word in both lists throws ConflictError.
inline Dictionary load_sentiment_dictionary(std::istream& positive, std::istream& negative) {
    Dictionary dict(Kind::Sentiment);
    std::map<std::string, double, std::less<>> seen;
    read_polarity_list(positive, 1.0, dict, seen);
    read_polarity_list(negative, -1.0, dict, seen);
    return dict;
}

/// Single-file form: `word<TAB>positive` or `word<TAB>negative` per line.
inline Dictionary load_sentiment_dictionary(std::istream& labeled) {
    Dictionary dict(Kind::Sentiment);
    std::map<std::string, double, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (read_line(labeled, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2) throw ParseError("expected word<TAB>positive|negative", line_no);
        auto word = detail::normalized_word(fields[0], line_no);
        auto label = trim(fields[1]);
        double value = 0.0;
        if (label == "positive")
            value = 1.0;
        else if (label == "negative")
            value = -1.0;
        else
            throw ParseError("unknown polarity label '" + std::string(label) + "'", line_no);
        detail::add_polar(dict, seen, word, value);
    }
    return dict;
}

/// The negation seeds: not and never, both Amplifier:-1.0.
inline Dictionary seed_amplifier_dictionary() {
    Dictionary dict(Kind::Amplifier);
    dict.add("not", -1.0);
    dict.add("never", -1.0);
    return dict;
}

struct LexiconEntry {
    std::string word;
    ClassificationValuePair pair;

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

inline void write_lexicon_record(std::ostream& out, std::string_view word, const ClassificationValuePair& pair) {
    out << word << '\t' << kind_name(pair.kind) << '\t' << format_value(pair.value) << '\n';
}

/// One `word<TAB>kind<TAB>value` line per word, in the given order.
inline void export_lexicon(std::span<const std::string> unknown_words,
                           std::span<const ClassificationValuePair> best_genes, std::ostream& sink) {
    if (unknown_words.size() != best_genes.size())
        throw ContractError("export_lexicon: " + std::to_string(unknown_words.size()) + " words but " +
                            std::to_string(best_genes.size()) + " genes");
    for (std::size_t i = 0; i < unknown_words.size(); ++i) write_lexicon_record(sink, unknown_words[i], best_genes[i]);
    if (!sink) throw IoError("export_lexicon: write failed");
}

/// Parses the first three columns of a lexicon record. Extra columns are
/// allowed (the context-rule extension uses them).
inline LexiconEntry parse_lexicon_record(std::span<const std::string_view> fields, std::size_t line_no) {
    if (fields.size() < 3) throw ParseError("expected word<TAB>kind<TAB>value", line_no);
    auto word = detail::normalized_word(fields[0], line_no);
    auto kind = parse_kind(trim(fields[1]));
    if (!kind) throw ParseError("unknown kind '" + std::string(fields[1]) + "'", line_no);
    auto text = trim(fields[2]);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("bad value '" + std::string(text) + "'", line_no);
    return {std::move(word), {*kind, value}};
}

/// Reads a lexicon file; '#' lines and blank lines are skipped. Duplicate
/// words throw ConflictError.
inline std::vector<LexiconEntry> read_lexicon(std::istream& in) {
    std::vector<LexiconEntry> entries;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (read_line(in, line)) {
        ++line_no;
        if (trim(line).empty() || line.front() == '#') continue;
        auto fields = split_tabs(line);
        auto entry = parse_lexicon_record(fields, line_no);
        if (!seen.try_emplace(entry.word, entries.size()).second) throw ConflictError(entry.word);
        entries.push_back(std::move(entry));
    }
    return entries;
}

/// Builds a dictionary of `kind` from lexicon entries; entries of the other
/// kind are a ParseError.
inline Dictionary dictionary_from_lexicon(std::span<const LexiconEntry> entries, Kind kind) {
    Dictionary dict(kind);
    for (const auto& e : entries) {
        if (e.pair.kind != kind)
            throw ParseError("word '" + e.word + "' has kind " + std::string(kind_name(e.pair.kind)) + ", expected " +
                                 std::string(kind_name(kind)),
                             0);
        dict.add(e.word, e.pair.value);
    }
    return dict;
}

}  // namespace gasa
