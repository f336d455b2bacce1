#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gasa/errors.hpp"
#include "gasa/lexicon.hpp"
#include "gasa/rng.hpp"

namespace gasa {

enum class Label : unsigned char { Positive, Negative };

inline std::string_view label_name(Label label) { return label == Label::Positive ? "positive" : "negative"; }

/// Lowercases and splits on every maximal run of characters that are not
/// ASCII letters, digits or apostrophes. Bytes >= 0x80 count as separators.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (c < 0x80 && (std::isalnum(c) || c == '\'')) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

struct Instance {
    std::vector<std::string> tokens;
    Label label = Label::Positive;
};

struct Corpus {
    std::vector<Instance> instances;
    std::string provenance;

    std::size_t size() const noexcept { return instances.size(); }
    bool empty() const noexcept { return instances.empty(); }

    std::size_t count(Label label) const {
        std::size_t n = 0;
        for (const auto& inst : instances) n += inst.label == label;
        return n;
    }

    /// Appends `other` after this corpus's instances.
    void append(const Corpus& other) {
        instances.insert(instances.end(), other.instances.begin(), other.instances.end());
        if (provenance.empty())
            provenance = other.provenance;
        else if (!other.provenance.empty() && other.provenance != provenance)
            provenance += "+" + other.provenance;
    }
};

struct CorpusLoadReport {
    std::size_t lines_read = 0;
    std::size_t skipped_empty = 0;  ///< records whose text tokenized to nothing
};

/// Reads `label<TAB>text` records (label is `positive` or `negative`).
/// Blank lines are ignored; records with no tokens are skipped and counted.
inline Corpus load_corpus(std::istream& source, std::string provenance = {}, CorpusLoadReport* report = nullptr) {
    Corpus corpus;
    corpus.provenance = std::move(provenance);
    CorpusLoadReport local;
    std::string line;
    std::size_t line_no = 0;
    while (read_line(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++local.lines_read;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected label<TAB>text", line_no);
        std::string_view label_text = trim(std::string_view(line).substr(0, tab));
        Label label;
        if (label_text == "positive")
            label = Label::Positive;
        else if (label_text == "negative")
            label = Label::Negative;
        else
            throw ParseError("unknown label '" + std::string(label_text) + "'", line_no);
        auto tokens = tokenize(std::string_view(line).substr(tab + 1));
        if (tokens.empty()) {
            ++local.skipped_empty;
            continue;
        }
        corpus.instances.push_back({std::move(tokens), label});
    }
    if (report) *report = local;
    return corpus;
}

/// Writes the corpus back in `label<TAB>text` form, tokens joined by spaces.
inline void write_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& inst : corpus.instances) {
        out << label_name(inst.label) << '\t';
        for (std::size_t i = 0; i < inst.tokens.size(); ++i) out << (i ? " " : "") << inst.tokens[i];
        out << '\n';
    }
    if (!out) throw IoError("write_corpus: write failed");
}

/// Words that need a gene, in first-occurrence order. Frozen once built.
class UnknownWordIndex {
public:
    UnknownWordIndex() = default;

    /// Builds from an explicit ordered word list; duplicates are a ContractError.
    explicit UnknownWordIndex(std::vector<std::string> words) : words_(std::move(words)) {
        position_.reserve(words_.size());
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (!position_.emplace(words_[i], i).second)
                throw ContractError("UnknownWordIndex: duplicate word '" + words_[i] + "'");
    }

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    const std::string& word(std::size_t i) const { return words_.at(i); }

    std::optional<std::size_t> position_of(std::string_view word) const {
        auto it = position_.find(std::string(word));
        if (it == position_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> position_;
};

inline UnknownWordIndex build_unknown_index(const Corpus& corpus, const Dictionary& sentiment_dict,
                                            const Dictionary& amplifier_dict) {
    std::vector<std::string> words;
    std::unordered_map<std::string_view, bool> seen;
    for (const auto& inst : corpus.instances)
        for (const auto& tok : inst.tokens) {
            if (!seen.emplace(tok, true).second) continue;
            if (!sentiment_dict.contains(tok) && !amplifier_dict.contains(tok)) words.push_back(tok);
        }
    return UnknownWordIndex(std::move(words));
}

inline UnknownWordIndex build_unknown_index(const Corpus& corpus, const Dictionaries& dicts) {
    return build_unknown_index(corpus, dicts.sentiment(), dicts.amplifier());
}

/// Token occurrence counts over all instances.
inline std::map<std::string, std::size_t, std::less<>> word_frequencies(const Corpus& corpus) {
    std::map<std::string, std::size_t, std::less<>> counts;
    for (const auto& inst : corpus.instances)
        for (const auto& tok : inst.tokens) ++counts[tok];
    return counts;
}

/// Shuffles `items` with `seed` and deals them into k folds whose sizes
/// differ by at most one (the first |items| mod k folds get the extra item).
template <class T>
std::vector<std::vector<T>> make_folds(std::vector<T> items, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ContractError("make_folds: k must be at least 2");
    if (items.size() < k)
        throw ContractError("make_folds: " + std::to_string(items.size()) + " items cannot fill " +
                            std::to_string(k) + " folds");
    Rng rng(seed);
    rng.shuffle(items);
    std::vector<std::vector<T>> folds(k);
    const std::size_t base = items.size() / k, extra = items.size() % k;
    auto it = items.begin();
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t n = base + (f < extra ? 1 : 0);
        folds[f].assign(std::make_move_iterator(it), std::make_move_iterator(it + static_cast<std::ptrdiff_t>(n)));
        it += static_cast<std::ptrdiff_t>(n);
    }
    return folds;
}

struct HoldoutSplit {
    Corpus train;
    Corpus test;
};

/// Label-stratified split. The total training size is round(n * fraction);
/// each class first receives floor(n_class * fraction) and the leftover slots
/// go to the classes with the largest fractional remainder (positive first on
/// ties), so every class lands within one instance of its exact share. Which
/// members of a class train is random; both parts preserve corpus order.
inline HoldoutSplit split_holdout(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ContractError("split_holdout: train fraction must lie in (0, 1)");
    std::vector<std::size_t> by_label[2];
    for (std::size_t i = 0; i < corpus.size(); ++i)
        by_label[corpus.instances[i].label == Label::Positive ? 0 : 1].push_back(i);
    if (by_label[0].empty() || by_label[1].empty())
        throw ContractError("split_holdout: corpus must contain both labels");

    const auto total = static_cast<std::size_t>(std::lround(static_cast<double>(corpus.size()) * train_fraction));
    std::size_t n_train[2];
    double remainder[2];
    for (int c = 0; c < 2; ++c) {
        const double exact = static_cast<double>(by_label[c].size()) * train_fraction;
        n_train[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - std::floor(exact);
    }
    for (std::size_t left = total - std::min(total, n_train[0] + n_train[1]); left > 0; --left) {
        const int c = remainder[1] > remainder[0] ? 1 : 0;
        ++n_train[c];
        remainder[c] = -1.0;
    }

    Rng rng(seed);
    std::vector<bool> in_train(corpus.size(), false);
    for (int c = 0; c < 2; ++c) {
        rng.shuffle(by_label[c]);
        for (std::size_t j = 0; j < n_train[c]; ++j) in_train[by_label[c][j]] = true;
    }
    HoldoutSplit split;
    split.train.provenance = split.test.provenance = corpus.provenance;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        (in_train[i] ? split.train : split.test).instances.push_back(corpus.instances[i]);
    return split;
}

/// Instances selected by position, in the given order.
inline Corpus subset(const Corpus& corpus, std::span<const std::size_t> positions) {
    Corpus out;
    out.provenance = corpus.provenance;
    out.instances.reserve(positions.size());
    for (auto p : positions) out.instances.push_back(corpus.instances.at(p));
    return out;
}

}  // namespace gasa
