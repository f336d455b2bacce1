#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "gasa/corpus.hpp"

using namespace gasa;
using Words = std::vector<std::string>;

namespace {

Corpus make_corpus(std::vector<std::pair<Words, Label>> rows) {
    Corpus c;
    for (auto& [t, l] : rows) c.instances.push_back({std::move(t), l});
    return c;
}

Corpus balanced(std::size_t pos, std::size_t neg) {
    Corpus c;
    for (std::size_t i = 0; i < pos; ++i) c.instances.push_back({{"p" + std::to_string(i)}, Label::Positive});
    for (std::size_t i = 0; i < neg; ++i) c.instances.push_back({{"n" + std::to_string(i)}, Label::Negative});
    return c;
}

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("I LOVE it!") == Words{"i", "love", "it"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("don't stop") == Words{"don't", "stop"});
    CHECK(tokenize("  gta5, x-ray\tok ") == Words{"gta5", "x", "ray", "ok"});
    CHECK(tokenize("caf\xc3\xa9 au lait") == Words{"caf", "au", "lait"});
}

TEST_CASE("tokens contain only lowercase letters, digits and apostrophes") {
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        std::string text;
        const std::size_t len = rng.index(40);
        for (std::size_t i = 0; i < len; ++i) text.push_back(static_cast<char>(rng.between(1, 255)));
        for (const auto& tok : tokenize(text)) {
            REQUIRE_FALSE(tok.empty());
            for (unsigned char c : tok) REQUIRE(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\''));
        }
    }
}

TEST_CASE("load_corpus") {
    std::istringstream one("positive\tgreat phone\n");
    auto c = load_corpus(one);
    REQUIRE(c.size() == 1);
    CHECK(c.instances[0].tokens == Words{"great", "phone"});
    CHECK(c.instances[0].label == Label::Positive);

    std::istringstream empty("");
    CHECK(load_corpus(empty).empty());

    std::istringstream neutral("neutral\tmeh\n");
    try {
        load_corpus(neutral);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }

    std::istringstream no_tab("positive great\n");
    CHECK_THROWS_AS(load_corpus(no_tab), ParseError);
}

TEST_CASE("records without tokens are skipped and counted") {
    std::istringstream in("positive\t!!!\n\nnegative\tbad\r\npositive\t\n");
    CorpusLoadReport report;
    auto c = load_corpus(in, "x", &report);
    CHECK(c.size() == 1);
    CHECK(report.skipped_empty == 2);
    CHECK(report.lines_read == 3);
    CHECK(c.provenance == "x");
}

TEST_CASE("write_corpus round trip") {
    auto c = make_corpus({{{"great", "phone"}, Label::Positive}, {{"not", "good"}, Label::Negative}});
    std::stringstream buf;
    write_corpus(c, buf);
    CHECK(buf.str() == "positive\tgreat phone\nnegative\tnot good\n");
    auto back = load_corpus(buf);
    REQUIRE(back.size() == 2);
    CHECK(back.instances[1].tokens == c.instances[1].tokens);
}

TEST_CASE("build_unknown_index") {
    Dictionary s(Kind::Sentiment);
    s.add("good", 1.0);
    Dictionary a(Kind::Amplifier);
    auto idx = build_unknown_index(make_corpus({{{"good", "zorp"}, Label::Positive}}), s, a);
    CHECK(idx.words() == Words{"zorp"});
    CHECK(idx.position_of("zorp") == 0u);
    CHECK_FALSE(idx.position_of("good"));

    CHECK(build_unknown_index(make_corpus({{{"good", "good"}, Label::Positive}}), s, a).empty());

    auto abc = build_unknown_index(
        make_corpus({{{"a", "b"}, Label::Positive}, {{"b", "c"}, Label::Negative}}), Dictionary(Kind::Sentiment), a);
    CHECK(abc.words() == Words{"a", "b", "c"});

    CHECK_THROWS_AS(UnknownWordIndex(Words{"a", "a"}), ContractError);
}

TEST_CASE("unknown words never overlap the dictionaries") {
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        Dictionary s(Kind::Sentiment), a(Kind::Amplifier);
        for (int i = 0; i < 5; ++i) s.add("w" + std::to_string(rng.index(10)), 1.0);
        for (int i = 0; i < 3; ++i) {
            const std::string w = "w" + std::to_string(rng.index(10));
            if (!s.contains(w)) a.add(w, 1.5);
        }
        Corpus c;
        for (int i = 0; i < 6; ++i) {
            Instance inst;
            for (std::size_t j = rng.index(6) + 1; j > 0; --j) inst.tokens.push_back("w" + std::to_string(rng.index(14)));
            c.instances.push_back(inst);
        }
        const auto idx = build_unknown_index(c, s, a);
        std::set<std::string> seen;
        for (const auto& w : idx.words()) {
            REQUIRE_FALSE(s.contains(w));
            REQUIRE_FALSE(a.contains(w));
            REQUIRE(seen.insert(w).second);
        }
        for (const auto& inst : c.instances)
            for (const auto& t : inst.tokens) REQUIRE((s.contains(t) || a.contains(t) || idx.position_of(t)));
    }
}

TEST_CASE("word_frequencies") {
    auto f = word_frequencies(make_corpus({{{"a", "a", "b"}, Label::Positive}}));
    CHECK(f.size() == 2);
    CHECK(f["a"] == 2);
    CHECK(f["b"] == 1);
    CHECK(word_frequencies(Corpus{}).empty());
    CHECK(word_frequencies(make_corpus({{{"a"}, Label::Positive}, {{"a"}, Label::Negative}}))["a"] == 2);
}

TEST_CASE("make_folds") {
    std::vector<int> ten(10);
    std::iota(ten.begin(), ten.end(), 0);
    auto singles = make_folds(ten, 10, 4);
    REQUIRE(singles.size() == 10);
    std::set<int> all;
    for (const auto& f : singles) {
        CHECK(f.size() == 1);
        all.insert(f[0]);
    }
    CHECK(all.size() == 10);

    CHECK_THROWS_AS(make_folds(std::vector<int>(9), 10, 4), ContractError);
    CHECK_THROWS_AS(make_folds(ten, 1, 4), ContractError);

    auto three = make_folds(ten, 3, 4);
    CHECK(three[0].size() == 4);
    CHECK(three[1].size() == 3);
    CHECK(three[2].size() == 3);
}

TEST_CASE("folds partition their input and are reproducible") {
    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 2 + rng.index(9);
        const std::size_t n = k + rng.index(40);
        std::vector<std::size_t> items(n);
        for (auto& x : items) x = rng.index(15);  // duplicates allowed: multiset
        const auto seed = rng();
        const auto folds = make_folds(items, k, seed);
        REQUIRE(folds == make_folds(items, k, seed));
        std::vector<std::size_t> merged;
        std::size_t smallest = n, largest = 0;
        for (const auto& f : folds) {
            merged.insert(merged.end(), f.begin(), f.end());
            smallest = std::min(smallest, f.size());
            largest = std::max(largest, f.size());
        }
        REQUIRE(largest - smallest <= 1);
        std::sort(merged.begin(), merged.end());
        std::sort(items.begin(), items.end());
        REQUIRE(merged == items);
    }
}

TEST_CASE("split_holdout") {
    auto s = split_holdout(balanced(1000, 1000), 0.7, 42);
    CHECK(s.train.size() == 1400);
    CHECK(s.train.count(Label::Positive) == 700);
    CHECK(s.test.size() == 600);
    CHECK(s.test.count(Label::Negative) == 300);

    auto tiny = split_holdout(balanced(1, 1), 0.5, 42);
    CHECK(tiny.train.size() == 1);
    CHECK(tiny.test.size() == 1);

    CHECK_THROWS_AS(split_holdout(balanced(10, 0), 0.7, 1), ContractError);
    CHECK_THROWS_AS(split_holdout(balanced(5, 5), 1.0, 1), ContractError);
    CHECK_THROWS_AS(split_holdout(balanced(5, 5), 0.0, 1), ContractError);
}

TEST_CASE("holdout is stratified, disjoint and complete") {
    Rng rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t pos = 1 + rng.index(60), neg = 1 + rng.index(60);
        const double frac = 0.05 + 0.9 * rng.uniform01();
        const auto seed = rng();
        auto c = balanced(pos, neg);
        const auto split = split_holdout(c, frac, seed);
        REQUIRE(split.train.size() + split.test.size() == c.size());
        REQUIRE(std::abs(static_cast<double>(split.train.count(Label::Positive)) - frac * static_cast<double>(pos)) <= 1.0);
        REQUIRE(std::abs(static_cast<double>(split.train.count(Label::Negative)) - frac * static_cast<double>(neg)) <= 1.0);
        std::set<std::string> train_words;
        for (const auto& inst : split.train.instances) train_words.insert(inst.tokens[0]);
        for (const auto& inst : split.test.instances) REQUIRE_FALSE(train_words.count(inst.tokens[0]));
        REQUIRE(split.train.instances.size() == train_words.size());
    }
}

TEST_CASE("subset keeps the requested order") {
    auto c = balanced(2, 2);
    std::vector<std::size_t> pos{3, 0};
    auto s = subset(c, pos);
    REQUIRE(s.size() == 2);
    CHECK(s.instances[0].tokens[0] == "n1");
    CHECK(s.instances[1].tokens[0] == "p0");
}
