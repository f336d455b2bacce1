#include <catch_amalgamated.hpp>

#include <numeric>
#include <set>
#include <sstream>

#include "gasa/experiments.hpp"

using namespace gasa;
using Words = std::vector<std::string>;

namespace {

GAConfig quick(std::uint64_t seed = 1) {
    GAConfig c;
    c.population_size = 30;
    c.max_generations = 20;
    c.seed = seed;
    return c;
}

struct Synthetic {
    PlantedLexicon lexicon;
    Corpus corpus;
    Dictionaries dicts;
};

Synthetic synthetic(std::size_t n, std::uint64_t seed, PlantedLexiconShape shape = {}) {
    Synthetic s;
    s.lexicon = make_planted_lexicon(shape, seed);
    Rng rng(seed);
    s.corpus = generate_synthetic_corpus(s.lexicon, n, {4, 10}, Semantics::Literal, rng);
    s.dicts = Dictionaries(s.lexicon.polarity_dictionary(), seed_amplifier_dictionary());
    return s;
}

}  // namespace

TEST_CASE("frequency threshold keeps words occurring at least T times") {
    Corpus c;
    for (int i = 0; i < 10; ++i) c.instances.push_back({{"often"}, Label::Positive});
    for (int i = 0; i < 9; ++i) c.instances.push_back({{"nearly"}, Label::Negative});
    c.instances.push_back({{"once"}, Label::Negative});
    Dictionary d(Kind::Sentiment);
    for (const char* w : {"often", "nearly", "once", "absent"}) d.add(w, 1.0);
    CHECK(frequent_dictionary_words(c, d, 10) == Words{"often"});
    CHECK(frequent_dictionary_words(c, d, 0) == Words{"nearly", "often", "once"});
    CHECK(frequent_dictionary_words(c, d, 1) == Words{"nearly", "often", "once"});
    CHECK(frequent_dictionary_words(c, d, 11).empty());
}

TEST_CASE("word scoring rules") {
    CHECK(learned_as_sentiment(sentiment(0.0)));
    CHECK_FALSE(learned_as_sentiment(amplifier(1.5)));
    CHECK(polarity_recovered(sentiment(1.0), sentiment(1.0)));
    CHECK_FALSE(polarity_recovered(sentiment(0.0), sentiment(1.0)));
    CHECK_FALSE(polarity_recovered(sentiment(-1.0), sentiment(1.0)));
    CHECK(polarity_recovered(sentiment(-1.0), sentiment(-1.0)));
    CHECK_FALSE(polarity_recovered(amplifier(1.0), sentiment(1.0)));
}

TEST_CASE("word cross-validation accounting") {
    const auto s = synthetic(200, 3);
    for (auto protocol : {0, 1}) {
        const auto r = protocol == 0 ? run_sent_vs_amp_cv(s.corpus, s.dicts, 5, 5, quick(), Semantics::Literal)
                                     : run_polarity_value_cv(s.corpus, s.dicts, 5, 5, quick(), Semantics::Literal);
        REQUIRE(r.folds.size() == 5);
        std::size_t total = 0;
        double mean = 0;
        for (const auto& f : r.folds) {
            total += f.test_size;
            mean += f.accuracy;
            CHECK(f.accuracy >= 0.0);
            CHECK(f.accuracy <= 1.0);
            // the other folds seed the dictionary; the fold's own words never do
            CHECK(f.training_dictionary_size + f.test_size == r.words_considered);
            CHECK(f.training_instances == s.corpus.size());
        }
        CHECK(total == r.words_considered);
        CHECK(r.words_considered == frequent_dictionary_words(s.corpus, s.dicts.sentiment(), 5).size());
        CHECK(r.mean_accuracy == Catch::Approx(mean / 5));
        CHECK(r.frequency_threshold == 5u);
    }
}

TEST_CASE("word cross-validation errors") {
    const auto s = synthetic(100, 4);
    CHECK_THROWS_AS(run_sent_vs_amp_cv(s.corpus, s.dicts, 100000, 5, quick(), Semantics::Literal), ContractError);
    CHECK_THROWS_AS(run_sent_vs_amp_cv(s.corpus, s.dicts, 0, 1000, quick(), Semantics::Literal), ContractError);
}

TEST_CASE("holdout on a dictionary-only corpus is perfect") {
    Corpus c;
    for (int i = 0; i < 20; ++i) {
        c.instances.push_back({{"good", "good"}, Label::Positive});
        c.instances.push_back({{"not", "good"}, Label::Negative});
    }
    Dictionary s(Kind::Sentiment);
    s.add("good", 1.0);
    const Dictionaries d(s, seed_amplifier_dictionary());
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        for (auto algo : {Algorithm::Gasa, Algorithm::Cagasa}) {
            const auto r = run_holdout_accuracy(c, d, quick(seed), Semantics::Literal, algo);
            CHECK(r.mean_accuracy == 1.0);
            REQUIRE(r.confusion);
            CHECK(r.confusion->total() == 12);
            CHECK(r.folds[0].training_instances == 28);
        }
}

TEST_CASE("instance cross-validation runs both algorithms") {
    const auto s = synthetic(60, 5, {4, 4, 2, 3, 0.0});
    for (auto algo : {Algorithm::Gasa, Algorithm::Cagasa}) {
        Dictionaries seeds_only;
        const auto r = run_instance_cv(s.corpus, seeds_only, 3, quick(), Semantics::Literal, algo);
        CHECK(r.folds.size() == 3);
        CHECK(r.confusion->total() == 60);
        CHECK(r.algorithm == algo);
        CHECK(r.protocol == Protocol::GasaVsCagasa);
    }
}

TEST_CASE("synthetic corpus generation") {
    Rng rng(1);
    PlantedLexicon bad_only;
    bad_only.words.push_back({"bad", sentiment(-1.0)});
    bad_only.fillers.push_back("the");
    // the only way to score nonzero is to contain "bad": every sentence is negative
    CHECK_THROWS_AS(generate_synthetic_corpus(bad_only, 10, {2, 2}, Semantics::Literal, rng), GenerationError);

    PlantedLexicon two;
    two.words = {{"bad", sentiment(-1.0)}, {"fine", sentiment(1.0)}};
    two.fillers = {"the"};
    const auto c = generate_synthetic_corpus(two, 100, {2, 2}, Semantics::Literal, rng);
    CHECK(c.size() == 100);
    CHECK(c.count(Label::Positive) == 50);
    for (const auto& inst : c.instances) {
        if (inst.tokens == Words{"the", "bad"}) {
            CHECK(inst.label == Label::Negative);
        }
        CHECK(inst.tokens != Words{"the", "the"});
    }

    PlantedLexicon fillers_only;
    fillers_only.words = {{"meh", sentiment(0.0)}};
    fillers_only.fillers = {"the"};
    CHECK_THROWS_AS(generate_synthetic_corpus(fillers_only, 4, {1, 3}, Semantics::Literal, rng), GenerationError);

    CHECK_THROWS_AS(generate_synthetic_corpus(two, 3, {2, 2}, Semantics::Literal, rng), ContractError);
    PlantedLexicon clash;
    clash.words = {{"not", sentiment(1.0)}};
    CHECK_THROWS_AS(generate_synthetic_corpus(clash, 2, {1, 1}, Semantics::Literal, rng), ContractError);
}

TEST_CASE("synthetic labels agree with the planted truth") {
    for (auto sem : {Semantics::Literal, Semantics::Prose}) {
        const auto lex = make_planted_lexicon({}, 8);
        Rng rng(8);
        const auto c = generate_synthetic_corpus(lex, 200, {3, 9}, sem, rng);
        CHECK(c.count(Label::Negative) == 100);
        for (const auto& inst : c.instances) {
            std::vector<ClassificationValuePair> pairs;
            for (const auto& t : inst.tokens) pairs.push_back(lex.truth(t));
            const auto v = classify_score(score_pairs(pairs, sem));
            REQUIRE(v != Verdict::Tie);
            REQUIRE(matches(v, inst.label));
            REQUIRE(inst.tokens.size() >= 3);
            REQUIRE(inst.tokens.size() <= 9);
        }
    }
}

TEST_CASE("planted lexicon shape") {
    const auto lex = make_planted_lexicon({2, 3, 2, 4, 1.0}, 1);
    CHECK(lex.words.size() == 7);
    CHECK(lex.fillers.size() == 4);
    CHECK(lex.weights.size() == 11);
    CHECK(lex.truth("pos01") == sentiment(1.0));
    CHECK(lex.truth("neg02") == sentiment(-1.0));
    CHECK(lex.truth("amp00") == amplifier(1.5));
    CHECK(lex.truth("amp01") == amplifier(0.5));
    CHECK(lex.truth("fill03") == sentiment(0.0));
    CHECK(lex.polarity_dictionary().size() == 5);
    std::vector<double> w = lex.weights;
    std::sort(w.begin(), w.end());
    CHECK(w.back() == 1.0);
    CHECK(w.front() == Catch::Approx(1.0 / 11));
}

TEST_CASE("reports") {
    const auto s = synthetic(100, 9);
    const auto r = run_sent_vs_amp_cv(s.corpus, s.dicts, 0, 4, quick(), Semantics::Prose);
    std::ostringstream a, b;
    write_report_tsv(r, a);
    write_report_tsv(run_sent_vs_amp_cv(s.corpus, s.dicts, 0, 4, quick(), Semantics::Prose), b);
    CHECK(a.str() == b.str());
    const auto text = a.str();
    CHECK(text.rfind("protocol\tsent-vs-amp\n", 0) == 0);
    CHECK(text.find("semantics\tprose\n") != std::string::npos);
    CHECK(text.find("fold_4_accuracy\t") != std::string::npos);
    CHECK(text.find("fold_5_accuracy") == std::string::npos);
    CHECK(text.find("words_considered\t") != std::string::npos);

    std::ostringstream table;
    write_report_table(r, table);
    CHECK(table.str().find("mean") != std::string::npos);
}
