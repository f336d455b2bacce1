#include <catch_amalgamated.hpp>

#include <sstream>

#include "gasa/model.hpp"

using namespace gasa;

namespace {

Corpus small_corpus() {
    const auto lex = make_planted_lexicon({3, 3, 2, 3, 0.0}, 2);
    Rng rng(2);
    return generate_synthetic_corpus(lex, 40, {3, 7}, Semantics::Literal, rng);
}

Dictionaries dicts() {
    Dictionary s(Kind::Sentiment);
    s.add("pos00", 1.0);
    s.add("neg00", -1.0);
    return Dictionaries(std::move(s), seed_amplifier_dictionary());
}

GAConfig quick() {
    GAConfig c;
    c.population_size = 20;
    c.max_generations = 10;
    c.seed = 77;
    return c;
}

}  // namespace

TEST_CASE("models survive a write/read round trip") {
    const auto corpus = small_corpus();
    for (auto algo : {Algorithm::Gasa, Algorithm::Cagasa})
        for (auto sem : {Semantics::Literal, Semantics::Prose}) {
            const auto model = train_model(corpus, dicts(), quick(), sem, algo);
            std::stringstream buf;
            write_model(model, quick(), buf);
            const std::string first = buf.str();
            const auto loaded = read_model(buf);

            CHECK(loaded.model.algorithm == algo);
            CHECK(loaded.model.semantics == sem);
            CHECK(loaded.model.index.words() == model.index.words());
            CHECK(loaded.model.best_fitness == model.best_fitness);
            CHECK(loaded.config.seed == 77);
            CHECK(loaded.config.population_size == 20);
            if (algo == Algorithm::Gasa)
                CHECK(*loaded.model.gasa == *model.gasa);
            else
                CHECK(*loaded.model.cagasa == *model.cagasa);
            for (const auto& inst : corpus.instances) REQUIRE(loaded.model.predict(inst.tokens) == model.predict(inst.tokens));

            std::ostringstream again;
            write_model(loaded.model, loaded.config, again);
            CHECK(again.str() == first);
        }
}

TEST_CASE("context gene records") {
    CagasaGene g;
    g.word = "sunk";
    g.context_free_pair = sentiment(0.0);
    g.rule.next_size = 2;
    g.rule.previous_size = 1;
    g.rule.list_next = {"book", "pen"};
    g.rule.number_ahead = 1;
    g.rule.number_behind = 3;
    g.rule.context_pair = amplifier(1.5);
    std::ostringstream out;
    write_cagasa_record(out, g);
    CHECK(out.str() == "sunk\tsentiment\t0.0\t2\t1\tbook,pen\t-\t1\t3\tamplifier\t1.5\n");

    const std::string line = out.str().substr(0, out.str().size() - 1);
    const auto fields = split_tabs(line);
    CHECK(parse_cagasa_record(fields, 1) == g);

    const auto short_fields = split_tabs("sunk\tsentiment\t0.0\t2");
    CHECK_THROWS_AS(parse_cagasa_record(short_fields, 4), ParseError);
    const auto over_cap = split_tabs("sunk\tsentiment\t0.0\t5\t1\t-\t-\t1\t1\tsentiment\t1.0");
    CHECK_THROWS_AS(parse_cagasa_record(over_cap, 4), ParseError);
}

TEST_CASE("malformed model files") {
    std::istringstream not_model("hello\n");
    CHECK_THROWS_AS(read_model(not_model), ParseError);

    std::istringstream no_algo("#gasa-model\t1\n#section\tgenes\n");
    CHECK_THROWS_AS(read_model(no_algo), ParseError);

    std::istringstream orphan("#gasa-model\t1\n#algo\tgasa\nword\tsentiment\t1.0\n");
    try {
        read_model(orphan);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream overlap(
        "#gasa-model\t1\n#algo\tgasa\n#section\tsentiment-dictionary\ngood\tsentiment\t1.0\n"
        "#section\tgenes\ngood\tsentiment\t-1.0\n");
    CHECK_THROWS_AS(read_model(overlap), ConflictError);

    std::istringstream wrong_kind("#gasa-model\t1\n#algo\tgasa\n#section\tamplifier-dictionary\nvery\tsentiment\t1.0\n");
    CHECK_THROWS_AS(read_model(wrong_kind), ParseError);
}

TEST_CASE("lexicon export from a model") {
    const auto model = train_model(small_corpus(), dicts(), quick(), Semantics::Literal, Algorithm::Cagasa);
    std::stringstream out;
    export_model_lexicon(model, out);
    const auto entries = read_lexicon(out);
    REQUIRE(entries.size() == model.index.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        CHECK(entries[i].word == model.index.word(i));
        CHECK(entries[i].pair == model.cagasa->genes[i].context_free_pair);
    }
}
