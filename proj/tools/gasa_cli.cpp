// gasa: train, apply and evaluate evolved sentiment lexicons.
//
// Exit status: 0 success, 1 usage or validation error, 2 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gasa/all.hpp"

namespace {

using namespace gasa;

struct GlobalOptions {
    GAConfig ga;
    std::string semantics = "literal";
};

struct DataOptions {
    std::vector<std::string> corpora;
    std::string positive_words;
    std::string negative_words;
    std::string sentiment_dict;
    std::string amplifier_dict;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

/// Writes to a temporary sibling and renames, so a failed run leaves no
/// half-written file behind.
template <class Fn>
void write_file(const std::string& path, Fn&& fill) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        fill(out);
        out.flush();
        if (!out) throw IoError("write to '" + path + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("cannot replace '" + path + "'");
}

Semantics semantics_of(const GlobalOptions& g) {
    auto s = parse_semantics(g.semantics);
    if (!s) throw UsageError("--semantics must be literal or prose");
    return *s;
}

Corpus load_corpora(const DataOptions& d) {
    Corpus all;
    for (const auto& path : d.corpora) {
        auto in = open_in(path);
        CorpusLoadReport report;
        try {
            all.append(load_corpus(in, path, &report));
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what(), 0);
        }
        if (report.skipped_empty)
            std::cerr << "warning: " << path << ": skipped " << report.skipped_empty << " records without tokens\n";
    }
    return all;
}

Dictionaries load_dictionaries(const DataOptions& d) {
    Dictionary sent(Kind::Sentiment);
    if (!d.sentiment_dict.empty()) {
        auto in = open_in(d.sentiment_dict);
        sent = load_sentiment_dictionary(in);
    } else if (!d.positive_words.empty() || !d.negative_words.empty()) {
        if (d.positive_words.empty() || d.negative_words.empty())
            throw UsageError("--positive-words and --negative-words must be given together");
        auto pos = open_in(d.positive_words);
        auto neg = open_in(d.negative_words);
        sent = load_sentiment_dictionary(pos, neg);
    }
    Dictionary amp = seed_amplifier_dictionary();
    if (!d.amplifier_dict.empty()) {
        auto in = open_in(d.amplifier_dict);
        const auto entries = read_lexicon(in);
        amp = dictionary_from_lexicon(entries, Kind::Amplifier);
    }
    return Dictionaries(std::move(sent), std::move(amp));
}

void add_data_options(CLI::App* cmd, DataOptions& d, bool corpus_required = true) {
    auto* corpus = cmd->add_option("--corpus", d.corpora, "Labeled corpus (label<TAB>text); repeat to concatenate")
                       ->check(CLI::ExistingFile);
    if (corpus_required) corpus->required();
    auto* single = cmd->add_option("--sentiment-dict", d.sentiment_dict, "Sentiment dictionary, word<TAB>positive|negative")
                       ->check(CLI::ExistingFile);
    auto* pos = cmd->add_option("--positive-words", d.positive_words, "Positive word list, one per line")
                    ->check(CLI::ExistingFile);
    auto* neg = cmd->add_option("--negative-words", d.negative_words, "Negative word list, one per line")
                    ->check(CLI::ExistingFile);
    single->excludes(pos)->excludes(neg);
    cmd->add_option("--amplifier-dict", d.amplifier_dict,
                    "Amplifier dictionary in lexicon format (default: not, never = -1.0)")
        ->check(CLI::ExistingFile);
}

void print_trajectory(const RunStats& stats, std::size_t instances, std::ostream& out) {
    const auto& best = stats.best_fitness_per_generation;
    const std::size_t step = std::max<std::size_t>(1, stats.generations_executed / 10);
    out << "generation  best fitness\n";
    for (std::size_t g = 0; g < best.size(); ++g)
        if (g % step == 0 || g + 1 == best.size()) out << std::setw(10) << g << std::setw(14) << best[g] << '\n';
    const std::size_t final_best = best.empty() ? 0 : best.back();
    out << "best fitness " << final_best << " / " << instances;
    if (instances) out << " (" << detail::fixed(100.0 * static_cast<double>(final_best) / static_cast<double>(instances), 2) << "%)";
    out << (stats.terminated_early ? ", stopped early" : "") << '\n';
}

void emit_report(const ExperimentReport& report, const std::string& report_out) {
    write_report_table(report, std::cout);
    if (!report_out.empty()) write_file(report_out, [&](std::ostream& o) { write_report_tsv(report, o); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolve sentiment lexicons with GASA / CA-GASA and classify text polarity", "gasa"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file of global options (flags override it)");

    GlobalOptions g;
    app.add_option("--seed", g.ga.seed, "Root random seed")->capture_default_str();
    app.add_option("--semantics", g.semantics, "Sentence evaluation: literal or prose")
        ->check(CLI::IsMember({"literal", "prose"}))
        ->capture_default_str();
    app.add_option("--pop", g.ga.population_size, "Population size")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tournament", g.ga.tournament_size, "Tournament size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--generations", g.ga.max_generations, "Maximum generations")->capture_default_str();
    app.add_option("--crossover-rate", g.ga.crossover_rate, "Crossover probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--mutation-rate", g.ga.mutation_rate, "Mutation probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    // train
    DataOptions train_data;
    std::string train_algo = "gasa", model_out, lexicon_out;
    auto* train = app.add_subcommand("train", "Evolve a model on a labeled corpus")->fallthrough();
    add_data_options(train, train_data);
    train->add_option("--algo", train_algo, "gasa or cagasa")->check(CLI::IsMember({"gasa", "cagasa"}));
    train->add_option("--model-out", model_out, "Model file to write");
    train->add_option("--export-lexicon", lexicon_out, "Learned lexicon (word<TAB>kind<TAB>value) to write");

    // predict
    std::string predict_model, predict_text, predict_input, predict_output, tie_label = "negative";
    bool show_ties = false;
    auto* predict = app.add_subcommand("predict", "Label text with a trained model")->fallthrough();
    predict->add_option("--model", predict_model, "Model file")->required()->check(CLI::ExistingFile);
    auto* text_opt = predict->add_option("--text", predict_text, "A single text to label");
    auto* input_opt = predict->add_option("--input", predict_input, "File of texts, one per line")
                          ->check(CLI::ExistingFile);
    text_opt->excludes(input_opt);
    predict->add_option("--output", predict_output, "Write labels here instead of stdout");
    predict->add_option("--tie", tie_label, "Label printed for a zero score")
        ->check(CLI::IsMember({"positive", "negative"}))
        ->capture_default_str();
    predict->add_flag("--show-ties", show_ties, "Append a 'tie' column to zero-score lines");

    // holdout
    DataOptions holdout_data;
    std::string holdout_algo = "gasa", holdout_report;
    double train_fraction = 0.7;
    auto* holdout = app.add_subcommand("holdout", "Stratified holdout accuracy")->fallthrough();
    add_data_options(holdout, holdout_data);
    holdout->add_option("--algo", holdout_algo, "gasa or cagasa")->check(CLI::IsMember({"gasa", "cagasa"}));
    holdout->add_option("--train-fraction", train_fraction, "Training share")->capture_default_str();
    holdout->add_option("--report-out", holdout_report, "field<TAB>value report file");

    // cv-accuracy
    DataOptions cva_data;
    std::string cva_algo = "gasa", cva_report;
    std::size_t cva_folds = 10;
    auto* cv_accuracy = app.add_subcommand("cv-accuracy", "k-fold cross-validated accuracy over instances")->fallthrough();
    add_data_options(cv_accuracy, cva_data);
    cv_accuracy->add_option("--algo", cva_algo, "gasa or cagasa")->check(CLI::IsMember({"gasa", "cagasa"}));
    cv_accuracy->add_option("--folds", cva_folds, "Number of folds")->capture_default_str();
    cv_accuracy->add_option("--report-out", cva_report, "field<TAB>value report file");

    // cv-sentamp / cv-polarity
    DataOptions word_data;
    std::size_t threshold = 0, word_folds = 10;
    std::string word_report;
    auto add_word_cv = [&](const char* name, const char* help) {
        auto* cmd = app.add_subcommand(name, help)->fallthrough();
        add_data_options(cmd, word_data);
        cmd->add_option("--threshold", threshold, "Keep dictionary words occurring at least this often (0 = once)")
            ->capture_default_str();
        cmd->add_option("--folds", word_folds, "Number of folds")->capture_default_str();
        cmd->add_option("--report-out", word_report, "field<TAB>value report file");
        return cmd;
    };
    auto* cv_sentamp = add_word_cv("cv-sentamp", "Word-level CV: are held-out dictionary words learned as sentiment?");
    auto* cv_polarity = add_word_cv("cv-polarity", "Word-level CV: is the held-out words' polarity recovered?");

    // synth
    std::size_t synth_instances = 500, min_len = 4, max_len = 10;
    PlantedLexiconShape shape;
    std::string synth_out, synth_lexicon_out, synth_dict_out;
    auto* synth = app.add_subcommand("synth", "Generate a corpus from a planted lexicon")->fallthrough();
    synth->add_option("--instances", synth_instances, "Number of sentences (even)")->capture_default_str();
    synth->add_option("--min-length", min_len, "Shortest sentence")->capture_default_str();
    synth->add_option("--max-length", max_len, "Longest sentence")->capture_default_str();
    synth->add_option("--positive", shape.positive, "Planted positive words")->capture_default_str();
    synth->add_option("--negative", shape.negative, "Planted negative words")->capture_default_str();
    synth->add_option("--amplifiers", shape.amplifiers, "Planted amplifier words")->capture_default_str();
    synth->add_option("--fillers", shape.fillers, "Neutral filler words")->capture_default_str();
    synth->add_option("--zipf", shape.zipf_exponent, "Zipf exponent for word frequencies (0 = uniform)")
        ->capture_default_str();
    synth->add_option("--out", synth_out, "Corpus file to write")->required();
    synth->add_option("--lexicon-out", synth_lexicon_out, "Planted ground truth in lexicon format");
    synth->add_option("--dict-out", synth_dict_out, "Planted polarities as word<TAB>positive|negative");

    // export-lexicon
    std::string export_model, export_out;
    auto* export_cmd = app.add_subcommand("export-lexicon", "Write a model's learned lexicon")->fallthrough();
    export_cmd->add_option("--model", export_model, "Model file")->required()->check(CLI::ExistingFile);
    export_cmd->add_option("--out", export_out, "Lexicon file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        g.ga.validate();
        const Semantics semantics = semantics_of(g);

        if (train->parsed()) {
            const auto corpus = load_corpora(train_data);
            const auto dicts = load_dictionaries(train_data);
            const auto algo = *parse_algorithm(train_algo);
            const auto model = train_model(corpus, dicts, g.ga, semantics, algo);
            std::cout << algorithm_name(algo) << ": " << corpus.size() << " instances, " << model.index.size()
                      << " unknown words, " << semantics_name(semantics) << " semantics\n";
            print_trajectory(model.stats, model.training_instances, std::cout);
            if (!model_out.empty()) write_file(model_out, [&](std::ostream& o) { write_model(model, g.ga, o); });
            if (!lexicon_out.empty()) write_file(lexicon_out, [&](std::ostream& o) { export_model_lexicon(model, o); });
        } else if (predict->parsed()) {
            auto in = open_in(predict_model);
            const auto loaded = read_model(in);
            const auto& model = loaded.model;
            std::vector<std::string> texts;
            if (!predict_input.empty()) {
                auto src = open_in(predict_input);
                std::string line;
                while (read_line(src, line)) texts.push_back(line);
            } else if (text_opt->count()) {
                texts.push_back(predict_text);
            } else {
                std::string line;
                while (read_line(std::cin, line)) texts.push_back(line);
            }
            std::size_t oov = 0;
            std::ostringstream labels;
            for (const auto& text : texts) {
                const auto tokens = tokenize(text);
                for (const auto& t : tokens) oov += !model.dicts.contains(t) && !model.index.position_of(t);
                const Verdict v = model.predict(tokens);
                labels << (v == Verdict::Tie ? tie_label : std::string(verdict_name(v)));
                if (show_ties && v == Verdict::Tie) labels << "\ttie";
                labels << '\n';
            }
            if (oov) std::cerr << "warning: " << oov << " out-of-vocabulary tokens scored as neutral\n";
            if (predict_output.empty())
                std::cout << labels.str();
            else
                write_file(predict_output, [&](std::ostream& o) { o << labels.str(); });
        } else if (holdout->parsed()) {
            const auto corpus = load_corpora(holdout_data);
            const auto dicts = load_dictionaries(holdout_data);
            const auto report = run_holdout_accuracy(corpus, dicts, g.ga, semantics, *parse_algorithm(holdout_algo),
                                                     train_fraction);
            emit_report(report, holdout_report);
        } else if (cv_accuracy->parsed()) {
            const auto corpus = load_corpora(cva_data);
            const auto dicts = load_dictionaries(cva_data);
            emit_report(run_instance_cv(corpus, dicts, cva_folds, g.ga, semantics, *parse_algorithm(cva_algo)),
                        cva_report);
        } else if (cv_sentamp->parsed() || cv_polarity->parsed()) {
            const auto corpus = load_corpora(word_data);
            const auto dicts = load_dictionaries(word_data);
            const auto report = cv_sentamp->parsed()
                                    ? run_sent_vs_amp_cv(corpus, dicts, threshold, word_folds, g.ga, semantics)
                                    : run_polarity_value_cv(corpus, dicts, threshold, word_folds, g.ga, semantics);
            emit_report(report, word_report);
        } else if (synth->parsed()) {
            const auto lexicon = make_planted_lexicon(shape, g.ga.seed);
            Rng rng(g.ga.seed);
            const auto corpus = generate_synthetic_corpus(lexicon, synth_instances, {min_len, max_len}, semantics, rng);
            write_file(synth_out, [&](std::ostream& o) { write_corpus(corpus, o); });
            if (!synth_lexicon_out.empty())
                write_file(synth_lexicon_out, [&](std::ostream& o) { write_planted_lexicon(lexicon, o); });
            if (!synth_dict_out.empty())
                write_file(synth_dict_out, [&](std::ostream& o) {
                    const auto polarity = lexicon.polarity_dictionary();
                    for (const auto& [w, p] : polarity.entries())
                        o << w << '\t' << (p.value > 0 ? "positive" : "negative") << '\n';
                });
            std::cout << "wrote " << corpus.size() << " sentences (" << corpus.count(Label::Positive) << " positive, "
                      << corpus.count(Label::Negative) << " negative) to " << synth_out << '\n';
        } else if (export_cmd->parsed()) {
            auto in = open_in(export_model);
            const auto loaded = read_model(in);
            if (export_out.empty())
                export_model_lexicon(loaded.model, std::cout);
            else
                write_file(export_out, [&](std::ostream& o) { export_model_lexicon(loaded.model, o); });
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
