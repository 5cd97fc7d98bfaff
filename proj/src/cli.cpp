#include "dictscan/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "dictscan/config.hpp"
#include "dictscan/error.hpp"
#include "dictscan/evaluate.hpp"
#include "dictscan/pipeline.hpp"

namespace dictscan {

namespace {

struct GlobalOptions {
    std::string config_file;
    std::vector<std::string> settings;
};

PipelineConfig resolve_config(const GlobalOptions& g) {
    PipelineConfig cfg;
    if (!g.config_file.empty())
        for (const auto& [key, value] : read_config_file(g.config_file)) cfg.set(key, value);
    for (const std::string& s : g.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

struct CorrectionFiles {
    std::string lexicon;
    std::string alphabet;
    std::string general_map;
};

// Resource problems are configuration errors: nothing has run yet.
std::unique_ptr<Corrector> load_corrector(const CorrectionFiles& files, const PipelineConfig& cfg) {
    if (files.lexicon.empty()) throw ConfigError("correction needs --lexicon");
    if (files.alphabet.empty()) throw ConfigError("correction needs --alphabet");
    try {
        GeneralCharMap map = GeneralCharMap::builtin();
        if (!files.general_map.empty()) map = map.merged(GeneralCharMap::load(files.general_map));
        return std::make_unique<Corrector>(load_lexicon(std::filesystem::path(files.lexicon)),
                                           Alphabet::load(files.alphabet), std::move(map),
                                           cfg.correction);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

std::unique_ptr<OcrBackend> make_backend(const PipelineConfig& cfg) {
    if (cfg.ocr_backend == OcrBackendKind::mock) {
        try {
            return std::make_unique<MockOcrBackend>(MockOcrBackend::load(cfg.ocr_mock_fixture));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("ocr.mock_fixture: ") + e.what());
        }
    }
    return std::make_unique<ExternalOcrBackend>();
}

void add_correction_options(CLI::App* cmd, CorrectionFiles& files) {
    cmd->add_option("--lexicon", files.lexicon, "Lexicon JSON written by build-lexicon");
    cmd->add_option("--alphabet", files.alphabet, "Alphabet file, one grapheme per line");
    cmd->add_option("--general-map", files.general_map,
                    "Extra source<TAB>target replacements on top of the built-in map");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Table-aware OCR extraction and dictionary-based correction for scanned dictionary pages",
                 "dictscan"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--config", global.config_file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--set", global.settings, "Override one configuration key (key=value)")
        ->type_name("KEY=VALUE");

    // extract
    auto* extract = app.add_subcommand("extract", "Extract table cells and text blocks from page images");
    CorrectionFiles extract_files;
    bool no_correct = false;
    std::string out_dir = "out";
    std::vector<std::string> images;
    add_correction_options(extract, extract_files);
    extract->add_flag("--no-correct", no_correct, "Skip post-OCR correction");
    extract->add_option("--out", out_dir, "Output directory")->capture_default_str();
    extract->add_option("images", images, "Page images (PNG or TIFF)")->required();

    // build-lexicon
    auto* build = app.add_subcommand("build-lexicon", "Build the n-gram lexicon from vocabulary files");
    std::string lexicon_out;
    std::string weights_file;
    std::string length_key;
    std::vector<std::string> vocab;
    build->add_option("--out", lexicon_out, "Lexicon JSON to write")->required();
    build->add_option("--weights", weights_file, "Grapheme weight overrides, grapheme<TAB>weight");
    build->add_option("--length-key", length_key, "graphemes or weighted (default: lexicon.length_key)");
    build->add_option("vocab", vocab, "Vocabulary files, one entry per line")->required();

    // correct
    auto* correct = app.add_subcommand("correct", "Correct text line by line");
    CorrectionFiles correct_files;
    std::string correct_input;
    add_correction_options(correct, correct_files);
    correct->add_option("file", correct_input, "Input text (default: standard input)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Word accuracy against ground truth");
    std::string truth_file;
    std::string hyp_file;
    std::string after_file;
    std::string mode = "before";
    bool as_json = false;
    evaluate->add_option("--truth", truth_file, "Ground-truth text")->required();
    evaluate->add_option("--hyp", hyp_file, "Hypothesis text")->required();
    evaluate->add_option("--mode", mode, "Which column --hyp fills")
        ->check(CLI::IsMember({"before", "after"}))
        ->capture_default_str();
    evaluate->add_option("--after", after_file,
                         "Corrected hypothesis; --hyp is then scored as the before column");
    evaluate->add_flag("--json", as_json, "Print the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const PipelineConfig cfg = resolve_config(global);

        if (*extract) {
            std::unique_ptr<Corrector> corrector;
            if (!no_correct && cfg.correct) corrector = load_corrector(extract_files, cfg);
            const auto backend = make_backend(cfg);
            std::vector<std::filesystem::path> paths(images.begin(), images.end());
            const auto results = run_extract(paths, cfg, *backend, corrector.get());
            const int failed = write_extract_outputs(results, out_dir);
            for (const auto& r : results)
                if (!r.document) err << r.source << ": " << r.error << '\n';
            out << "pages: " << results.size() - failed << " ok, " << failed << " failed\n";
            return failed > 0 ? kExitPageFailures : kExitOk;
        }

        if (*build) {
            const text::WeightTable weights =
                weights_file.empty() ? text::WeightTable{} : text::WeightTable::load(weights_file);
            LengthKey key = cfg.length_key;
            if (!length_key.empty()) {
                try {
                    key = parse_length_key(length_key);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what());
                }
            }
            std::vector<std::filesystem::path> paths(vocab.begin(), vocab.end());
            const auto summary = run_build_lexicon(paths, lexicon_out, weights, key);
            if (summary.empty_vocabulary) err << "warning: EmptyVocabulary: no validated words\n";
            out << "lines=" << summary.lines << " words=" << summary.words
                << " clusters=" << summary.clusters << '\n';
            return kExitOk;
        }

        if (*correct) {
            const auto corrector = load_corrector(correct_files, cfg);
            if (correct_input.empty()) {
                run_correct(in, out, *corrector);
            } else {
                std::ifstream file(correct_input, std::ios::binary);
                if (!file) throw InputError("cannot read " + correct_input);
                run_correct(file, out, *corrector);
            }
            return kExitOk;
        }

        if (*evaluate) {
            EvalReport report;
            if (!after_file.empty()) {
                report = evaluate_texts(read_text_file(hyp_file), read_text_file(after_file),
                                        read_text_file(truth_file));
            } else {
                report = run_evaluate(hyp_file, truth_file,
                                      mode == "after" ? EvalMode::after : EvalMode::before);
            }
            if (as_json)
                out << report.to_json().dump(2) << '\n';
            else
                out << report.to_text();
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "ConfigError: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << e.kind() << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    std::vector<const char*> argv{"dictscan"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
}

}  // namespace dictscan
