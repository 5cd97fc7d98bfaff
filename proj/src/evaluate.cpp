#include "dictscan/evaluate.hpp"

#include <fstream>
#include <sstream>

#include "dictscan/error.hpp"
#include "dictscan/lexicon.hpp"
#include "dictscan/text.hpp"

namespace dictscan {

namespace {

constexpr std::string_view kTokenization =
    "tokens: punctuation , _ - \" “ ” ( ) ; : . stripped, NFC, whitespace split; "
    "alignment: positional";

void score(EvalReport& report, std::string_view hypothesis, const std::vector<std::string>& truth,
           EvalMode mode) {
    const auto hyp = evaluation_tokens(hypothesis);
    const MatchCount m = count_matches(hyp, truth);
    const char* label = mode == EvalMode::before ? "before" : "after";
    if (m.hypothesis_tokens != truth.size()) {
        report.warnings.push_back("LengthMismatch (" + std::string(label) + "): hypothesis has " +
                                  std::to_string(m.hypothesis_tokens) + " tokens, truth has " +
                                  std::to_string(truth.size()));
    }
    (mode == EvalMode::before ? report.correct_before : report.correct_after) = m.correct;
}

std::vector<std::string> truth_tokens(std::string_view truth) {
    auto tokens = evaluation_tokens(truth);
    if (tokens.empty()) throw EmptyGroundTruth("ground truth has no tokens");
    return tokens;
}

}  // namespace

std::vector<std::string> evaluation_tokens(std::string_view text) {
    return text::split_whitespace(strip_punctuation(text));
}

MatchCount count_matches(const std::vector<std::string>& hypothesis,
                         const std::vector<std::string>& truth) {
    MatchCount m;
    m.hypothesis_tokens = hypothesis.size();
    const std::size_t n = std::min(hypothesis.size(), truth.size());
    for (std::size_t i = 0; i < n; ++i)
        if (hypothesis[i] == truth[i]) ++m.correct;
    return m;
}

std::string format_ratio(std::uint64_t correct, std::uint64_t total) {
    if (total == 0) throw std::invalid_argument("ratio with zero total");
    const std::uint64_t scaled = (correct * 20000 + total) / (2 * total);
    std::string frac = std::to_string(scaled % 10000);
    frac.insert(0, 4 - frac.size(), '0');
    return std::to_string(scaled / 10000) + "." + frac;
}

std::optional<std::string> EvalReport::accuracy_before() const {
    if (!correct_before) return std::nullopt;
    return format_ratio(*correct_before, total_words);
}

std::optional<std::string> EvalReport::accuracy_after() const {
    if (!correct_after) return std::nullopt;
    return format_ratio(*correct_after, total_words);
}

std::string EvalReport::to_text() const {
    std::ostringstream out;
    out << "# " << kTokenization << '\n';
    out << "total_words: " << total_words << '\n';
    if (correct_before) {
        out << "correct_before: " << *correct_before << '\n';
        out << "accuracy_before: " << *accuracy_before() << '\n';
    }
    if (correct_after) {
        out << "correct_after: " << *correct_after << '\n';
        out << "accuracy_after: " << *accuracy_after() << '\n';
    }
    for (const auto& w : warnings) out << "warning: " << w << '\n';
    return out.str();
}

nlohmann::ordered_json EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["tokenization"] = kTokenization;
    j["total_words"] = total_words;
    if (correct_before) {
        j["correct_before"] = *correct_before;
        j["accuracy_before"] = std::stod(*accuracy_before());
    }
    if (correct_after) {
        j["correct_after"] = *correct_after;
        j["accuracy_after"] = std::stod(*accuracy_after());
    }
    j["warnings"] = warnings;
    return j;
}

EvalReport evaluate_texts(std::string_view hypothesis, std::string_view truth, EvalMode mode) {
    const auto t = truth_tokens(truth);
    EvalReport report;
    report.total_words = t.size();
    score(report, hypothesis, t, mode);
    return report;
}

EvalReport evaluate_texts(std::string_view before, std::string_view after, std::string_view truth) {
    const auto t = truth_tokens(truth);
    EvalReport report;
    report.total_words = t.size();
    score(report, before, t, EvalMode::before);
    score(report, after, t, EvalMode::after);
    return report;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EvalReport run_evaluate(const std::filesystem::path& hypothesis, const std::filesystem::path& truth,
                        EvalMode mode) {
    return evaluate_texts(read_text_file(hypothesis), read_text_file(truth), mode);
}

}  // namespace dictscan
