#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dictscan {

/// Punctuation stripped as for dictionary entries, NFC, split on whitespace.
std::vector<std::string> evaluation_tokens(std::string_view text);

struct MatchCount {
    std::uint64_t correct = 0;
    std::uint64_t hypothesis_tokens = 0;
};

/// Positional comparison against the truth tokens.
MatchCount count_matches(const std::vector<std::string>& hypothesis,
                         const std::vector<std::string>& truth);

/// correct/total rounded half-up to 4 decimals, computed on integers.
std::string format_ratio(std::uint64_t correct, std::uint64_t total);

enum class EvalMode { before, after };

struct EvalReport {
    std::uint64_t total_words = 0;
    std::optional<std::uint64_t> correct_before;
    std::optional<std::uint64_t> correct_after;
    std::vector<std::string> warnings;

    std::optional<std::string> accuracy_before() const;
    std::optional<std::string> accuracy_after() const;

    std::string to_text() const;
    nlohmann::ordered_json to_json() const;
};

/// Scores one hypothesis against the truth and files it under mode.
/// Throws EmptyGroundTruth when the truth has no tokens.
EvalReport evaluate_texts(std::string_view hypothesis, std::string_view truth, EvalMode mode);

/// Scores before and after hypotheses against the same truth.
EvalReport evaluate_texts(std::string_view before, std::string_view after, std::string_view truth);

EvalReport run_evaluate(const std::filesystem::path& hypothesis, const std::filesystem::path& truth,
                        EvalMode mode);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dictscan
