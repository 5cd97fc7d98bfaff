#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dictscan::text {

/// Canonical composed form (NFC).
std::string canonicalize(std::string_view utf8);

/// Splits into graphemes: a base code point followed by its combining marks.
/// The input is taken as is; canonicalize first for stable results.
std::vector<std::string> graphemes(std::string_view utf8);

/// 1 + the number of combining marks in the grapheme's decomposed form,
/// so 'c' weighs 1, 'č' 2 and 'ê̆' 3.
int default_weight(std::string_view grapheme);

bool is_whitespace(char32_t c);

/// Whitespace-delimited tokens (Unicode White_Space).
std::vector<std::string> split_whitespace(std::string_view utf8);

/// Alternating runs of whitespace and non-whitespace; concatenating the runs
/// reproduces the input.
struct Run {
    std::string text;
    bool whitespace = false;
};
std::vector<Run> split_runs(std::string_view utf8);

/// Grapheme → weight, falling back to default_weight().
class WeightTable {
public:
    WeightTable() = default;
    explicit WeightTable(std::map<std::string, int> overrides);

    int weight(std::string_view grapheme) const;
    const std::map<std::string, int>& overrides() const noexcept { return overrides_; }

    /// "grapheme<TAB>weight" per line; blank lines and '#' comments skipped.
    static WeightTable load(const std::filesystem::path& path);

    bool operator==(const WeightTable&) const = default;

private:
    std::map<std::string, int> overrides_;
};

/// A word split into graphemes with its weighted length.
struct Atomization {
    std::vector<std::string> graphemes;
    int weighted_length = 0;
};

Atomization atomize(std::string_view word, const WeightTable& weights = {});

std::string join(const std::vector<std::string>& parts, std::size_t first, std::size_t count);
std::string join(const std::vector<std::string>& parts);

}  // namespace dictscan::text
