#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dictscan/text.hpp"

namespace dictscan {

/// Validated single words, in ingestion order.
using VocabStack = std::vector<std::string>;

/// What the dictionary's word-length key counts.
enum class LengthKey { graphemes, weighted };

std::string_view to_string(LengthKey key);
LengthKey parse_length_key(std::string_view s);

/// Replaces , _ - " “ ” ( ) ; : . with spaces, splits on whitespace and drops
/// single-grapheme tokens of weight 1. Tokens come out in NFC.
VocabStack normalize_entry(std::string_view raw, const text::WeightTable& weights = {});

/// Punctuation stripping and NFC without the single-character filter.
std::string strip_punctuation(std::string_view raw);

/// n-gram frequency dictionary: cluster of 2-4 graphemes → word length → count.
class Lexicon {
public:
    using LengthCounts = std::map<int, std::uint64_t>;

    static constexpr int kMinCluster = 2;
    static constexpr int kMaxCluster = 4;

    explicit Lexicon(text::WeightTable weights = {}, LengthKey key = LengthKey::graphemes);

    static Lexicon build(const VocabStack& stack, text::WeightTable weights = {},
                         LengthKey key = LengthKey::graphemes);

    /// Counts every 2-, 3- and 4-grapheme window of the word under its length.
    void add(std::string_view word);

    /// D[cluster][n], 0 when absent. Throws InvalidClusterLength unless the
    /// cluster has 2-4 graphemes.
    std::uint64_t prob(std::span<const std::string> cluster, int n) const;
    std::uint64_t prob(std::string_view cluster, int n) const;

    /// The length key of a word under this lexicon's convention.
    int word_length(const text::Atomization& word) const;
    int word_length(std::string_view word) const;

    const std::unordered_map<std::string, LengthCounts>& clusters() const noexcept {
        return clusters_;
    }
    std::uint64_t word_count() const noexcept { return word_count_; }
    const text::WeightTable& weights() const noexcept { return weights_; }
    LengthKey length_key() const noexcept { return key_; }

    bool operator==(const Lexicon&) const = default;

    friend Lexicon load_lexicon(std::istream& in);

private:
    text::WeightTable weights_;
    LengthKey key_;
    std::unordered_map<std::string, LengthCounts> clusters_;
    std::uint64_t word_count_ = 0;
};

inline constexpr int kLexiconVersion = 1;

/// Versioned UTF-8 JSON:
/// {"version":1,"length_key":..,"word_count":..,"weights":{..},"clusters":{"<c>":{"<n>":count}}}
void save_lexicon(const Lexicon& lex, std::ostream& out);
void save_lexicon(const Lexicon& lex, const std::filesystem::path& path);

/// Throws ParseError (with line/column) on malformed input, VersionError on
/// an unknown version.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);

}  // namespace dictscan
