#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dictscan/lexicon.hpp"

namespace dictscan {

/// Unconditional grapheme replacements for characters outside the alphabet.
/// No target may itself be a source, so one pass is a closure.
class GeneralCharMap {
public:
    GeneralCharMap() = default;
    explicit GeneralCharMap(std::map<std::string, std::string> mapping);

    /// ']' → 'l', 'Ö' → 'Č', 'š' → 'č'.
    static GeneralCharMap builtin();

    /// "source<TAB>target" per line; lines starting with # are comments.
    static GeneralCharMap load(const std::filesystem::path& path);

    /// Entries of other override or extend this map; the result is revalidated.
    GeneralCharMap merged(const GeneralCharMap& other) const;

    const std::map<std::string, std::string>& mapping() const noexcept { return mapping_; }

private:
    std::map<std::string, std::string> mapping_;
};

/// Ordered grapheme inventory; the order is the substitution scan order.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> graphemes);

    /// One grapheme per line, blank lines ignored.
    static Alphabet load(const std::filesystem::path& path);

    const std::vector<std::string>& graphemes() const noexcept { return graphemes_; }

private:
    std::vector<std::string> graphemes_;
};

struct CorrectionConfig {
    std::uint64_t thres = 5;
    int max_window = 4;
    int min_window = 2;

    void validate() const;
};

std::string apply_general_map(std::string_view word, const GeneralCharMap& map);

/// Best single-grapheme substitution of sub (strict improvement, scanning
/// positions then alphabet order). Returns the original unless the best
/// candidate reaches thres.
std::vector<std::string> correct_subword(const std::vector<std::string>& sub, int n,
                                         const Lexicon& lex, const Alphabet& abc,
                                         const CorrectionConfig& cfg);
std::string correct_subword(std::string_view sub, int n, const Lexicon& lex, const Alphabet& abc,
                            const CorrectionConfig& cfg);

/// Sliding-window correction of one token: general map first, then at each
/// position the longest window below thres is repaired in place.
std::string correct_word(std::string_view word, const Lexicon& lex, const Alphabet& abc,
                         const CorrectionConfig& cfg, const GeneralCharMap& map = {});

/// correct_word over every whitespace-delimited token; whitespace runs are
/// kept verbatim.
std::string correct_text(std::string_view text, const Lexicon& lex, const Alphabet& abc,
                         const CorrectionConfig& cfg, const GeneralCharMap& map = {});

/// Bundles the correction inputs shared read-only across pages.
class Corrector {
public:
    Corrector(Lexicon lex, Alphabet abc, GeneralCharMap map, CorrectionConfig cfg);

    std::string correct_word(std::string_view word) const;
    std::string correct_text(std::string_view text) const;

    const Lexicon& lexicon() const noexcept { return lex_; }

private:
    Lexicon lex_;
    Alphabet abc_;
    GeneralCharMap map_;
    CorrectionConfig cfg_;
};

}  // namespace dictscan
