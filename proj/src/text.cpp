#include "dictscan/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <fstream>
#include <stdexcept>

#include "dictscan/error.hpp"

namespace dictscan::text {

namespace {

const icu::Normalizer2& normalizer(bool compose) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n =
        compose ? icu::Normalizer2::getNFCInstance(status) : icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status) || n == nullptr)
        throw Error(std::string("ICU normalizer unavailable: ") + u_errorName(status));
    return *n;
}

std::string normalize(std::string_view utf8, bool compose) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::UnicodeString src = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    const icu::UnicodeString out = normalizer(compose).normalize(src, status);
    if (U_FAILURE(status)) throw Error(std::string("normalization failed: ") + u_errorName(status));
    std::string result;
    out.toUTF8String(result);
    return result;
}

bool is_mark(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }

// Decodes one code point starting at offset i; invalid bytes decode to U+FFFD.
UChar32 next_code_point(std::string_view s, std::size_t& i) {
    int32_t pos = static_cast<int32_t>(i);
    UChar32 c;
    U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos, static_cast<int32_t>(s.size()), c);
    i = static_cast<std::size_t>(pos);
    return c < 0 ? 0xFFFD : c;
}

}  // namespace

std::string canonicalize(std::string_view utf8) { return normalize(utf8, true); }

std::vector<std::string> graphemes(std::string_view utf8) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < utf8.size()) {
        const std::size_t start = i;
        next_code_point(utf8, i);
        while (i < utf8.size()) {
            std::size_t j = i;
            if (!is_mark(next_code_point(utf8, j))) break;
            i = j;
        }
        out.emplace_back(utf8.substr(start, i - start));
    }
    return out;
}

int default_weight(std::string_view grapheme) {
    const std::string decomposed = normalize(grapheme, false);
    int weight = 1;
    std::size_t i = 0;
    bool first = true;
    while (i < decomposed.size()) {
        const UChar32 c = next_code_point(decomposed, i);
        if (!first && is_mark(c)) ++weight;
        first = false;
    }
    return weight;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

std::vector<Run> split_runs(std::string_view utf8) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < utf8.size()) {
        const std::size_t start = i;
        const bool ws = is_whitespace(static_cast<char32_t>(next_code_point(utf8, i)));
        while (i < utf8.size()) {
            std::size_t j = i;
            if (is_whitespace(static_cast<char32_t>(next_code_point(utf8, j))) != ws) break;
            i = j;
        }
        runs.push_back({std::string(utf8.substr(start, i - start)), ws});
    }
    return runs;
}

std::vector<std::string> split_whitespace(std::string_view utf8) {
    std::vector<std::string> tokens;
    for (Run& r : split_runs(utf8))
        if (!r.whitespace) tokens.push_back(std::move(r.text));
    return tokens;
}

WeightTable::WeightTable(std::map<std::string, int> overrides) : overrides_(std::move(overrides)) {
    for (const auto& [g, w] : overrides_)
        if (w < 1) throw std::invalid_argument("grapheme weight must be positive: " + g);
}

int WeightTable::weight(std::string_view grapheme) const {
    if (auto it = overrides_.find(std::string(grapheme)); it != overrides_.end()) return it->second;
    return default_weight(grapheme);
}

WeightTable WeightTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open weight table " + path.string());
    std::map<std::string, int> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("weight table line lacks a TAB separator", lineno, 1);
        try {
            std::size_t used = 0;
            const int w = std::stoi(line.substr(tab + 1), &used);
            if (w < 1) throw ParseError("weight must be positive", lineno, tab + 2);
            table[canonicalize(line.substr(0, tab))] = w;
        } catch (const std::logic_error&) {
            throw ParseError("weight is not an integer", lineno, tab + 2);
        }
    }
    return WeightTable(std::move(table));
}

Atomization atomize(std::string_view word, const WeightTable& weights) {
    Atomization a;
    a.graphemes = graphemes(word);
    for (const auto& g : a.graphemes) a.weighted_length += weights.weight(g);
    return a;
}

std::string join(const std::vector<std::string>& parts, std::size_t first, std::size_t count) {
    std::string out;
    for (std::size_t i = first; i < first + count && i < parts.size(); ++i) out += parts[i];
    return out;
}

std::string join(const std::vector<std::string>& parts) { return join(parts, 0, parts.size()); }

}  // namespace dictscan::text
