#include "dictscan/corrector.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "dictscan/error.hpp"

namespace dictscan {

namespace {

std::string single_grapheme(std::string_view s, const std::string& what) {
    const std::string canonical = text::canonicalize(s);
    if (text::graphemes(canonical).size() != 1)
        throw std::invalid_argument(what + " '" + std::string(s) + "' is not a single grapheme");
    return canonical;
}

}  // namespace

GeneralCharMap::GeneralCharMap(std::map<std::string, std::string> mapping) {
    for (const auto& [from, to] : mapping)
        mapping_[single_grapheme(from, "map source")] = single_grapheme(to, "map target");
    for (const auto& [from, to] : mapping_) {
        if (mapping_.count(to))
            throw std::invalid_argument("general map target '" + to + "' is also a source");
    }
}

GeneralCharMap GeneralCharMap::builtin() {
    return GeneralCharMap({{"]", "l"}, {"Ö", "Č"}, {"š", "č"}});
}

GeneralCharMap GeneralCharMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open general map " + path.string());
    std::map<std::string, std::string> mapping;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw ParseError("general map line must be source<TAB>target", lineno, 1);
        mapping[line.substr(0, tab)] = line.substr(tab + 1);
    }
    try {
        return GeneralCharMap(std::move(mapping));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("general map: ") + e.what(), 0, 0);
    }
}

GeneralCharMap GeneralCharMap::merged(const GeneralCharMap& other) const {
    auto m = mapping_;
    for (const auto& [from, to] : other.mapping_) m[from] = to;
    return GeneralCharMap(std::move(m));
}

Alphabet::Alphabet(std::vector<std::string> graphemes) {
    std::set<std::string> seen;
    for (const auto& g : graphemes) {
        std::string c = single_grapheme(g, "alphabet entry");
        if (!seen.insert(c).second) throw std::invalid_argument("duplicate alphabet entry '" + c + "'");
        graphemes_.push_back(std::move(c));
    }
    if (graphemes_.empty()) throw std::invalid_argument("alphabet is empty");
}

Alphabet Alphabet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open alphabet " + path.string());
    std::vector<std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) entries.push_back(line);
    }
    try {
        return Alphabet(std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("alphabet: ") + e.what(), 0, 0);
    }
}

void CorrectionConfig::validate() const {
    if (thres < 1) throw std::invalid_argument("thres must be at least 1");
    if (min_window < Lexicon::kMinCluster || max_window > Lexicon::kMaxCluster ||
        min_window > max_window)
        throw std::invalid_argument("correction windows must satisfy 2 <= min <= max <= 4");
}

std::string apply_general_map(std::string_view word, const GeneralCharMap& map) {
    std::string out;
    for (const auto& g : text::graphemes(text::canonicalize(word))) {
        const auto it = map.mapping().find(g);
        out += it == map.mapping().end() ? g : it->second;
    }
    return out;
}

std::vector<std::string> correct_subword(const std::vector<std::string>& sub, int n,
                                         const Lexicon& lex, const Alphabet& abc,
                                         const CorrectionConfig& cfg) {
    std::vector<std::string> best = sub;
    std::uint64_t max_prob = lex.prob(sub, n);
    std::vector<std::string> candidate = sub;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        for (const auto& g : abc.graphemes()) {
            candidate[i] = g;
            const std::uint64_t p = lex.prob(candidate, n);
            if (p > max_prob) {
                max_prob = p;
                best = candidate;
            }
        }
        candidate[i] = sub[i];
    }
    return max_prob < cfg.thres ? sub : best;
}

std::string correct_subword(std::string_view sub, int n, const Lexicon& lex, const Alphabet& abc,
                            const CorrectionConfig& cfg) {
    return text::join(correct_subword(text::graphemes(text::canonicalize(sub)), n, lex, abc, cfg));
}

std::string correct_word(std::string_view word, const Lexicon& lex, const Alphabet& abc,
                         const CorrectionConfig& cfg, const GeneralCharMap& map) {
    cfg.validate();
    const std::string mapped = apply_general_map(word, map);
    const text::Atomization atoms = text::atomize(mapped, lex.weights());
    std::vector<std::string> g = atoms.graphemes;
    const int n = lex.word_length(atoms);
    const auto size = static_cast<int>(g.size());
    if (size < cfg.min_window) return mapped;

    for (int i = 0; i < size; ++i) {
        for (int j = cfg.max_window; j >= cfg.min_window; --j) {
            if (i + j > size) continue;
            const std::vector<std::string> window(g.begin() + i, g.begin() + i + j);
            if (lex.prob(window, n) >= cfg.thres) continue;
            const auto fixed = correct_subword(window, n, lex, abc, cfg);
            std::copy(fixed.begin(), fixed.end(), g.begin() + i);
            break;
        }
    }
    return text::join(g);
}

std::string correct_text(std::string_view input, const Lexicon& lex, const Alphabet& abc,
                         const CorrectionConfig& cfg, const GeneralCharMap& map) {
    std::string out;
    for (const auto& run : text::split_runs(input))
        out += run.whitespace ? run.text : correct_word(run.text, lex, abc, cfg, map);
    return out;
}

Corrector::Corrector(Lexicon lex, Alphabet abc, GeneralCharMap map, CorrectionConfig cfg)
    : lex_(std::move(lex)), abc_(std::move(abc)), map_(std::move(map)), cfg_(cfg) {
    cfg_.validate();
}

std::string Corrector::correct_word(std::string_view word) const {
    return dictscan::correct_word(word, lex_, abc_, cfg_, map_);
}

std::string Corrector::correct_text(std::string_view text) const {
    return dictscan::correct_text(text, lex_, abc_, cfg_, map_);
}

}  // namespace dictscan
