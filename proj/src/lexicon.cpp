#include "dictscan/lexicon.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dictscan/error.hpp"

namespace dictscan {

using json = nlohmann::ordered_json;

std::string_view to_string(LengthKey key) {
    return key == LengthKey::graphemes ? "graphemes" : "weighted";
}

LengthKey parse_length_key(std::string_view s) {
    if (s == "graphemes") return LengthKey::graphemes;
    if (s == "weighted") return LengthKey::weighted;
    throw std::invalid_argument("unknown length key '" + std::string(s) + "'");
}

namespace {

bool is_stripped(std::string_view cp) {
    static constexpr std::string_view kAscii = ",_-\"();:.";
    if (cp.size() == 1) return kAscii.find(cp.front()) != std::string_view::npos;
    return cp == "“" || cp == "”";
}

}  // namespace

std::string strip_punctuation(std::string_view raw) {
    const std::string canonical = text::canonicalize(raw);
    std::string out;
    out.reserve(canonical.size());
    std::size_t i = 0;
    while (i < canonical.size()) {
        const auto lead = static_cast<unsigned char>(canonical[i]);
        const std::size_t len = lead < 0x80 ? 1 : lead < 0xE0 ? 2 : lead < 0xF0 ? 3 : 4;
        const std::string_view cp(canonical.data() + i, std::min(len, canonical.size() - i));
        if (is_stripped(cp)) out += ' ';
        else out += cp;
        i += cp.size();
    }
    return out;
}

VocabStack normalize_entry(std::string_view raw, const text::WeightTable& weights) {
    VocabStack stack;
    for (std::string& token : text::split_whitespace(strip_punctuation(raw))) {
        const text::Atomization a = text::atomize(token, weights);
        if (a.graphemes.size() == 1 && a.weighted_length == 1) continue;
        stack.push_back(std::move(token));
    }
    return stack;
}

Lexicon::Lexicon(text::WeightTable weights, LengthKey key)
    : weights_(std::move(weights)), key_(key) {}

Lexicon Lexicon::build(const VocabStack& stack, text::WeightTable weights, LengthKey key) {
    Lexicon lex(std::move(weights), key);
    for (const auto& word : stack) lex.add(word);
    return lex;
}

int Lexicon::word_length(const text::Atomization& word) const {
    return key_ == LengthKey::graphemes ? static_cast<int>(word.graphemes.size())
                                        : word.weighted_length;
}

int Lexicon::word_length(std::string_view word) const {
    return word_length(text::atomize(text::canonicalize(word), weights_));
}

void Lexicon::add(std::string_view word) {
    const text::Atomization a = text::atomize(text::canonicalize(word), weights_);
    const int n = word_length(a);
    const auto g = a.graphemes.size();
    for (std::size_t len = kMinCluster; len <= kMaxCluster; ++len) {
        for (std::size_t i = 0; i + len <= g; ++i) ++clusters_[text::join(a.graphemes, i, len)][n];
    }
    ++word_count_;
}

std::uint64_t Lexicon::prob(std::span<const std::string> cluster, int n) const {
    if (cluster.size() < kMinCluster || cluster.size() > kMaxCluster)
        throw InvalidClusterLength("cluster must have 2-4 graphemes, got " +
                                   std::to_string(cluster.size()));
    std::string key;
    for (const auto& g : cluster) key += g;
    const auto it = clusters_.find(key);
    if (it == clusters_.end()) return 0;
    const auto jt = it->second.find(n);
    return jt == it->second.end() ? 0 : jt->second;
}

std::uint64_t Lexicon::prob(std::string_view cluster, int n) const {
    const auto g = text::graphemes(text::canonicalize(cluster));
    return prob(std::span<const std::string>(g), n);
}

void save_lexicon(const Lexicon& lex, std::ostream& out) {
    json doc;
    doc["version"] = kLexiconVersion;
    doc["length_key"] = to_string(lex.length_key());
    doc["word_count"] = lex.word_count();
    json weights = json::object();
    for (const auto& [g, w] : lex.weights().overrides()) weights[g] = w;
    doc["weights"] = std::move(weights);

    std::map<std::string, const Lexicon::LengthCounts*> sorted;
    for (const auto& [cluster, counts] : lex.clusters()) sorted[cluster] = &counts;
    json clusters = json::object();
    for (const auto& [cluster, counts] : sorted) {
        json entry = json::object();
        for (const auto& [n, count] : *counts) entry[std::to_string(n)] = count;
        clusters[cluster] = std::move(entry);
    }
    doc["clusters"] = std::move(clusters);
    out << doc.dump(1) << '\n';
    if (!out) throw Error("failed to write lexicon");
}

void save_lexicon(const Lexicon& lex, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    save_lexicon(lex, out);
}

namespace {

ParseError parse_error_at(const std::string& buffer, std::size_t byte, const std::string& what) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < buffer.size(); ++i) {
        if (buffer[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return ParseError("lexicon: " + what + " (line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ")",
                      line, col);
}

}  // namespace

Lexicon load_lexicon(std::istream& in) {
    const std::string buffer{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    json doc;
    try {
        doc = json::parse(buffer);
    } catch (const json::parse_error& e) {
        throw parse_error_at(buffer, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    auto fail = [](const std::string& what) { return ParseError("lexicon: " + what, 0, 0); };
    if (!doc.is_object()) throw fail("top level is not an object");
    if (!doc.contains("version") || !doc["version"].is_number_integer())
        throw fail("missing integer \"version\"");
    if (doc["version"].get<int>() != kLexiconVersion)
        throw VersionError("unsupported lexicon version " + doc["version"].dump());

    try {
        LengthKey key = LengthKey::weighted;
        if (doc.contains("length_key")) key = parse_length_key(doc.at("length_key").get<std::string>());
        std::map<std::string, int> weights;
        if (doc.contains("weights")) {
            for (const auto& [g, w] : doc.at("weights").items()) weights[g] = w.get<int>();
        }
        Lexicon lex(text::WeightTable(std::move(weights)), key);
        for (const auto& [cluster, counts] : doc.at("clusters").items()) {
            const auto g = text::graphemes(cluster);
            if (g.size() < Lexicon::kMinCluster || g.size() > Lexicon::kMaxCluster)
                throw fail("cluster '" + cluster + "' does not have 2-4 graphemes");
            auto& entry = lex.clusters_[cluster];
            for (const auto& [n, count] : counts.items()) {
                std::size_t used = 0;
                const int len = std::stoi(n, &used);
                if (used != n.size() || len < 1) throw fail("bad length key '" + n + "'");
                const auto c = count.get<std::uint64_t>();
                if (c == 0) throw fail("zero count for cluster '" + cluster + "'");
                entry[len] = c;
            }
            if (entry.empty()) throw fail("cluster '" + cluster + "' has no counts");
        }
        lex.word_count_ = doc.value("word_count", std::uint64_t{0});
        return lex;
    } catch (const json::exception& e) {
        throw fail(e.what());
    } catch (const std::invalid_argument& e) {
        throw fail(e.what());
    } catch (const std::out_of_range& e) {
        throw fail(e.what());
    }
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open lexicon " + path.string());
    return load_lexicon(in);
}

}  // namespace dictscan
