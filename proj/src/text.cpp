#include "chunkalign/text.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chunkalign {

namespace {

bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c); }
bool is_word_char(unsigned char c) { return c >= 128 || std::isalnum(c); }

void strip_line_ending(std::string& line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

// Decimal integer or real, optional sign, optional comma-grouped integer part.
bool parses_as_number(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    bool grouped = false;
    std::size_t group_start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == ',')) {
        if (s[i] == ',') {
            std::size_t run = i - group_start;
            if (run == 0 || run > 3 || (grouped && run != 3)) return false;
            grouped = true;
            group_start = i + 1;
        } else {
            ++digits;
        }
        ++i;
    }
    if (grouped && i - group_start != 3) return false;
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::size_t frac = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++frac;
            ++i;
        }
        digits += frac;
    }
    return digits > 0 && i == s.size();
}

}  // namespace

NormalizationMap NormalizationMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open normalization map: " + path);
    NormalizationMap map;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line_ending(line);
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected `variant<TAB>canonical`");
        }
        std::string variant = lowercase(line.substr(0, tab));
        std::string canonical = lowercase(line.substr(tab + 1));
        if (canonical.find_first_of(" \t") != std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": canonical form must be a single token");
        }
        map.entries_[variant] = canonical;
    }
    // Idempotence: a canonical form must not be redirected elsewhere.
    for (const auto& [variant, canonical] : map.entries_) {
        auto it = map.entries_.find(canonical);
        if (it != map.entries_.end() && it->second != canonical) {
            throw std::runtime_error(path + ": canonical form '" + canonical +
                                     "' of '" + variant + "' maps to '" + it->second + "'");
        }
    }
    return map;
}

void NormalizationMap::add(const std::string& variant, const std::string& canonical) {
    entries_[lowercase(variant)] = lowercase(canonical);
}

std::optional<std::string> NormalizationMap::lookup(const std::string& lowercased) const {
    auto it = entries_.find(lowercased);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 128) c = static_cast<char>(std::tolower(u));
    }
    return out;
}

std::string canonicalize(const std::string& word, const NormalizationMap& map) {
    std::string lowered = lowercase(word);
    if (auto mapped = map.lookup(lowered)) return *mapped;
    return lowered;
}

Token make_token(const std::string& surface, const NormalizationMap& map) {
    Token t;
    t.surface = surface;
    t.canonical = canonicalize(surface, map);
    t.is_punct = !surface.empty() &&
                 std::all_of(surface.begin(), surface.end(),
                             [](char c) { return is_ascii_punct(static_cast<unsigned char>(c)); });
    t.is_number = !t.is_punct && parses_as_number(t.canonical);
    return t;
}

std::vector<Token> tokenize(const std::string& line, const NormalizationMap& map) {
    std::vector<Token> tokens;
    std::istringstream ss(line);
    std::string unit;
    while (ss >> unit) {
        std::size_t begin = 0;
        std::size_t end = unit.size();
        std::vector<std::string> leading, trailing;
        while (begin < end && is_ascii_punct(static_cast<unsigned char>(unit[begin]))) {
            leading.push_back(std::string(1, unit[begin]));
            ++begin;
        }
        while (end > begin && is_ascii_punct(static_cast<unsigned char>(unit[end - 1]))) {
            trailing.push_back(std::string(1, unit[end - 1]));
            --end;
        }
        std::reverse(trailing.begin(), trailing.end());
        for (const auto& p : leading) tokens.push_back(make_token(p, map));
        // Inside the core, punctuation survives only between word characters.
        std::string word;
        for (std::size_t i = begin; i < end; ++i) {
            unsigned char c = static_cast<unsigned char>(unit[i]);
            bool flanked = is_ascii_punct(c) && i > begin && i + 1 < end &&
                           is_word_char(static_cast<unsigned char>(unit[i - 1])) &&
                           is_word_char(static_cast<unsigned char>(unit[i + 1]));
            if (is_ascii_punct(c) && !flanked) {
                if (!word.empty()) {
                    tokens.push_back(make_token(word, map));
                    word.clear();
                }
                tokens.push_back(make_token(std::string(1, unit[i]), map));
            } else {
                word.push_back(unit[i]);
            }
        }
        if (!word.empty()) tokens.push_back(make_token(word, map));
        for (const auto& p : trailing) tokens.push_back(make_token(p, map));
    }
    return tokens;
}

int edit_distance(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t n = b.size();
    std::vector<int> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        int diag = row[0];
        row[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= n; ++j) {
            int next_diag = row[j];
            if (a[i - 1] == b[j - 1]) {
                row[j] = diag;
            } else {
                row[j] = 1 + std::min({diag, row[j], row[j - 1]});
            }
            diag = next_diag;
        }
    }
    return row[n];
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n) {
    std::vector<std::string> out;
    if (n < 1 || tokens.size() < static_cast<std::size_t>(n)) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (int k = 1; k < n; ++k) {
            g += ' ';
            g += tokens[i + k];
        }
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace chunkalign
