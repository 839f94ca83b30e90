#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chunkalign {

/// Maps word variants to a single canonical form (e.g. usa -> u.s.a).
/// Keys and values are stored lowercased; the mapping is idempotent:
/// a canonical form either maps to itself or is absent.
class NormalizationMap {
public:
    NormalizationMap() = default;

    // One entry per line, `variant<TAB>canonical`, '#' starts a comment.
    static NormalizationMap load(const std::string& path);

    void add(const std::string& variant, const std::string& canonical);
    std::optional<std::string> lookup(const std::string& lowercased) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_;
};

struct Token {
    std::string surface;
    std::string canonical;  // normalization-map lookup of the lowercased surface
    bool is_number = false;
    bool is_punct = false;

    bool operator==(const Token&) const = default;
};

std::string lowercase(std::string_view s);

// map[lowercase(word)] if present, else lowercase(word)
std::string canonicalize(const std::string& word, const NormalizationMap& map);

// Builds a token from a single pre-split unit (no further splitting).
Token make_token(const std::string& surface, const NormalizationMap& map);

// Whitespace split, then attached punctuation is peeled off into separate
// tokens. Punctuation flanked by alphanumerics on both sides stays inside
// the word, which keeps abbreviations (u.s.a) and grouped numbers (1,000)
// intact.
std::vector<Token> tokenize(const std::string& line,
                            const NormalizationMap& map = NormalizationMap());

// Unit-cost Levenshtein distance.
int edit_distance(std::string_view a, std::string_view b);

// Contiguous n-token windows, joined with a single space, in order.
// Fewer than n tokens yields an empty result.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n);

}  // namespace chunkalign
