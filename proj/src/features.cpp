#include "chunkalign/features.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace chunkalign {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::size_t intersection_size(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

void append_related(const Lexicon& lex, const std::vector<std::string>& words,
                    std::vector<std::string>& out) {
    for (const auto& w : words) {
        if (const auto* rel = lex.find(w)) out.insert(out.end(), rel->begin(), rel->end());
    }
}

std::vector<std::string> expanded_word_set(const std::vector<std::string>& word_set,
                                           const Resources& res) {
    std::vector<std::string> v = word_set;
    append_related(res.synonyms, word_set, v);
    append_related(res.similar, word_set, v);
    append_related(res.hypernyms, word_set, v);
    append_related(res.hyponyms, word_set, v);
    return sorted_unique(std::move(v));
}

std::vector<std::string> antonym_set(const std::vector<std::string>& word_set,
                                     const Resources& res) {
    std::vector<std::string> v;
    append_related(res.antonyms, word_set, v);
    return sorted_unique(std::move(v));
}

bool is_negation(const std::string& canonical) {
    if (canonical == "not" || canonical == "never" || canonical == "n't") return true;
    return canonical.size() > 3 && canonical.compare(canonical.size() - 3, 3, "n't") == 0;
}

bool has_negation(const Phrase& p) {
    return std::any_of(p.words.begin(), p.words.end(), is_negation);
}

bool has_number_token(const Phrase& p) {
    return std::any_of(p.tokens.begin(), p.tokens.end(),
                       [](const Token& t) { return t.is_number; });
}

std::vector<std::pair<std::string, int>> bigram_count_vector(
    const std::vector<std::string>& words) {
    auto grams = ngrams(words, 2);
    std::sort(grams.begin(), grams.end());
    std::vector<std::pair<std::string, int>> counts;
    for (auto& g : grams) {
        if (!counts.empty() && counts.back().first == g) {
            ++counts.back().second;
        } else {
            counts.emplace_back(std::move(g), 1);
        }
    }
    return counts;
}

double count_vector_norm(const std::vector<std::pair<std::string, int>>& counts) {
    double s = 0;
    for (const auto& [g, c] : counts) s += static_cast<double>(c) * c;
    return std::sqrt(s);
}

double bigram_cosine_from(const std::vector<std::pair<std::string, int>>& a, double norm_a,
                          const std::vector<std::pair<std::string, int>>& b, double norm_b) {
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    // sqrt(x)*sqrt(x) can land an ulp away from x, so equal vectors need the
    // exact answer spelled out; the clamp below covers near-parallel ones.
    if (a == b) return 1.0;
    double dot = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += static_cast<double>(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return std::min(1.0, dot / (norm_a * norm_b));
}

std::vector<double> embedding_sum(const std::vector<std::string>& words,
                                  const EmbeddingTable& table) {
    std::vector<double> sum(table.dimension(), 0.0);
    for (const auto& w : words) {
        if (const auto* vec = table.find(w)) {
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
        }
    }
    return sum;
}

double vector_norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double embedding_cosine_from(const std::vector<double>& a, double norm_a,
                             const std::vector<double>& b, double norm_b) {
    if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
    if (a == b) return 1.0;
    double dot = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) dot += a[i] * b[i];
    return std::min(1.0, dot / (norm_a * norm_b));
}

double word_edit_similarity(const std::string& a, const std::string& b) {
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 1.0;
    double sim = 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
    return std::max(0.0, sim);
}

// Best-match average with an exact length-gap skip: the similarity of two
// words never exceeds 1 - |len1-len2|/max(len1,len2).
double edit_score_impl(const std::vector<std::string>& words1,
                       const std::vector<std::string>& words2,
                       const std::vector<std::string>& word_set2) {
    if (words1.empty() || words2.empty()) return 0.0;
    double total = 0;
    for (const auto& w1 : words1) {
        double best = 0;
        if (std::binary_search(word_set2.begin(), word_set2.end(), w1)) {
            best = 1.0;
        } else {
            for (const auto& w2 : words2) {
                double len1 = static_cast<double>(w1.size());
                double len2 = static_cast<double>(w2.size());
                double cap = 1.0 - std::abs(len1 - len2) / std::max(len1, len2);
                if (cap <= best) continue;
                best = std::max(best, word_edit_similarity(w1, w2));
                if (best >= 1.0) break;
            }
        }
        total += best;
    }
    return total / static_cast<double>(words1.size());
}

std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void hash_ngrams_into(const std::vector<std::string>& words, std::vector<double>& block,
                      std::size_t offset, std::size_t width) {
    if (width == 0) return;
    auto bump = [&](const std::string& g) { block[offset + fnv1a_hash(g) % width] += 1.0; };
    for (const auto& w : words) bump(w);
    for (const auto& g : ngrams(words, 2)) bump(g);
}

}  // namespace

Phrase make_phrase(std::vector<Token> tokens) {
    Phrase p;
    p.tokens = std::move(tokens);
    for (const auto& t : p.tokens) {
        if (!t.is_punct) p.words.push_back(t.canonical);
    }
    p.length = static_cast<int>(p.words.size());
    p.word_set = sorted_unique(p.words);
    return p;
}

Phrase make_phrase_from_text(const std::string& text, const NormalizationMap& map) {
    return make_phrase(tokenize(text, map));
}

OverlapFeatures overlap_features(const Phrase& p1, const Phrase& p2, const Resources& res) {
    OverlapFeatures f;
    double mean_len = 0.5 * (p1.length + p2.length);
    if (mean_len == 0.0) return f;

    f.common_word_ratio = intersection_size(p1.word_set, p2.word_set) / mean_len;

    auto v1 = expanded_word_set(p1.word_set, res);
    auto v2 = expanded_word_set(p2.word_set, res);
    f.synonym_overlap = intersection_size(v1, v2) / mean_len;

    auto ant1 = antonym_set(p1.word_set, res);
    auto ant2 = antonym_set(p2.word_set, res);
    f.antonym_overlap = (intersection_size(p1.word_set, ant2) +
                         intersection_size(p2.word_set, ant1)) /
                        mean_len;

    // Hypernym link: does p1's synonym closure meet the hyper/hyponym set of
    // p2's synonym closure?
    std::vector<std::string> closure1 = p1.word_set;
    append_related(res.synonyms, p1.word_set, closure1);
    closure1 = sorted_unique(std::move(closure1));
    std::vector<std::string> closure2 = p2.word_set;
    append_related(res.synonyms, p2.word_set, closure2);
    closure2 = sorted_unique(std::move(closure2));
    std::vector<std::string> hyp2;
    append_related(res.hypernyms, closure2, hyp2);
    append_related(res.hyponyms, closure2, hyp2);
    hyp2 = sorted_unique(std::move(hyp2));
    f.hypernym_link = intersection_size(closure1, hyp2) >= 1 ? 1.0 : 0.0;

    double path_sum = 0;
    for (const auto& w1 : p1.word_set)
        for (const auto& w2 : p2.word_set)
            if (auto sim = res.taxonomy.path_similarity(w1, w2)) path_sum += *sim;
    f.path_similarity_sum = path_sum / static_cast<double>(p1.length + p2.length);
    return f;
}

SurfaceFeatures surface_features(const Phrase& p1, const Phrase& p2) {
    SurfaceFeatures f;
    f.has_number = (has_number_token(p1) || has_number_token(p2)) ? 1.0 : 0.0;
    f.negation_mismatch = (has_negation(p1) != has_negation(p2)) ? 1.0 : 0.0;
    f.length_difference = static_cast<double>(p1.length - p2.length);
    return f;
}

double edit_score(const Phrase& p1, const Phrase& p2) {
    return edit_score_impl(p1.words, p2.words, p2.word_set);
}

ResourceFeatures resource_features(const Phrase& p1, const Phrase& p2, const Resources& res) {
    ResourceFeatures f;
    for (const auto& w1 : p1.word_set)
        for (const auto& w2 : p2.word_set) f.paraphrase_sum += res.ppdb.score(w1, w2);

    auto e1 = embedding_sum(p1.words, res.embeddings);
    auto e2 = embedding_sum(p2.words, res.embeddings);
    f.embedding_cosine = embedding_cosine_from(e1, vector_norm(e1), e2, vector_norm(e2));

    auto b1 = bigram_count_vector(p1.words);
    auto b2 = bigram_count_vector(p2.words);
    f.bigram_cosine = bigram_cosine_from(b1, count_vector_norm(b1), b2, count_vector_norm(b2));
    return f;
}

FeatureVector classifier_vector(const Phrase& p1, const Phrase& p2, const Resources& res,
                                int hash_dim) {
    FeatureVector v;
    auto ov = overlap_features(p1, p2, res);
    v.common_word_ratio = ov.common_word_ratio;
    v.synonym_overlap = ov.synonym_overlap;
    v.antonym_overlap = ov.antonym_overlap;
    v.hypernym_link = ov.hypernym_link;
    v.path_similarity_sum = ov.path_similarity_sum;
    auto sf = surface_features(p1, p2);
    v.has_number = sf.has_number;
    v.negation_mismatch = sf.negation_mismatch;
    v.length_difference = sf.length_difference;
    v.edit_similarity = edit_score(p1, p2);
    auto rf = resource_features(p1, p2, res);
    v.paraphrase_sum = rf.paraphrase_sum;
    v.embedding_cosine = rf.embedding_cosine;
    v.bigram_cosine = rf.bigram_cosine;

    std::size_t lower = static_cast<std::size_t>(hash_dim) / 2;
    v.ngram_block.assign(static_cast<std::size_t>(hash_dim), 0.0);
    hash_ngrams_into(p1.words, v.ngram_block, 0, lower);
    hash_ngrams_into(p2.words, v.ngram_block, lower, static_cast<std::size_t>(hash_dim) - lower);
    return v;
}

SimProfile make_sim_profile(const Phrase& p, const Resources& res) {
    SimProfile prof;
    prof.words = p.words;
    prof.word_set = p.word_set;
    prof.expanded_set = expanded_word_set(p.word_set, res);
    prof.antonym_set = antonym_set(p.word_set, res);
    prof.embedding_sum = embedding_sum(p.words, res.embeddings);
    prof.embedding_norm = vector_norm(prof.embedding_sum);
    prof.bigram_counts = bigram_count_vector(p.words);
    prof.bigram_norm = count_vector_norm(prof.bigram_counts);
    prof.length = p.length;
    return prof;
}

double sim_score(const SimProfile& a, const SimProfile& b) {
    double mean_len = 0.5 * (a.length + b.length);
    double best = 0.0;
    if (mean_len > 0.0) {
        best = intersection_size(a.word_set, b.word_set) / mean_len;
        best = std::max(best, intersection_size(a.expanded_set, b.expanded_set) / mean_len);
        double antonym = (intersection_size(a.word_set, b.antonym_set) +
                          intersection_size(b.word_set, a.antonym_set)) /
                         mean_len;
        best = std::max(best, antonym);
    }
    best = std::max(best, edit_score_impl(a.words, b.words, b.word_set));
    best = std::max(best, embedding_cosine_from(a.embedding_sum, a.embedding_norm,
                                                b.embedding_sum, b.embedding_norm));
    best = std::max(best, bigram_cosine_from(a.bigram_counts, a.bigram_norm, b.bigram_counts,
                                             b.bigram_norm));
    return best;
}

double sim_score(const Phrase& p1, const Phrase& p2, const Resources& res) {
    return sim_score(make_sim_profile(p1, res), make_sim_profile(p2, res));
}

}  // namespace chunkalign
