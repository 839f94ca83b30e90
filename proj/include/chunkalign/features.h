#pragma once

#include <array>
#include <string>
#include <vector>

#include "chunkalign/lexicon.h"
#include "chunkalign/text.h"

namespace chunkalign {

/// A chunk-group's text. `words` holds the canonical forms of the
/// non-punctuation tokens; `length` is their count.
struct Phrase {
    std::vector<Token> tokens;
    std::vector<std::string> words;       // canonical, in order
    std::vector<std::string> word_set;    // sorted unique
    int length = 0;
};

Phrase make_phrase(std::vector<Token> tokens);
Phrase make_phrase_from_text(const std::string& text, const NormalizationMap& map);

struct OverlapFeatures {
    double common_word_ratio = 0;     // shared words over mean length
    double synonym_overlap = 0;       // overlap after lexicon expansion
    double antonym_overlap = 0;       // cross antonym hits over mean length
    double hypernym_link = 0;         // 1 if one side's synonym closure meets
                                      // the other's hyper/hyponym set
    double path_similarity_sum = 0;   // taxonomy path similarities, summed
};

struct SurfaceFeatures {
    double has_number = 0;
    double negation_mismatch = 0;     // exactly one side carries a negation
    double length_difference = 0;
};

struct ResourceFeatures {
    double paraphrase_sum = 0;
    double embedding_cosine = 0;      // cosine of summed word vectors
    double bigram_cosine = 0;         // cosine of bigram count vectors
};

OverlapFeatures overlap_features(const Phrase& p1, const Phrase& p2, const Resources& res);
SurfaceFeatures surface_features(const Phrase& p1, const Phrase& p2);

// Average over p1's words of the best normalized edit similarity against
// p2's words: max(0, 1 - dist/max(char lengths)).
double edit_score(const Phrase& p1, const Phrase& p2);

ResourceFeatures resource_features(const Phrase& p1, const Phrase& p2, const Resources& res);

/// All twelve values plus a hashed unigram+bigram block. Slot order in
/// as_array() is fixed and shared with the classifiers.
struct FeatureVector {
    double common_word_ratio = 0;
    double synonym_overlap = 0;
    double antonym_overlap = 0;
    double hypernym_link = 0;
    double path_similarity_sum = 0;
    double has_number = 0;
    double negation_mismatch = 0;
    double edit_similarity = 0;
    double paraphrase_sum = 0;
    double embedding_cosine = 0;
    double bigram_cosine = 0;
    double length_difference = 0;
    std::vector<double> ngram_block;

    std::array<double, 12> as_array() const {
        return {common_word_ratio, synonym_overlap,  antonym_overlap, hypernym_link,
                path_similarity_sum, has_number,     negation_mismatch, edit_similarity,
                paraphrase_sum,      embedding_cosine, bigram_cosine,  length_difference};
    }
};

// Source n-grams hash into the lower half of the block, target n-grams into
// the upper half.
FeatureVector classifier_vector(const Phrase& p1, const Phrase& p2, const Resources& res,
                                int hash_dim);

/// Per-phrase precomputation for the aligner: expanded word sets, antonym
/// sets, summed embedding, bigram counts. Building one profile per chunk
/// group keeps candidate scoring linear in the group count.
struct SimProfile {
    std::vector<std::string> words;
    std::vector<std::string> word_set;
    std::vector<std::string> expanded_set;   // words + synonyms/similar/hyper/hyponyms
    std::vector<std::string> antonym_set;
    std::vector<double> embedding_sum;
    double embedding_norm = 0;
    std::vector<std::pair<std::string, int>> bigram_counts;  // sorted
    double bigram_norm = 0;
    int length = 0;
};

SimProfile make_sim_profile(const Phrase& p, const Resources& res);

// The aligner's chunk-group similarity: the max of common-word ratio,
// synonym overlap, antonym overlap, edit score, embedding cosine and bigram
// cosine.
double sim_score(const SimProfile& a, const SimProfile& b);
double sim_score(const Phrase& p1, const Phrase& p2, const Resources& res);

}  // namespace chunkalign
