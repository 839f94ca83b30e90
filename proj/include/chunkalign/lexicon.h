#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chunkalign/text.h"

namespace chunkalign {

enum class Relation { synonym, similar_to, antonym, hypernym, hyponym };

const char* relation_name(Relation r);

/// One word relation. Symmetric relations (synonym, similar_to, antonym)
/// are closed under symmetry at load time.
struct Lexicon {
    Relation relation = Relation::synonym;
    std::unordered_map<std::string, std::set<std::string>> entries;

    const std::set<std::string>* find(const std::string& word) const {
        auto it = entries.find(word);
        return it == entries.end() ? nullptr : &it->second;
    }
    bool contains(const std::string& word, const std::string& related) const {
        const auto* s = find(word);
        return s && s->count(related) > 0;
    }
};

// Format: `word<TAB>related1,related2,...` per line, '#' comments.
Lexicon load_lexicon(const std::string& path, Relation relation);

// Makes hypernym and hyponym lexicons mutual inverses of each other.
void cross_close_hierarchy(Lexicon& hypernyms, Lexicon& hyponyms);

/// Word senses arranged in a forest of is-a trees. Used for path similarity.
class TaxonomyGraph {
public:
    // Format: `sense_id<TAB>word1,word2,...<TAB>parent_sense_id` per line,
    // ROOT as the parent of top nodes. Rejects cycles and unknown parents.
    static TaxonomyGraph load(const std::string& path);

    bool knows(const std::string& word) const { return senses_of_.count(word) > 0; }
    std::size_t node_count() const { return parent_.size(); }

    // 1/(1+d), d = shortest path between any sense of w1 and any sense of w2
    // through a common ancestor. Absent if either word is unknown or the
    // senses live in disjoint trees.
    std::optional<double> path_similarity(const std::string& w1, const std::string& w2) const;

private:
    std::vector<int> parent_;  // -1 at roots
    std::vector<int> depth_;
    std::unordered_map<std::string, std::vector<int>> senses_of_;
};

std::optional<double> path_similarity(const TaxonomyGraph& g, const std::string& w1,
                                      const std::string& w2);

/// Symmetric word-pair scores in [0,1].
class ParaphraseTable {
public:
    // Format: `word1<TAB>word2<TAB>score` per line.
    static ParaphraseTable load(const std::string& path);

    void add(const std::string& w1, const std::string& w2, double score);
    // Table value if present; 1.0 for identical words; 0.0 otherwise.
    double score(const std::string& w1, const std::string& w2) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, double> entries_;  // key = min\x1Fmax
};

double paraphrase_score(const ParaphraseTable& t, const std::string& w1, const std::string& w2);

/// Fixed-dimension word vectors keyed by lowercase form.
class EmbeddingTable {
public:
    // First line `vocab_size dimension`, then `word v1 ... vd` per line.
    static EmbeddingTable load(const std::string& path);

    EmbeddingTable() = default;
    explicit EmbeddingTable(int dimension) : dimension_(dimension) {}

    void add(const std::string& word, std::vector<double> vec);
    const std::vector<double>* find(const std::string& word) const;
    int dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }

private:
    int dimension_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

const std::vector<double>* embed(const EmbeddingTable& t, const std::string& word);

/// Everything the feature extractor reads. Immutable once loaded, safe to
/// share across alignment workers.
struct Resources {
    NormalizationMap norm;
    Lexicon synonyms{Relation::synonym, {}};
    Lexicon similar{Relation::similar_to, {}};
    Lexicon antonyms{Relation::antonym, {}};
    Lexicon hypernyms{Relation::hypernym, {}};
    Lexicon hyponyms{Relation::hyponym, {}};
    TaxonomyGraph taxonomy;
    ParaphraseTable ppdb;
    EmbeddingTable embeddings;
};

}  // namespace chunkalign
