#include "chunkalign/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chunkalign {

namespace {

void strip_line_ending(std::string& line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

std::runtime_error parse_error(const std::string& path, int lineno, const std::string& what) {
    return std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(lowercase(item));
    }
    return out;
}

bool symmetric_relation(Relation r) {
    return r == Relation::synonym || r == Relation::similar_to || r == Relation::antonym;
}

}  // namespace

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::synonym: return "synonym";
        case Relation::similar_to: return "similar_to";
        case Relation::antonym: return "antonym";
        case Relation::hypernym: return "hypernym";
        case Relation::hyponym: return "hyponym";
    }
    return "?";
}

Lexicon load_lexicon(const std::string& path, Relation relation) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path);
    Lexicon lex;
    lex.relation = relation;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line_ending(line);
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw parse_error(path, lineno, "expected `word<TAB>related1,related2,...`");
        }
        std::string word = lowercase(line.substr(0, tab));
        auto related = split_commas(line.substr(tab + 1));
        if (related.empty()) throw parse_error(path, lineno, "no related words for '" + word + "'");
        auto& set = lex.entries[word];
        for (auto& r : related) set.insert(std::move(r));
    }
    if (symmetric_relation(relation)) {
        std::vector<std::pair<std::string, std::string>> reversed;
        for (const auto& [word, related] : lex.entries)
            for (const auto& r : related) reversed.emplace_back(r, word);
        for (auto& [a, b] : reversed) lex.entries[a].insert(b);
    }
    return lex;
}

void cross_close_hierarchy(Lexicon& hypernyms, Lexicon& hyponyms) {
    std::vector<std::pair<std::string, std::string>> up, down;
    for (const auto& [word, related] : hypernyms.entries)
        for (const auto& r : related) down.emplace_back(r, word);
    for (const auto& [word, related] : hyponyms.entries)
        for (const auto& r : related) up.emplace_back(r, word);
    for (auto& [a, b] : down) hyponyms.entries[a].insert(b);
    for (auto& [a, b] : up) hypernyms.entries[a].insert(b);
}

TaxonomyGraph TaxonomyGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taxonomy: " + path);
    TaxonomyGraph g;
    std::unordered_map<std::string, int> id_of;
    std::vector<std::string> parent_name;
    std::vector<int> linenos;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line_ending(line);
        if (line.empty() || line[0] == '#') continue;
        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw parse_error(path, lineno, "expected `sense_id<TAB>words<TAB>parent`");
        }
        std::string sense = line.substr(0, tab1);
        auto words = split_commas(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::string parent = line.substr(tab2 + 1);
        if (sense.empty() || words.empty() || parent.empty()) {
            throw parse_error(path, lineno, "empty field");
        }
        if (id_of.count(sense)) throw parse_error(path, lineno, "duplicate sense '" + sense + "'");
        int id = static_cast<int>(parent_name.size());
        id_of[sense] = id;
        parent_name.push_back(parent);
        linenos.push_back(lineno);
        for (const auto& w : words) g.senses_of_[w].push_back(id);
    }
    g.parent_.assign(parent_name.size(), -1);
    for (std::size_t i = 0; i < parent_name.size(); ++i) {
        if (parent_name[i] == "ROOT") continue;
        auto it = id_of.find(parent_name[i]);
        if (it == id_of.end()) {
            throw parse_error(path, linenos[i], "unknown parent sense '" + parent_name[i] + "'");
        }
        g.parent_[i] = it->second;
    }
    // Depth by walking to a root; a walk longer than the node count is a cycle.
    g.depth_.assign(g.parent_.size(), -1);
    for (std::size_t i = 0; i < g.parent_.size(); ++i) {
        int steps = 0;
        int node = static_cast<int>(i);
        while (node != -1 && g.depth_[node] == -1) {
            node = g.parent_[node];
            ++steps;
            if (steps > static_cast<int>(g.parent_.size())) {
                throw std::runtime_error(path + ": cycle through sense at line " +
                                         std::to_string(linenos[i]));
            }
        }
        int base = node == -1 ? 0 : g.depth_[node] + 1;
        node = static_cast<int>(i);
        int d = base + steps - 1;
        while (node != -1 && g.depth_[node] == -1) {
            g.depth_[node] = d--;
            node = g.parent_[node];
        }
    }
    return g;
}

std::optional<double> TaxonomyGraph::path_similarity(const std::string& w1,
                                                     const std::string& w2) const {
    auto it1 = senses_of_.find(w1);
    auto it2 = senses_of_.find(w2);
    if (it1 == senses_of_.end() || it2 == senses_of_.end()) return std::nullopt;
    int best = -1;
    std::unordered_map<int, int> up1;  // ancestor -> distance from a sense of w1
    for (int s : it1->second) {
        int d = 0;
        for (int node = s; node != -1; node = parent_[node]) {
            auto [it, inserted] = up1.try_emplace(node, d);
            if (!inserted && it->second <= d) break;
            it->second = d;
            ++d;
        }
    }
    for (int s : it2->second) {
        int d = 0;
        for (int node = s; node != -1; node = parent_[node]) {
            auto it = up1.find(node);
            if (it != up1.end()) {
                int total = it->second + d;
                if (best < 0 || total < best) best = total;
            }
            ++d;
        }
    }
    if (best < 0) return std::nullopt;
    return 1.0 / (1.0 + best);
}

std::optional<double> path_similarity(const TaxonomyGraph& g, const std::string& w1,
                                      const std::string& w2) {
    return g.path_similarity(w1, w2);
}

ParaphraseTable ParaphraseTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open paraphrase table: " + path);
    ParaphraseTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line_ending(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string w1, w2;
        double score;
        if (!(std::getline(ss, w1, '\t') && std::getline(ss, w2, '\t') && ss >> score)) {
            throw parse_error(path, lineno, "expected `word1<TAB>word2<TAB>score`");
        }
        if (score < 0.0 || score > 1.0) {
            throw parse_error(path, lineno, "score out of [0,1]");
        }
        t.add(lowercase(w1), lowercase(w2), score);
    }
    return t;
}

void ParaphraseTable::add(const std::string& w1, const std::string& w2, double score) {
    const std::string& lo = std::min(w1, w2);
    const std::string& hi = std::max(w1, w2);
    entries_[lo + '\x1f' + hi] = score;
}

double ParaphraseTable::score(const std::string& w1, const std::string& w2) const {
    const std::string& lo = std::min(w1, w2);
    const std::string& hi = std::max(w1, w2);
    auto it = entries_.find(lo + '\x1f' + hi);
    if (it != entries_.end()) return it->second;
    return w1 == w2 ? 1.0 : 0.0;
}

double paraphrase_score(const ParaphraseTable& t, const std::string& w1, const std::string& w2) {
    return t.score(w1, w2);
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header line");
    strip_line_ending(line);
    std::istringstream header(line);
    long vocab_size = 0;
    int dim = 0;
    if (!(header >> vocab_size >> dim) || vocab_size < 0 || dim <= 0) {
        throw std::runtime_error(path + ":1: expected `vocab_size dimension`");
    }
    EmbeddingTable t(dim);
    int lineno = 1;
    long rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_line_ending(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> vec;
        vec.reserve(dim);
        double v;
        while (ss >> v) vec.push_back(v);
        if (static_cast<int>(vec.size()) != dim) {
            throw parse_error(path, lineno,
                              "expected " + std::to_string(dim) + " values, got " +
                                  std::to_string(vec.size()));
        }
        ++rows;
        // First occurrence wins when forms collide after lowercasing.
        if (t.find(word) == nullptr) t.add(word, std::move(vec));
    }
    if (rows != vocab_size) {
        throw std::runtime_error(path + ": header says " + std::to_string(vocab_size) +
                                 " vectors, file has " + std::to_string(rows));
    }
    return t;
}

void EmbeddingTable::add(const std::string& word, std::vector<double> vec) {
    if (static_cast<int>(vec.size()) != dimension_) {
        throw std::runtime_error("embedding for '" + word + "' has wrong dimension");
    }
    vectors_.emplace(lowercase(word), std::move(vec));
}

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
    auto it = vectors_.find(lowercase(word));
    return it == vectors_.end() ? nullptr : &it->second;
}

const std::vector<double>* embed(const EmbeddingTable& t, const std::string& word) {
    return t.find(word);
}

}  // namespace chunkalign
