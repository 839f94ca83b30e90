#include "chunkalign/config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace fs = std::filesystem;

namespace chunkalign {

namespace {

[[noreturn]] void die(const std::string& path, std::size_t line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double to_double(const std::string& path, std::size_t line, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        die(path, line, "expected a number, got \"" + v + "\"");
    }
}

long long to_int(const std::string& path, std::size_t line, const std::string& v) {
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        die(path, line, "expected an integer, got \"" + v + "\"");
    return out;
}

bool to_bool(const std::string& path, std::size_t line, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    die(path, line, "expected true/false, got \"" + v + "\"");
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        if (p.empty()) return p;
        fs::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };

    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        std::size_t eq = text.find('=');
        if (eq == std::string::npos) die(path, lineno, "expected key = value");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));

        if (key == "normalization_map") cfg.normalization_map = resolve(value);
        else if (key == "synonyms") cfg.synonyms = resolve(value);
        else if (key == "similar") cfg.similar = resolve(value);
        else if (key == "antonyms") cfg.antonyms = resolve(value);
        else if (key == "hypernyms") cfg.hypernyms = resolve(value);
        else if (key == "hyponyms") cfg.hyponyms = resolve(value);
        else if (key == "taxonomy") cfg.taxonomy = resolve(value);
        else if (key == "paraphrases") cfg.paraphrases = resolve(value);
        else if (key == "embeddings") cfg.embeddings = resolve(value);
        else if (key == "gamma") cfg.gamma = to_double(path, lineno, value);
        else if (key == "prune_threshold") cfg.prune_threshold = to_double(path, lineno, value);
        else if (key == "max_group_size") cfg.max_group_size = static_cast<int>(to_int(path, lineno, value));
        else if (key == "hash_dim") cfg.hash_dim = static_cast<int>(to_int(path, lineno, value));
        else if (key == "num_trees") cfg.forest.num_trees = static_cast<int>(to_int(path, lineno, value));
        else if (key == "max_depth") cfg.forest.max_depth = static_cast<int>(to_int(path, lineno, value));
        else if (key == "min_leaf") cfg.forest.min_leaf = static_cast<int>(to_int(path, lineno, value));
        else if (key == "feature_fraction") cfg.forest.feature_fraction = to_double(path, lineno, value);
        else if (key == "seed") cfg.forest.seed = static_cast<std::uint64_t>(to_int(path, lineno, value));
        else if (key == "jobs") cfg.jobs = static_cast<int>(to_int(path, lineno, value));
        else if (key == "exclude_punct") cfg.exclude_punct = to_bool(path, lineno, value);
        else die(path, lineno, "unknown config key \"" + key + "\"");
    }
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
    if (hash_dim < 2) throw std::invalid_argument("hash_dim must be at least 2");
    if (max_group_size < 1 || max_group_size > 3)
        throw std::invalid_argument("max_group_size must be 1, 2 or 3");
    if (forest.num_trees < 1) throw std::invalid_argument("num_trees must be at least 1");
    if (forest.max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
    if (forest.min_leaf < 1) throw std::invalid_argument("min_leaf must be at least 1");
    if (forest.feature_fraction > 1)
        throw std::invalid_argument("feature_fraction must be <= 1");
    if (jobs < 0) throw std::invalid_argument("jobs must be >= 0");

    const std::pair<const char*, const std::string*> files[] = {
        {"normalization_map", &normalization_map},
        {"synonyms", &synonyms},
        {"similar", &similar},
        {"antonyms", &antonyms},
        {"hypernyms", &hypernyms},
        {"hyponyms", &hyponyms},
        {"taxonomy", &taxonomy},
        {"paraphrases", &paraphrases},
        {"embeddings", &embeddings},
    };
    for (const auto& [key, p] : files)
        if (!p->empty() && !fs::is_regular_file(*p))
            throw std::invalid_argument(std::string(key) + " file not found: " + *p);
}

Resources load_resources(const RunConfig& cfg) {
    Resources res;
    if (!cfg.normalization_map.empty()) res.norm = NormalizationMap::load(cfg.normalization_map);
    if (!cfg.synonyms.empty()) res.synonyms = load_lexicon(cfg.synonyms, Relation::synonym);
    if (!cfg.similar.empty()) res.similar = load_lexicon(cfg.similar, Relation::similar_to);
    if (!cfg.antonyms.empty()) res.antonyms = load_lexicon(cfg.antonyms, Relation::antonym);
    if (!cfg.hypernyms.empty()) res.hypernyms = load_lexicon(cfg.hypernyms, Relation::hypernym);
    if (!cfg.hyponyms.empty()) res.hyponyms = load_lexicon(cfg.hyponyms, Relation::hyponym);
    cross_close_hierarchy(res.hypernyms, res.hyponyms);
    if (!cfg.taxonomy.empty()) res.taxonomy = TaxonomyGraph::load(cfg.taxonomy);
    if (!cfg.paraphrases.empty()) res.ppdb = ParaphraseTable::load(cfg.paraphrases);
    if (!cfg.embeddings.empty()) res.embeddings = EmbeddingTable::load(cfg.embeddings);
    return res;
}

}  // namespace chunkalign
