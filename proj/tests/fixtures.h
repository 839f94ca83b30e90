#pragma once

// Shared scaffolding for the test suite: scratch directories, small lexical
// resources, random wa documents, and separable training data. The random
// documents are built record-first — chunk spans are exactly the maximal
// contiguous token runs of the records that use them — so writing and
// re-parsing such a document reproduces it field for field.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chunkalign/aligner.h"
#include "chunkalign/classify.h"
#include "chunkalign/forest.h"
#include "chunkalign/lexicon.h"
#include "chunkalign/wa_format.h"

#include "oracles.h"

namespace testutil {

class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        const auto base = std::filesystem::temp_directory_path();
        for (;;) {
            path_ = base / ("chunkalign-test-" + std::to_string(rd()) + "-" +
                            std::to_string(counter.fetch_add(1)));
            if (std::filesystem::create_directory(path_)) return;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const TempDir& dir, const std::string& name,
                              const std::string& content) {
    const std::string path = dir.file(name);
    std::ofstream f(path, std::ios::trunc);
    f << content;
    if (!f) throw std::runtime_error("test fixture: cannot write " + path);
    return path;
}

inline std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("test fixture: cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

template <typename T>
void shuffle(std::vector<T>& v, TestRng& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(rng.below(static_cast<int>(i)))]);
}

inline chunkalign::Phrase phrase(const std::string& text) {
    return chunkalign::make_phrase_from_text(text, chunkalign::NormalizationMap());
}

// Synonyms, antonyms and a paraphrase entry; enough signal for the
// classifier fixtures without touching the filesystem.
inline chunkalign::Resources toy_resources() {
    chunkalign::Resources res;
    auto link = [](chunkalign::Lexicon& lex, const char* a, const char* b) {
        lex.entries[a].insert(b);
        lex.entries[b].insert(a);
    };
    link(res.synonyms, "car", "auto");
    link(res.synonyms, "big", "large");
    link(res.antonyms, "hot", "cold");
    link(res.antonyms, "up", "down");
    res.ppdb.add("quick", "fast", 0.8);
    return res;
}

// ---- random inputs ---------------------------------------------------------

inline const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> pool = {
        "the",  "a",    "dog",  "cat",  "man",   "woman", "runs", "walks",
        "sees", "big",  "old",  "new",  "red",   "blue",  "fast", "house",
        "car",  "tree", "bird", "road", "not",   "very",  "small", "tall"};
    return pool;
}

inline chunkalign::Token random_word_token(TestRng& rng) {
    const auto& pool = word_pool();
    return chunkalign::make_token(pool[static_cast<std::size_t>(
                                      rng.below(static_cast<int>(pool.size())))],
                                  chunkalign::NormalizationMap());
}

// Short words over a small alphabet plus near-collision dictionary words, to
// give the edit-score comparisons actual work.
inline chunkalign::Phrase random_phrase(TestRng& rng, int max_words = 5) {
    static const char* kPool[] = {"cat",  "car", "card", "care", "cart", "art",
                                  "star", "start", "dog", "dig",  "dug",  "den"};
    const int n = rng.below(max_words + 1);
    std::vector<chunkalign::Token> toks;
    const chunkalign::NormalizationMap no_norm;
    for (int i = 0; i < n; ++i) {
        if (rng.below(2) == 0) {
            toks.push_back(chunkalign::make_token(kPool[rng.below(12)], no_norm));
        } else {
            std::string w;
            const int len = 1 + rng.below(6);
            for (int k = 0; k < len; ++k) w += static_cast<char>('a' + rng.below(4));
            toks.push_back(chunkalign::make_token(w, no_norm));
        }
    }
    return chunkalign::make_phrase(std::move(toks));
}

// Every (source group, target group) pair over groups of size <= cap, each
// with an independent uniform weight. sim/alpha are left 0 — the solver only
// reads weight.
inline std::vector<chunkalign::CandidatePair> random_candidates(TestRng& rng, int m, int n,
                                                                double lo, double hi,
                                                                int cap = 2) {
    using chunkalign::CandidatePair;
    using chunkalign::Side;
    auto groups = [cap](int count) {
        std::vector<std::vector<int>> out;
        for (int i = 1; i <= count; ++i) out.push_back({i});
        if (cap >= 2)
            for (int i = 1; i <= count; ++i)
                for (int j = i + 1; j <= count; ++j) out.push_back({i, j});
        return out;
    };
    std::vector<CandidatePair> cands;
    for (const auto& g1 : groups(m))
        for (const auto& g2 : groups(n)) {
            CandidatePair c;
            c.s1 = {Side::source, g1};
            c.s2 = {Side::target, g2};
            c.weight = rng.uniform(lo, hi);
            cands.push_back(std::move(c));
        }
    return cands;
}

// ---- random wa documents ---------------------------------------------------

inline std::string surface_text(const std::vector<chunkalign::Token>& toks) {
    std::string out;
    for (const auto& t : toks) {
        if (!out.empty()) out += ' ';
        out += t.surface;
    }
    return out;
}

inline std::vector<chunkalign::ChunkSpan> random_partition(TestRng& rng, int num_tokens) {
    std::vector<chunkalign::ChunkSpan> spans;
    int at = 0;
    while (at < num_tokens) {
        int len = 1 + rng.below(3);
        if (at + len > num_tokens) len = num_tokens - at;
        spans.push_back({at, at + len});
        at += len;
    }
    return spans;
}

// Random records over the given chunkings: every chunk lands in exactly one
// record, groups are mostly singletons with occasional two-chunk merges.
// Merged chunks are kept non-adjacent on purpose: a record side covering two
// adjacent chunks reads back as one longer chunk, which is a different (if
// equivalent) document.
inline std::vector<chunkalign::LabeledPair> random_records(TestRng& rng, int src_chunks,
                                                           int tgt_chunks) {
    using chunkalign::LabeledPair;
    using chunkalign::TypeLabel;
    std::vector<int> src_ids(static_cast<std::size_t>(src_chunks));
    std::vector<int> tgt_ids(static_cast<std::size_t>(tgt_chunks));
    for (int i = 0; i < src_chunks; ++i) src_ids[static_cast<std::size_t>(i)] = i + 1;
    for (int i = 0; i < tgt_chunks; ++i) tgt_ids[static_cast<std::size_t>(i)] = i + 1;
    shuffle(src_ids, rng);
    shuffle(tgt_ids, rng);

    auto take_group = [&rng](std::vector<int>& pool) {
        std::vector<int> g = {pool.back()};
        pool.pop_back();
        if (!pool.empty() && rng.below(4) == 0) {
            for (std::size_t k = pool.size(); k-- > 0;) {
                if (std::abs(pool[k] - g[0]) > 1) {
                    g.push_back(pool[k]);
                    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
                    break;
                }
            }
        }
        std::sort(g.begin(), g.end());
        return g;
    };

    static const TypeLabel kKinds[] = {TypeLabel::EQUI, TypeLabel::OPPO, TypeLabel::SPE1,
                                       TypeLabel::SPE2, TypeLabel::SIMI, TypeLabel::REL};
    std::vector<LabeledPair> pairs;
    while (!src_ids.empty() && !tgt_ids.empty()) {
        LabeledPair p;
        p.src_chunks = take_group(src_ids);
        p.tgt_chunks = take_group(tgt_ids);
        p.type = kKinds[rng.below(6)];
        p.score = p.type == TypeLabel::EQUI ? 5 : 1 + rng.below(5);
        pairs.push_back(std::move(p));
    }
    for (int id : src_ids) pairs.push_back({{id}, {}, TypeLabel::NOALI, 0});
    for (int id : tgt_ids) pairs.push_back({{}, {id}, TypeLabel::NOALI, 0});
    return pairs;
}

inline chunkalign::WaEntry random_entry(TestRng& rng, const std::string& id) {
    chunkalign::WaEntry entry;
    entry.id = id;
    auto build_side = [&rng](chunkalign::ChunkedSentence& sent) {
        const int n = 2 + rng.below(9);
        std::vector<chunkalign::Token> toks;
        for (int i = 0; i < n; ++i) toks.push_back(random_word_token(rng));
        sent = chunkalign::make_chunked_sentence(std::move(toks), random_partition(rng, n));
    };
    build_side(entry.source);
    build_side(entry.target);
    entry.source_text = surface_text(entry.source.tokens);
    entry.target_text = surface_text(entry.target.tokens);
    entry.pairs = random_records(rng, entry.source.chunk_count(), entry.target.chunk_count());
    return entry;
}

inline chunkalign::WaDocument random_document(TestRng& rng, int entries) {
    chunkalign::WaDocument doc;
    for (int i = 0; i < entries; ++i)
        doc.entries.push_back(random_entry(rng, std::to_string(i + 1)));
    return doc;
}

// Same sentences and ids as `gold`, independently re-chunked and re-aligned —
// a plausible system output for metric tests.
inline chunkalign::WaDocument perturbed_system(const chunkalign::WaDocument& gold,
                                               TestRng& rng) {
    chunkalign::WaDocument sys;
    for (const chunkalign::WaEntry& ge : gold.entries) {
        chunkalign::WaEntry se;
        se.id = ge.id;
        se.source = chunkalign::make_chunked_sentence(
            ge.source.tokens, random_partition(rng, static_cast<int>(ge.source.tokens.size())));
        se.target = chunkalign::make_chunked_sentence(
            ge.target.tokens, random_partition(rng, static_cast<int>(ge.target.tokens.size())));
        se.source_text = ge.source_text;
        se.target_text = ge.target_text;
        se.pairs = random_records(rng, se.source.chunk_count(), se.target.chunk_count());
        sys.entries.push_back(std::move(se));
    }
    return sys;
}

// ---- training data ---------------------------------------------------------

// Two well-separated 6-d blobs: class 0 in [0,1]^6, class 1 in [2,3]^6.
inline chunkalign::TrainingSet blob_training(TestRng& rng, int per_class = 100) {
    chunkalign::TrainingSet data;
    for (int cls = 0; cls < 2; ++cls)
        for (int i = 0; i < per_class; ++i) {
            std::vector<double> row(6);
            for (double& x : row) x = rng.uniform() + (cls ? 2.0 : 0.0);
            data.rows.push_back(std::move(row));
            data.labels.push_back(cls);
        }
    return data;
}

}  // namespace testutil
