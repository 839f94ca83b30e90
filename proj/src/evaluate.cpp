#include "chunkalign/evaluate.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace chunkalign {

namespace {

struct PairInfo {
    TypeLabel type;
    int score;
};

using TokenPairMap = std::unordered_map<std::uint64_t, PairInfo>;

std::uint64_t pack(int i, int j) {
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32 |
           static_cast<std::uint32_t>(j);
}

TokenPairMap token_pairs(const WaEntry& entry, bool exclude_punct) {
    TokenPairMap out;
    for (const LabeledPair& p : entry.pairs) {
        if (p.type == TypeLabel::NOALI) continue;
        std::vector<int> src, tgt;
        for (int id : p.src_chunks) {
            const ChunkSpan& s = entry.source.chunk(id);
            for (int t = s.begin; t < s.end; ++t) {
                if (exclude_punct && entry.source.tokens[static_cast<std::size_t>(t)].is_punct)
                    continue;
                src.push_back(t);
            }
        }
        for (int id : p.tgt_chunks) {
            const ChunkSpan& s = entry.target.chunk(id);
            for (int t = s.begin; t < s.end; ++t) {
                if (exclude_punct && entry.target.tokens[static_cast<std::size_t>(t)].is_punct)
                    continue;
                tgt.push_back(t);
            }
        }
        for (int i : src)
            for (int j : tgt) out[pack(i, j)] = {p.type, p.score};
    }
    return out;
}

}  // namespace

EvalReport evaluate(const WaDocument& gold, const WaDocument& sys, const EvalOptions& opts) {
    std::unordered_map<std::string, const WaEntry*> sys_by_id;
    for (const WaEntry& e : sys.entries)
        if (!sys_by_id.emplace(e.id, &e).second)
            throw std::invalid_argument("system document repeats sentence id " + e.id);
    std::unordered_map<std::string, const WaEntry*> gold_by_id;
    for (const WaEntry& e : gold.entries)
        if (!gold_by_id.emplace(e.id, &e).second)
            throw std::invalid_argument("gold document repeats sentence id " + e.id);

    std::string missing_sys, missing_gold;
    for (const WaEntry& e : gold.entries)
        if (!sys_by_id.count(e.id)) missing_sys += (missing_sys.empty() ? "" : ", ") + e.id;
    for (const WaEntry& e : sys.entries)
        if (!gold_by_id.count(e.id)) missing_gold += (missing_gold.empty() ? "" : ", ") + e.id;
    if (!missing_sys.empty() || !missing_gold.empty()) {
        std::string msg = "documents cover different sentence ids;";
        if (!missing_sys.empty()) msg += " missing from system: " + missing_sys + ";";
        if (!missing_gold.empty()) msg += " missing from gold: " + missing_gold + ";";
        msg.pop_back();
        throw std::invalid_argument(msg);
    }

    double gold_total = 0;
    double sys_total = 0;
    double align_w = 0;
    double type_w = 0;
    double score_w = 0;
    double both_w = 0;
    for (const WaEntry& ge : gold.entries) {
        const WaEntry& se = *sys_by_id.at(ge.id);
        TokenPairMap gmap = token_pairs(ge, opts.exclude_punct);
        TokenPairMap smap = token_pairs(se, opts.exclude_punct);
        gold_total += static_cast<double>(gmap.size());
        sys_total += static_cast<double>(smap.size());
        for (const auto& [key, ginfo] : gmap) {
            auto it = smap.find(key);
            if (it == smap.end()) continue;
            const PairInfo& sinfo = it->second;
            align_w += 1.0;
            double tw = ginfo.type == sinfo.type ? 1.0 : 0.0;
            double sw =
                std::max(0.0, 1.0 - std::abs(static_cast<double>(ginfo.score - sinfo.score)) / 5.0);
            type_w += tw;
            score_w += sw;
            both_w += tw * sw;
        }
    }

    const double denom = gold_total + sys_total;
    EvalReport r;
    if (denom > 0) {
        r.align_f1 = 2.0 * align_w / denom;
        r.type_f1 = 2.0 * type_w / denom;
        r.score_f1 = 2.0 * score_w / denom;
        r.type_score_f1 = 2.0 * both_w / denom;
    }
    return r;
}

}  // namespace chunkalign
