#include "chunkalign/aligner.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace chunkalign {

ChunkedSentence make_chunked_sentence(std::vector<Token> tokens, std::vector<ChunkSpan> chunks) {
    const int n = static_cast<int>(tokens.size());
    int cursor = 0;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        const ChunkSpan& s = chunks[i];
        if (s.begin != cursor)
            throw std::invalid_argument("chunk " + std::to_string(i + 1) +
                                        " does not start where the previous one ended");
        if (s.end <= s.begin)
            throw std::invalid_argument("chunk " + std::to_string(i + 1) + " is empty");
        if (s.end > n)
            throw std::invalid_argument("chunk " + std::to_string(i + 1) +
                                        " extends past the last token");
        cursor = s.end;
    }
    if (cursor != n) throw std::invalid_argument("chunks do not cover all tokens");
    ChunkedSentence out;
    out.tokens = std::move(tokens);
    out.chunks = std::move(chunks);
    return out;
}

Phrase group_phrase(const ChunkedSentence& sentence, const std::vector<int>& chunk_ids) {
    std::vector<Token> toks;
    for (int id : chunk_ids) {
        if (id < 1 || id > sentence.chunk_count())
            throw std::invalid_argument("chunk id " + std::to_string(id) + " out of range");
        const ChunkSpan& s = sentence.chunk(id);
        for (int t = s.begin; t < s.end; ++t)
            toks.push_back(sentence.tokens[static_cast<std::size_t>(t)]);
    }
    return make_phrase(std::move(toks));
}

std::pair<std::vector<int>, std::vector<int>> pair_key(const CandidatePair& c) {
    return {c.s1.ids, c.s2.ids};
}

double alpha_weight(int s1_size, int s2_size, double gamma) {
    return std::pow(gamma, s1_size + s2_size - 2);
}

namespace {

std::vector<std::vector<int>> enumerate_groups(int n, int max_size) {
    std::vector<std::vector<int>> out;
    for (int i = 1; i <= n; ++i) out.push_back({i});
    if (max_size >= 2)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
    if (max_size >= 3)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int k = j + 1; k <= n; ++k) out.push_back({i, j, k});
    return out;
}

std::uint64_t group_mask(const std::vector<int>& ids) {
    std::uint64_t m = 0;
    for (int id : ids) m |= std::uint64_t{1} << (id - 1);
    return m;
}

using PairKey = std::pair<std::vector<int>, std::vector<int>>;

struct Item {
    int orig = 0;
    double weight = 0;
    std::uint64_t src_mask = 0;
    std::uint64_t tgt_mask = 0;
    int merged = 0;
    int low = 0;  // lowest source chunk the pair uses, 0-based
};

struct MaskRect {
    std::uint64_t src = 0;
    std::uint64_t tgt = 0;
    bool operator==(const MaskRect&) const = default;
};

struct MaskRectHash {
    std::size_t operator()(const MaskRect& r) const {
        std::uint64_t h = r.src * 0x9e3779b97f4a7c15ull;
        h ^= r.tgt + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h * 0xc2b2ae3d27d4eb4full);
    }
};

using RectBest = std::unordered_map<MaskRect, double, MaskRectHash>;

double rect_weight(const RectBest& best, std::uint64_t src, std::uint64_t tgt) {
    auto it = best.find(MaskRect{src, tgt});
    return it == best.end() ? -std::numeric_limits<double>::infinity() : it->second;
}

// Best total weight achievable by re-covering the item's chunks with other
// candidates that stay inside the same source/target groups. Group sizes are
// capped at two, so every such packing is one of a fixed handful of shapes.
double best_recover(const RectBest& best, const Item& it) {
    double top = rect_weight(best, it.src_mask, it.tgt_mask);
    if (it.merged == 0) return top;
    const std::uint64_t s0 = it.src_mask & (it.src_mask - 1);
    const std::uint64_t s1 = it.src_mask ^ s0;  // lowest source bit
    const std::uint64_t t0 = it.tgt_mask & (it.tgt_mask - 1);
    const std::uint64_t t1 = it.tgt_mask ^ t0;  // lowest target bit
    if (s0 == 0) {  // one source chunk, two target chunks
        top = std::max({top, rect_weight(best, s1, t1), rect_weight(best, s1, t0)});
    } else if (t0 == 0) {  // two source chunks, one target chunk
        top = std::max({top, rect_weight(best, s1, t1), rect_weight(best, s0, t1)});
    } else {  // two by two: singles, sub-merges, and both diagonal pairings
        const double a = rect_weight(best, s1, t1);
        const double b = rect_weight(best, s1, t0);
        const double c = rect_weight(best, s0, t1);
        const double d = rect_weight(best, s0, t0);
        top = std::max({top, a, b, c, d, rect_weight(best, it.src_mask, t1),
                        rect_weight(best, it.src_mask, t0), rect_weight(best, s1, it.tgt_mask),
                        rect_weight(best, s0, it.tgt_mask)});
        if (a > -1e300 && d > -1e300) top = std::max(top, a + d);
        if (b > -1e300 && c > -1e300) top = std::max(top, b + c);
    }
    return top;
}

// Exact depth-first search over compatible candidate subsets, branching on
// the lowest source chunk the remaining candidates can still use. Bounds
// count only the positive weight still reachable, so keeping zero or negative
// candidates in the pool stays correct (they can win tie-breaks but never
// raise the objective).
struct Searcher {
    const std::vector<CandidatePair>* cands = nullptr;
    std::vector<Item> items;  // sorted: lowest source chunk, then weight desc

    double best_obj = 0;
    int best_merged = 0;
    std::string best_enc;       // encoded key list of the incumbent
    std::vector<int> best_set;  // original candidate indices, key order

    std::vector<int> chosen;  // item indices along the current path
    double value = 0;
    int merged = 0;
    std::uint64_t src_used = 0;
    std::uint64_t tgt_used = 0;

    std::vector<std::vector<int>> list_pool;

    static constexpr double kSlack = 1e-12;

    // A packing's sorted key order equals the order the search discovers its
    // pairs in: pairs are found at their lowest source chunk, chunks are
    // branched in increasing order, and a key's first id is that chunk. So
    // `value` -- accumulated push by push -- IS the canonical objective (pair
    // weights summed in key order), and `path_enc` is the key list encoded as
    // "src ids, 0, tgt ids, 0" per pair; byte order matches key-list order.
    std::string path_enc;

    void consider() {
        bool better = false;
        if (value > best_obj) {
            better = true;
        } else if (value == best_obj) {
            if (merged < best_merged)
                better = true;
            else if (merged == best_merged)
                better = path_enc < best_enc;
        }
        if (!better) return;
        best_obj = value;
        best_merged = merged;
        best_enc = path_enc;
        best_set.clear();
        for (int it : chosen) best_set.push_back(items[static_cast<std::size_t>(it)].orig);
    }

    // Chunks are branched in increasing order, so (used masks, branch chunk)
    // pins down the remaining candidate list exactly. A revisit whose
    // canonical prefix cannot beat the first visit's -- lower objective, or
    // an equal one with a worse tie-break -- cannot end in a better packing,
    // because both prefixes see the same completions.
    struct StateKey {
        std::uint64_t src = 0;
        std::uint64_t tgt = 0;
        int branch = 0;
        bool operator==(const StateKey&) const = default;
    };
    struct StateKeyHash {
        std::size_t operator()(const StateKey& k) const {
            std::uint64_t h = k.src * 0x9e3779b97f4a7c15ull;
            h ^= k.tgt + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h ^= static_cast<std::uint64_t>(k.branch) + (h << 16);
            return static_cast<std::size_t>(h * 0xc2b2ae3d27d4eb4full);
        }
    };
    struct Seen {
        double obj = 0;
        int merged = 0;
        std::string enc;
    };
    std::unordered_map<StateKey, Seen, StateKeyHash> visited;

    // -> true when the arrival still has to be explored. Because both sides
    // extend with the same completions and float addition is monotone, a
    // prefix at or below the cached objective can only end up tying it, so it
    // is beaten unless it wins the downstream tie-break on merges or keys.
    bool record_visit(const StateKey& key) {
        auto [slot, fresh] = visited.try_emplace(key, Seen{value, merged, path_enc});
        if (fresh) return true;
        Seen& seen = slot->second;
        if (value < seen.obj - kSlack) return false;
        if (value > seen.obj) {
            seen = Seen{value, merged, path_enc};
            return true;
        }
        // From here the arrival sits at the cached objective or a hair below
        // it; update the cache only on an exact tie.
        const bool tie = value == seen.obj;
        if (merged != seen.merged) {
            if (merged > seen.merged) return false;
            if (tie) {
                seen.merged = merged;
                seen.enc = path_enc;
            }
            return true;
        }
        // Same merge count: the smaller key list dominates, except when one
        // list is a prefix of the other -- then pairs found later can still
        // swing the comparison either way.
        if (path_enc == seen.enc) return true;
        const bool nested = path_enc.size() < seen.enc.size()
                                ? seen.enc.compare(0, path_enc.size(), path_enc) == 0
                                : path_enc.compare(0, seen.enc.size(), seen.enc) == 0;
        if (path_enc < seen.enc) {
            if (tie) seen.enc = path_enc;
            return true;
        }
        return nested;
    }

    // Per-chunk caps over a candidate list: each still-free chunk can pick up
    // at most its best per-chunk share of any one candidate, so the smaller
    // side total caps what the list can still add to the objective.
    struct CapInfo {
        double src_cap[64] = {};
        double tgt_cap[64] = {};
        double src_sum = 0;
        double tgt_sum = 0;
        double bound() const { return std::min(src_sum, tgt_sum); }
    };

    CapInfo caps(const std::vector<int>& list) const {
        CapInfo c;
        for (int idx : list) {
            const Item& it = items[static_cast<std::size_t>(idx)];
            if (it.weight <= 0) continue;
            const double s = it.weight / std::popcount(it.src_mask);
            for (std::uint64_t m = it.src_mask; m;) {
                const int b = std::countr_zero(m);
                m &= m - 1;
                if (s > c.src_cap[b]) c.src_cap[b] = s;
            }
            const double t = it.weight / std::popcount(it.tgt_mask);
            for (std::uint64_t m = it.tgt_mask; m;) {
                const int b = std::countr_zero(m);
                m &= m - 1;
                if (t > c.tgt_cap[b]) c.tgt_cap[b] = t;
            }
        }
        for (double v : c.src_cap) c.src_sum += v;
        for (double v : c.tgt_cap) c.tgt_sum += v;
        return c;
    }

    std::vector<CapInfo> caps_pool;

    // Branch on the lowest source chunk the remaining candidates still touch:
    // either one of its candidates is in the packing, or the chunk stays
    // unaligned and every candidate using it drops out. The list is sorted by
    // lowest chunk, so the branch candidates form the run at the front and
    // everything after it survives into the child subproblem. Each packing is
    // reached along exactly one path, so the tie-break comparison sees every
    // optimum once. Caps are computed when the list is built (caps_pool) and
    // only tightened here: once a run is passed, its chunk has no candidates
    // left, so the chunk's cap leaves the source total.
    void dfs(std::size_t depth) {
        std::vector<int>& list = list_pool[depth];
        CapInfo& c = caps_pool[depth];
        std::size_t start = 0;
        while (start < list.size()) {
            if (value + c.bound() < best_obj - kSlack) return;
            const int branch_low = items[static_cast<std::size_t>(list[start])].low;
            std::size_t run_end = start;
            while (run_end < list.size() &&
                   items[static_cast<std::size_t>(list[run_end])].low == branch_low)
                ++run_end;

            for (std::size_t i = start; i < run_end; ++i) {
                const Item& it = items[static_cast<std::size_t>(list[i])];
                // The run is sorted by weight, so once the node bound cannot
                // rescue this weight it cannot rescue the rest of the run.
                if (value + it.weight + c.bound() < best_obj - kSlack) break;
                // What the rest can add once this candidate's chunks are gone.
                double src_left = c.src_sum;
                double tgt_left = c.tgt_sum;
                for (std::uint64_t m = it.src_mask; m;) {
                    src_left -= c.src_cap[std::countr_zero(m)];
                    m &= m - 1;
                }
                for (std::uint64_t m = it.tgt_mask; m;) {
                    tgt_left -= c.tgt_cap[std::countr_zero(m)];
                    m &= m - 1;
                }
                const double rest = std::max(0.0, std::min(src_left, tgt_left));
                if (value + it.weight + rest < best_obj - kSlack) continue;

                const double saved_value = value;
                const std::size_t saved_enc = path_enc.size();
                chosen.push_back(list[i]);
                value += it.weight;
                merged += it.merged;
                src_used |= it.src_mask;
                tgt_used |= it.tgt_mask;
                for (std::uint64_t m = it.src_mask; m;) {
                    path_enc.push_back(static_cast<char>(std::countr_zero(m) + 1));
                    m &= m - 1;
                }
                path_enc.push_back('\0');
                for (std::uint64_t m = it.tgt_mask; m;) {
                    path_enc.push_back(static_cast<char>(std::countr_zero(m) + 1));
                    m &= m - 1;
                }
                path_enc.push_back('\0');

                if (record_visit(StateKey{src_used, tgt_used, branch_low})) {
                    consider();
                    std::vector<int>& child = list_pool[depth + 1];
                    child.clear();
                    for (std::size_t j = run_end; j < list.size(); ++j) {
                        const Item& o = items[static_cast<std::size_t>(list[j])];
                        if ((o.src_mask & src_used) == 0 && (o.tgt_mask & tgt_used) == 0)
                            child.push_back(list[j]);
                    }
                    caps_pool[depth + 1] = caps(child);
                    dfs(depth + 1);
                }

                chosen.pop_back();
                value = saved_value;
                merged -= it.merged;
                src_used &= ~it.src_mask;
                tgt_used &= ~it.tgt_mask;
                path_enc.resize(saved_enc);
            }

            // Leave the branch chunk unaligned and move on to the next one.
            c.src_sum -= c.src_cap[branch_low];
            c.src_cap[branch_low] = 0;
            start = run_end;
        }
    }
};

}  // namespace

AlignmentSolution solve_ilp(const std::vector<CandidatePair>& candidates, int source_chunks,
                            int target_chunks) {
    if (source_chunks < 0 || source_chunks > 64 || target_chunks < 0 || target_chunks > 64)
        throw std::invalid_argument("chunk counts must be between 0 and 64");

    Searcher s;
    s.cands = &candidates;
    s.items.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const CandidatePair& c = candidates[i];
        if (c.s1.ids.empty() || c.s2.ids.empty())
            throw std::invalid_argument("candidate with an empty chunk group");
        for (int id : c.s1.ids)
            if (id < 1 || id > source_chunks)
                throw std::invalid_argument("source chunk id " + std::to_string(id) +
                                            " out of range");
        for (int id : c.s2.ids)
            if (id < 1 || id > target_chunks)
                throw std::invalid_argument("target chunk id " + std::to_string(id) +
                                            " out of range");
        Item it;
        it.orig = static_cast<int>(i);
        it.weight = c.weight;
        it.src_mask = group_mask(c.s1.ids);
        it.tgt_mask = group_mask(c.s2.ids);
        it.merged = static_cast<int>(c.s1.ids.size() + c.s2.ids.size()) - 2;
        it.low = std::countr_zero(it.src_mask);
        s.items.push_back(it);
    }

    // Drop candidates whose chunks can be re-covered by other candidates with
    // strictly more weight: such a candidate can appear only in packings that
    // lose outright, never in the reported solution or any tie for it. The
    // margin keeps near-equal alternatives in play so tie-breaking still sees
    // them.
    {
        RectBest best;
        for (const Item& it : s.items) {
            auto [slot, fresh] = best.try_emplace(MaskRect{it.src_mask, it.tgt_mask}, it.weight);
            if (!fresh && it.weight > slot->second) slot->second = it.weight;
        }
        std::size_t keep = 0;
        for (std::size_t i = 0; i < s.items.size(); ++i) {
            const Item& it = s.items[i];
            const double rival = best_recover(best, it);
            const double margin = 1e-9 + 1e-12 * (std::abs(it.weight) + std::abs(rival));
            if (rival > it.weight + margin) continue;
            s.items[keep++] = it;
        }
        s.items.resize(keep);
    }

    std::sort(s.items.begin(), s.items.end(), [&](const Item& a, const Item& b) {
        if (a.low != b.low) return a.low < b.low;
        if (a.weight != b.weight) return a.weight > b.weight;
        PairKey ka = pair_key(candidates[static_cast<std::size_t>(a.orig)]);
        PairKey kb = pair_key(candidates[static_cast<std::size_t>(b.orig)]);
        if (ka != kb) return ka < kb;
        return a.orig < b.orig;
    });

    // Depth never exceeds one pair per source chunk (each uses at least one).
    s.list_pool.resize(66);
    s.caps_pool.resize(66);
    s.list_pool[0].resize(s.items.size());
    for (std::size_t i = 0; i < s.items.size(); ++i) s.list_pool[0][i] = static_cast<int>(i);
    s.caps_pool[0] = s.caps(s.list_pool[0]);

    // Greedy warm start: a strong incumbent lets the first bound checks bite.
    std::vector<int> by_weight(s.items.size());
    for (std::size_t i = 0; i < by_weight.size(); ++i) by_weight[i] = static_cast<int>(i);
    std::sort(by_weight.begin(), by_weight.end(), [&](int a, int b) {
        const Item& ia = s.items[static_cast<std::size_t>(a)];
        const Item& ib = s.items[static_cast<std::size_t>(b)];
        if (ia.weight != ib.weight) return ia.weight > ib.weight;
        return a < b;
    });
    std::vector<int> picked;
    for (int i : by_weight) {
        const Item& it = s.items[static_cast<std::size_t>(i)];
        if (it.weight <= 0) continue;
        if ((it.src_mask & s.src_used) || (it.tgt_mask & s.tgt_used)) continue;
        picked.push_back(i);
        s.src_used |= it.src_mask;
        s.tgt_used |= it.tgt_mask;
    }
    // Feed the incumbent through the same canonical accumulation the search
    // uses: pairs in key order, which for disjoint pairs is lowest-chunk order.
    std::sort(picked.begin(), picked.end(), [&](int a, int b) {
        return s.items[static_cast<std::size_t>(a)].low <
               s.items[static_cast<std::size_t>(b)].low;
    });
    for (int i : picked) {
        const Item& it = s.items[static_cast<std::size_t>(i)];
        s.chosen.push_back(i);
        s.value += it.weight;
        s.merged += it.merged;
        for (std::uint64_t m = it.src_mask; m;) {
            s.path_enc.push_back(static_cast<char>(std::countr_zero(m) + 1));
            m &= m - 1;
        }
        s.path_enc.push_back('\0');
        for (std::uint64_t m = it.tgt_mask; m;) {
            s.path_enc.push_back(static_cast<char>(std::countr_zero(m) + 1));
            m &= m - 1;
        }
        s.path_enc.push_back('\0');
    }
    s.consider();
    s.chosen.clear();
    s.value = 0;
    s.merged = 0;
    s.src_used = 0;
    s.tgt_used = 0;
    s.path_enc.clear();

    s.dfs(0);

    AlignmentSolution out;
    out.objective = s.best_obj;
    std::uint64_t src_covered = 0;
    std::uint64_t tgt_covered = 0;
    for (int orig : s.best_set) {
        const CandidatePair& c = candidates[static_cast<std::size_t>(orig)];
        out.chosen.push_back(c);
        src_covered |= group_mask(c.s1.ids);
        tgt_covered |= group_mask(c.s2.ids);
    }
    for (int id = 1; id <= source_chunks; ++id)
        if (!(src_covered >> (id - 1) & 1)) out.unaligned_source.push_back(id);
    for (int id = 1; id <= target_chunks; ++id)
        if (!(tgt_covered >> (id - 1) & 1)) out.unaligned_target.push_back(id);
    return out;
}

std::vector<CandidatePair> build_candidates(const ChunkedSentence& src,
                                            const ChunkedSentence& tgt, const Resources& res,
                                            const AlignConfig& cfg) {
    if (cfg.max_group_size < 1 || cfg.max_group_size > 3)
        throw std::invalid_argument("max_group_size must be 1, 2 or 3");
    std::vector<std::vector<int>> src_groups = enumerate_groups(src.chunk_count(), cfg.max_group_size);
    std::vector<std::vector<int>> tgt_groups = enumerate_groups(tgt.chunk_count(), cfg.max_group_size);

    std::vector<SimProfile> src_prof;
    src_prof.reserve(src_groups.size());
    for (const auto& g : src_groups) src_prof.push_back(make_sim_profile(group_phrase(src, g), res));
    std::vector<SimProfile> tgt_prof;
    tgt_prof.reserve(tgt_groups.size());
    for (const auto& g : tgt_groups) tgt_prof.push_back(make_sim_profile(group_phrase(tgt, g), res));

    std::vector<CandidatePair> out;
    out.reserve(src_groups.size() * tgt_groups.size());
    for (std::size_t a = 0; a < src_groups.size(); ++a) {
        for (std::size_t b = 0; b < tgt_groups.size(); ++b) {
            CandidatePair c;
            c.s1 = {Side::source, src_groups[a]};
            c.s2 = {Side::target, tgt_groups[b]};
            c.sim = sim_score(src_prof[a], tgt_prof[b]);
            c.alpha = alpha_weight(static_cast<int>(src_groups[a].size()),
                                   static_cast<int>(tgt_groups[b].size()), cfg.gamma);
            c.weight = c.alpha * c.sim;
            if (c.weight > cfg.prune_threshold) out.push_back(std::move(c));
        }
    }
    return out;
}

AlignmentSolution align(const ChunkedSentence& src, const ChunkedSentence& tgt,
                        const Resources& res, const AlignConfig& cfg) {
    std::vector<CandidatePair> cands = build_candidates(src, tgt, res, cfg);
    return solve_ilp(cands, src.chunk_count(), tgt.chunk_count());
}

}  // namespace chunkalign
