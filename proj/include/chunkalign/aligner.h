#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chunkalign/features.h"
#include "chunkalign/lexicon.h"
#include "chunkalign/text.h"

namespace chunkalign {

struct ChunkSpan {
    int begin = 0;  // token index, half-open
    int end = 0;
    bool operator==(const ChunkSpan&) const = default;
};

/// A tokenized sentence partitioned into ordered contiguous chunks.
/// Chunk ids are 1-based.
struct ChunkedSentence {
    std::vector<Token> tokens;
    std::vector<ChunkSpan> chunks;

    int chunk_count() const { return static_cast<int>(chunks.size()); }
    const ChunkSpan& chunk(int id) const { return chunks[static_cast<std::size_t>(id - 1)]; }

    bool operator==(const ChunkedSentence&) const = default;
};

// Validates the partition: spans sorted, contiguous, non-empty, covering all
// tokens. Throws on violation.
ChunkedSentence make_chunked_sentence(std::vector<Token> tokens, std::vector<ChunkSpan> chunks);

// Concatenation of the given chunks' tokens, ascending chunk id.
Phrase group_phrase(const ChunkedSentence& sentence, const std::vector<int>& chunk_ids);

enum class Side { source, target };

struct ChunkGroup {
    Side side = Side::source;
    std::vector<int> ids;  // sorted, non-empty

    bool operator==(const ChunkGroup&) const = default;
};

struct CandidatePair {
    ChunkGroup s1;  // source side
    ChunkGroup s2;  // target side
    double sim = 0;
    double alpha = 0;
    double weight = 0;  // alpha * sim
};

// Key used for all deterministic orderings of candidate pairs.
std::pair<std::vector<int>, std::vector<int>> pair_key(const CandidatePair& c);

struct AlignmentSolution {
    std::vector<CandidatePair> chosen;  // sorted by pair_key
    double objective = 0;
    std::vector<int> unaligned_source;
    std::vector<int> unaligned_target;
};

struct AlignConfig {
    double gamma = 1.1;
    double prune_threshold = 0.0;  // candidates with weight <= this are dropped
    int max_group_size = 2;
};

// gamma^(s1_size + s2_size - 2): 1 for single-single alignments, growing
// with group size so merged alignments can compete with stacked singles.
double alpha_weight(int s1_size, int s2_size, double gamma);

// All (source group, target group) pairs over singletons and small subsets,
// scored and weighted. Group enumeration order: singletons ascending, then
// two-subsets in lexicographic order (then three-subsets if allowed).
std::vector<CandidatePair> build_candidates(const ChunkedSentence& src,
                                            const ChunkedSentence& tgt, const Resources& res,
                                            const AlignConfig& cfg);

// Exact maximum-weight selection subject to each chunk appearing in at most
// one chosen pair per side. Ties are broken by fewest merged chunks, then by
// lexicographically smallest sorted pair-key list. Branch and bound; the
// returned objective is the true optimum.
AlignmentSolution solve_ilp(const std::vector<CandidatePair>& candidates, int source_chunks,
                            int target_chunks);

// build_candidates + solve_ilp, with unaligned chunks recorded.
AlignmentSolution align(const ChunkedSentence& src, const ChunkedSentence& tgt,
                        const Resources& res, const AlignConfig& cfg);

}  // namespace chunkalign
