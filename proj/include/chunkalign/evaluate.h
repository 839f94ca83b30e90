#pragma once

#include "chunkalign/wa_format.h"

namespace chunkalign {

// Identifies the scoring semantics below, printed with every report so the
// numbers are never mistaken for another scorer's output.
inline constexpr const char* kMetricTag = "tokenpair-v1";

struct EvalOptions {
    bool exclude_punct = false;  // drop token pairs touching punctuation
};

struct EvalReport {
    double align_f1 = 0;
    double type_f1 = 0;
    double score_f1 = 0;
    double type_score_f1 = 0;
};

// Micro-averaged token-pair F1 over all entries. Every non-NOALI record
// contributes the cross product of its source and target token indices; a
// token pair matched between gold and system earns alignment credit 1, type
// credit 1 when the covering records agree on the type, score credit
// max(0, 1 - |score difference|/5), and combined credit type*score.
// Throws when the two documents do not cover the same entry ids.
EvalReport evaluate(const WaDocument& gold, const WaDocument& sys,
                    const EvalOptions& opts = {});

}  // namespace chunkalign
