#pragma once

#include <string>
#include <vector>

#include "chunkalign/aligner.h"
#include "chunkalign/forest.h"

namespace chunkalign {

// Alignment relation labels. NOALI and ALIC are structural: they appear in
// gold data for unaligned chunks and interpunction, are never predicted, and
// NOALI always carries score 0.
enum class TypeLabel {
    EQUI,
    OPPO,
    SPE1,
    SPE2,
    SIMI,
    REL,
    NOALI,
    ALIC,
};

const char* type_name(TypeLabel t);
TypeLabel type_from_name(const std::string& name);

// One alignment record: chunk ids per side (one side may be empty for
// NOALI/ALIC records), a relation type and a 0-5 score.
struct LabeledPair {
    std::vector<int> src_chunks;
    std::vector<int> tgt_chunks;
    TypeLabel type = TypeLabel::NOALI;
    int score = 0;

    bool operator==(const LabeledPair&) const = default;
};

struct LabeledSentencePair {
    ChunkedSentence source;
    ChunkedSentence target;
    std::vector<LabeledPair> pairs;
};

// The classifier input: the eight scalar features that carry type signal
// (word overlap, synonym/antonym overlap, taxonomy path sum, negation flag,
// edit similarity, paraphrase sum, length difference) followed by the hashed
// unigram+bigram block. Number flag and the two cosine features are dropped.
std::vector<double> select_classifier_features(const FeatureVector& v);

// select_classifier_features over the concatenated chunk-group phrases.
std::vector<double> pair_features(const ChunkedSentence& src, const ChunkedSentence& tgt,
                                  const std::vector<int>& src_ids,
                                  const std::vector<int>& tgt_ids, const Resources& res,
                                  int hash_dim);

// Records usable as training rows: aligned on both sides and carrying a real
// relation type (not NOALI/ALIC) resp. a 1-5 score.
bool usable_for_type_training(const LabeledPair& p);
bool usable_for_score_training(const LabeledPair& p);

// Train the relation-type classifier on gold alignments. NOALI/ALIC records
// and empty-sided records contribute nothing. Class order follows TypeLabel
// order, so prediction ties resolve toward EQUI.
ForestModel train_type_model(const std::vector<LabeledSentencePair>& gold, const Resources& res,
                             int hash_dim, const ForestHyper& hyper, int jobs = 1);

// Train the 1-5 score classifier; score-0 (unaligned) records are excluded.
ForestModel train_score_model(const std::vector<LabeledSentencePair>& gold, const Resources& res,
                              int hash_dim, const ForestHyper& hyper, int jobs = 1);

// Predict a type and score for every chosen pair of the solution and emit
// NOALI/0 records for unaligned chunks. EQUI predictions are forced to
// score 5.
std::vector<LabeledPair> label_solution(const AlignmentSolution& sol, const ChunkedSentence& src,
                                        const ChunkedSentence& tgt, const ForestModel& type_model,
                                        const ForestModel& score_model, const Resources& res,
                                        int hash_dim);

}  // namespace chunkalign
