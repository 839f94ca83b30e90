#include "chunkalign/classify.h"

#include <array>
#include <stdexcept>

namespace chunkalign {

namespace {

constexpr std::array<const char*, 8> kTypeNames = {"EQUI", "OPPO", "SPE1", "SPE2",
                                                   "SIMI", "REL",  "NOALI", "ALIC"};

}  // namespace

bool usable_for_type_training(const LabeledPair& p) {
    return p.type != TypeLabel::NOALI && p.type != TypeLabel::ALIC && !p.src_chunks.empty() &&
           !p.tgt_chunks.empty();
}

bool usable_for_score_training(const LabeledPair& p) {
    return p.score >= 1 && p.score <= 5 && !p.src_chunks.empty() && !p.tgt_chunks.empty();
}

const char* type_name(TypeLabel t) { return kTypeNames[static_cast<std::size_t>(t)]; }

TypeLabel type_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kTypeNames.size(); ++i)
        if (name == kTypeNames[i]) return static_cast<TypeLabel>(i);
    throw std::invalid_argument("unknown alignment type \"" + name + "\"");
}

std::vector<double> select_classifier_features(const FeatureVector& v) {
    std::vector<double> out;
    out.reserve(8 + v.ngram_block.size());
    out.push_back(v.common_word_ratio);
    out.push_back(v.synonym_overlap);
    out.push_back(v.antonym_overlap);
    out.push_back(v.path_similarity_sum);
    out.push_back(v.negation_mismatch);
    out.push_back(v.edit_similarity);
    out.push_back(v.paraphrase_sum);
    out.push_back(v.length_difference);
    out.insert(out.end(), v.ngram_block.begin(), v.ngram_block.end());
    return out;
}

std::vector<double> pair_features(const ChunkedSentence& src, const ChunkedSentence& tgt,
                                  const std::vector<int>& src_ids,
                                  const std::vector<int>& tgt_ids, const Resources& res,
                                  int hash_dim) {
    Phrase p1 = group_phrase(src, src_ids);
    Phrase p2 = group_phrase(tgt, tgt_ids);
    return select_classifier_features(classifier_vector(p1, p2, res, hash_dim));
}

namespace {

ForestModel train_pair_model(const std::vector<LabeledSentencePair>& gold, const Resources& res,
                             int hash_dim, const ForestHyper& hyper, int jobs, bool score_model) {
    TrainingSet data;
    for (const LabeledSentencePair& sp : gold) {
        for (const LabeledPair& p : sp.pairs) {
            bool usable =
                score_model ? usable_for_score_training(p) : usable_for_type_training(p);
            if (!usable) continue;
            data.rows.push_back(
                pair_features(sp.source, sp.target, p.src_chunks, p.tgt_chunks, res, hash_dim));
            data.labels.push_back(score_model ? p.score : static_cast<int>(p.type));
        }
    }
    if (data.rows.empty())
        throw std::invalid_argument("no aligned gold pairs to train on");

    // Fix class order up front: TypeLabel order (EQUI first) or scores 1..5,
    // restricted to classes actually present.
    std::vector<int> candidates;
    if (score_model)
        candidates = {1, 2, 3, 4, 5};
    else
        for (TypeLabel t : {TypeLabel::EQUI, TypeLabel::OPPO, TypeLabel::SPE1, TypeLabel::SPE2,
                            TypeLabel::SIMI, TypeLabel::REL})
            candidates.push_back(static_cast<int>(t));
    for (int c : candidates)
        for (int l : data.labels)
            if (l == c) {
                data.classes.push_back(c);
                break;
            }

    return train_forest(data, hyper, jobs);
}

}  // namespace

ForestModel train_type_model(const std::vector<LabeledSentencePair>& gold, const Resources& res,
                             int hash_dim, const ForestHyper& hyper, int jobs) {
    return train_pair_model(gold, res, hash_dim, hyper, jobs, false);
}

ForestModel train_score_model(const std::vector<LabeledSentencePair>& gold, const Resources& res,
                              int hash_dim, const ForestHyper& hyper, int jobs) {
    return train_pair_model(gold, res, hash_dim, hyper, jobs, true);
}

std::vector<LabeledPair> label_solution(const AlignmentSolution& sol, const ChunkedSentence& src,
                                        const ChunkedSentence& tgt, const ForestModel& type_model,
                                        const ForestModel& score_model, const Resources& res,
                                        int hash_dim) {
    std::vector<LabeledPair> out;
    out.reserve(sol.chosen.size() + sol.unaligned_source.size() + sol.unaligned_target.size());
    for (const CandidatePair& c : sol.chosen) {
        std::vector<double> x = pair_features(src, tgt, c.s1.ids, c.s2.ids, res, hash_dim);
        LabeledPair p;
        p.src_chunks = c.s1.ids;
        p.tgt_chunks = c.s2.ids;
        p.type = static_cast<TypeLabel>(type_model.predict(x));
        p.score = score_model.predict(x);
        if (p.type == TypeLabel::EQUI) p.score = 5;
        out.push_back(std::move(p));
    }
    for (int id : sol.unaligned_source)
        out.push_back({{id}, {}, TypeLabel::NOALI, 0});
    for (int id : sol.unaligned_target)
        out.push_back({{}, {id}, TypeLabel::NOALI, 0});
    return out;
}

}  // namespace chunkalign
