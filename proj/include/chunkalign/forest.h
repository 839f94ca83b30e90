#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chunkalign {

struct TrainingSet {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    // Ordered class list; order decides prediction tie-breaks. Left empty,
    // train_forest derives it as the sorted distinct labels.
    std::vector<int> classes;
};

struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;  // population stddev; constant columns get 1
};

// Per-feature z-scoring stats over the training rows. Throws on empty input.
NormStats fit_norm(const std::vector<std::vector<double>>& rows);
std::vector<double> apply_norm(const NormStats& norm, const std::vector<double>& x);

struct ForestHyper {
    int num_trees = 100;
    int max_depth = 12;
    int min_leaf = 2;
    double feature_fraction = 0;  // <= 0 means sqrt(d)/d, resolved at training
    std::uint64_t seed = 42;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;  // largest value routed left: x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0;  // leaf: fraction of positive rows
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double predict(const std::vector<double>& x) const;
};

// One-vs-rest forest: per class in `classes`, an ensemble voting that class
// against the rest. Scores are vote fractions in [0,1].
struct ForestModel {
    std::vector<int> classes;
    int dim = 0;
    NormStats norm;
    ForestHyper hyper;
    std::vector<std::vector<Tree>> per_class;  // [class][tree]

    std::vector<double> scores(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const;  // first class wins ties

    void save(const std::string& path) const;
    static ForestModel load(const std::string& path);
};

// Deterministic CART forest training: rows are put in a canonical order
// (sorted by features, then label) before bootstrap draws, per-tree RNG
// streams are derived from (seed, class, tree), and splits use Gini impurity
// over a per-split feature sample. Identical input and seed give
// byte-identical saved models whether trained serially or with jobs > 1.
ForestModel train_forest(const TrainingSet& data, const ForestHyper& hyper, int jobs = 1);

}  // namespace chunkalign
