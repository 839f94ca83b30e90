#pragma once

#include <string>

#include "chunkalign/aligner.h"
#include "chunkalign/forest.h"
#include "chunkalign/lexicon.h"

namespace chunkalign {

// Flat key=value run configuration. Relative resource paths are resolved
// against the config file's directory. Every key has a usable default, so an
// empty config is valid (no lexical resources, surface features only).
struct RunConfig {
    std::string normalization_map;
    std::string synonyms;
    std::string similar;
    std::string antonyms;
    std::string hypernyms;
    std::string hyponyms;
    std::string taxonomy;
    std::string paraphrases;
    std::string embeddings;

    double gamma = 1.1;
    double prune_threshold = 0.0;
    int max_group_size = 2;
    int hash_dim = 512;
    ForestHyper forest;
    int jobs = 0;  // 0 = one worker per processor
    bool exclude_punct = false;

    static RunConfig from_file(const std::string& path);

    // Range checks plus existence of every referenced file.
    void validate() const;

    AlignConfig align_config() const { return {gamma, prune_threshold, max_group_size}; }
};

Resources load_resources(const RunConfig& cfg);

}  // namespace chunkalign
