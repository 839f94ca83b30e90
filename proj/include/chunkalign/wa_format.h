#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chunkalign/classify.h"

namespace chunkalign {

// One `<sentence>` entry of a wa alignment file.
struct WaEntry {
    std::string id;
    std::string status;
    std::string source_text;  // raw sentence comment lines
    std::string target_text;
    ChunkedSentence source;
    ChunkedSentence target;
    std::vector<LabeledPair> pairs;

    bool operator==(const WaEntry&) const = default;
};

struct WaDocument {
    std::vector<WaEntry> entries;
};

// Bracket notation: "[ Former Nazi guard ] [ dead ]" -> 2 chunks. Errors
// carry the 1-based column of the offending character.
ChunkedSentence parse_chunks(const std::string& line,
                             const NormalizationMap& norm = NormalizationMap());

// Reads a wa file. Alignment lines carry 1-based token indices (a lone 0
// marks an empty side); chunk boundaries are reconstructed as the maximal
// contiguous token runs of each record side. Validates per-side totality:
// every token is covered by exactly one record. Errors name the sentence id
// and line number.
WaDocument parse_wa(const std::string& path, const NormalizationMap& norm = NormalizationMap());
WaDocument parse_wa_stream(std::istream& in, const std::string& filename,
                           const NormalizationMap& norm = NormalizationMap());

// Writes entries back in the same grammar. Scores of 0 are written as NIL;
// an empty record side is written as index 0 with text "-not aligned-".
// Validates totality before writing.
void write_wa(const WaDocument& doc, const std::string& path);
void write_wa_stream(const WaDocument& doc, std::ostream& out);

// Copies of the per-entry sentence/label data, for the training APIs.
std::vector<LabeledSentencePair> labeled_pairs(const WaDocument& doc);

}  // namespace chunkalign
