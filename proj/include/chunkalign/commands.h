#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chunkalign/config.h"
#include "chunkalign/evaluate.h"

namespace chunkalign {

// Subcommand bodies behind the CLI. They throw on bad input; the CLI turns
// that into a nonzero exit. Progress/warnings go to stderr, results to files
// or the given stream.

// Aligns per-line bracket-chunked sentence files and writes a wa file. When
// both model paths are empty the run is alignment-only: pairs come out
// SIMI/3 (with a warning on stderr).
void cmd_align(const RunConfig& cfg, const std::string& source_file,
               const std::string& target_file, const std::string& type_model_path,
               const std::string& score_model_path, const std::string& out_path);

// Trains type and score models on the union of the gold wa files and saves
// them. Prints the training class distribution to stderr.
void cmd_train(const RunConfig& cfg, const std::vector<std::string>& gold_files,
               const std::string& type_model_out, const std::string& score_model_out);

// Re-aligns the dev gold under every gamma in the grid and reports alignment
// F1 per value. Returns the best gamma; ties go to the smallest.
double cmd_gridsearch(const RunConfig& cfg, const std::string& dev_gold_file,
                      const std::vector<double>& gamma_grid, std::ostream& report);

// Evaluates a system wa file against gold and prints the metric tag plus the
// four F1 numbers (align, type, score, type+score) to 4 decimal places.
EvalReport cmd_eval(const RunConfig& cfg, const std::string& gold_file,
                    const std::string& sys_file, std::ostream& out);

}  // namespace chunkalign
