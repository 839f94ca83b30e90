#include "chunkalign/commands.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

#include "chunkalign/classify.h"
#include "chunkalign/parallel.h"
#include "chunkalign/wa_format.h"

namespace chunkalign {

namespace {

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string format4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string format_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<ChunkedSentence> read_chunk_file(const std::string& path,
                                             const NormalizationMap& norm) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<ChunkedSentence> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(parse_chunks(line, norm));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<LabeledPair> default_labels(const AlignmentSolution& sol) {
    std::vector<LabeledPair> out;
    out.reserve(sol.chosen.size() + sol.unaligned_source.size() + sol.unaligned_target.size());
    for (const CandidatePair& c : sol.chosen)
        out.push_back({c.s1.ids, c.s2.ids, TypeLabel::SIMI, 3});
    for (int id : sol.unaligned_source) out.push_back({{id}, {}, TypeLabel::NOALI, 0});
    for (int id : sol.unaligned_target) out.push_back({{}, {id}, TypeLabel::NOALI, 0});
    return out;
}

}  // namespace

void cmd_align(const RunConfig& cfg, const std::string& source_file,
               const std::string& target_file, const std::string& type_model_path,
               const std::string& score_model_path, const std::string& out_path) {
    if (type_model_path.empty() != score_model_path.empty())
        throw std::invalid_argument("provide both --type-model and --score-model, or neither");
    const bool with_models = !type_model_path.empty();
    ForestModel type_model, score_model;
    if (with_models) {
        type_model = ForestModel::load(type_model_path);
        score_model = ForestModel::load(score_model_path);
    } else {
        std::cerr << "no models given; labeling every aligned pair SIMI with score 3\n";
    }

    Resources res = load_resources(cfg);
    std::vector<ChunkedSentence> sources = read_chunk_file(source_file, res.norm);
    std::vector<ChunkedSentence> targets = read_chunk_file(target_file, res.norm);
    if (sources.size() != targets.size())
        throw std::invalid_argument(source_file + " has " + std::to_string(sources.size()) +
                                    " sentences but " + target_file + " has " +
                                    std::to_string(targets.size()));

    WaDocument doc;
    doc.entries.resize(sources.size());
    const AlignConfig acfg = cfg.align_config();
    parallel_for(static_cast<int>(sources.size()), effective_jobs(cfg.jobs), [&](int i) {
        const std::size_t at = static_cast<std::size_t>(i);
        AlignmentSolution sol = align(sources[at], targets[at], res, acfg);
        WaEntry& entry = doc.entries[at];
        entry.id = std::to_string(i + 1);
        entry.source = sources[at];
        entry.target = targets[at];
        entry.pairs = with_models
                          ? label_solution(sol, sources[at], targets[at], type_model, score_model,
                                           res, cfg.hash_dim)
                          : default_labels(sol);
    });
    write_wa(doc, out_path);
    std::cerr << "aligned " << doc.entries.size() << " sentence pairs -> " << out_path << "\n";
}

void cmd_train(const RunConfig& cfg, const std::vector<std::string>& gold_files,
               const std::string& type_model_out, const std::string& score_model_out) {
    if (gold_files.empty()) throw std::invalid_argument("no gold files given");
    Resources res = load_resources(cfg);
    std::vector<LabeledSentencePair> gold;
    for (const std::string& path : gold_files) {
        WaDocument doc = parse_wa(path, res.norm);
        std::vector<LabeledSentencePair> part = labeled_pairs(doc);
        gold.insert(gold.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
    }

    std::map<std::string, int> type_counts;
    std::map<int, int> score_counts;
    for (const LabeledSentencePair& sp : gold)
        for (const LabeledPair& p : sp.pairs) {
            if (usable_for_type_training(p)) ++type_counts[type_name(p.type)];
            if (usable_for_score_training(p)) ++score_counts[p.score];
        }
    std::cerr << "type rows:";
    for (const auto& [name, n] : type_counts) std::cerr << ' ' << name << '=' << n;
    std::cerr << "\nscore rows:";
    for (const auto& [score, n] : score_counts) std::cerr << ' ' << score << '=' << n;
    std::cerr << "\n";

    const int jobs = effective_jobs(cfg.jobs);
    ForestModel type_model = train_type_model(gold, res, cfg.hash_dim, cfg.forest, jobs);
    type_model.save(type_model_out);
    std::cerr << "wrote " << type_model_out << "\n";
    ForestModel score_model = train_score_model(gold, res, cfg.hash_dim, cfg.forest, jobs);
    score_model.save(score_model_out);
    std::cerr << "wrote " << score_model_out << "\n";
}

double cmd_gridsearch(const RunConfig& cfg, const std::string& dev_gold_file,
                      const std::vector<double>& gamma_grid, std::ostream& report) {
    if (gamma_grid.empty()) throw std::invalid_argument("gamma grid is empty");
    Resources res = load_resources(cfg);
    WaDocument gold = parse_wa(dev_gold_file, res.norm);
    if (gold.entries.empty()) throw std::invalid_argument(dev_gold_file + " has no sentences");

    std::vector<double> grid = gamma_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const int jobs = effective_jobs(cfg.jobs);
    double best_gamma = grid.front();
    double best_f1 = -1;
    for (double gamma : grid) {
        if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
        AlignConfig acfg = cfg.align_config();
        acfg.gamma = gamma;
        WaDocument sys;
        sys.entries = gold.entries;
        parallel_for(static_cast<int>(sys.entries.size()), jobs, [&](int i) {
            WaEntry& entry = sys.entries[static_cast<std::size_t>(i)];
            AlignmentSolution sol = align(entry.source, entry.target, res, acfg);
            entry.pairs = default_labels(sol);
        });
        EvalReport r = evaluate(gold, sys, {cfg.exclude_punct});
        report << "gamma=" << format_num(gamma) << " align_f1=" << format4(r.align_f1) << "\n";
        if (r.align_f1 > best_f1) {
            best_f1 = r.align_f1;
            best_gamma = gamma;
        }
    }
    report << "best gamma=" << format_num(best_gamma) << "\n";
    return best_gamma;
}

EvalReport cmd_eval(const RunConfig& cfg, const std::string& gold_file,
                    const std::string& sys_file, std::ostream& out) {
    WaDocument gold = parse_wa(gold_file);
    WaDocument sys = parse_wa(sys_file);
    EvalReport r = evaluate(gold, sys, {cfg.exclude_punct});
    out << "metric=" << kMetricTag << "\n";
    out << format4(r.align_f1) << ' ' << format4(r.type_f1) << ' ' << format4(r.score_f1) << ' '
        << format4(r.type_score_f1) << "\n";
    return r;
}

}  // namespace chunkalign
