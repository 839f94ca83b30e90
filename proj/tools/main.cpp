#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chunkalign/commands.h"

using namespace chunkalign;

namespace {

struct CommonArgs {
    std::string config;
    double gamma = 0;
    std::uint64_t seed = 0;
    int jobs = 0;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;

    void attach(CLI::App* cmd, bool with_gamma = true) {
        cmd->add_option("--config", config, "run configuration file")->check(CLI::ExistingFile);
        if (with_gamma)
            gamma_opt = cmd->add_option("--gamma", gamma, "override the group-size weight base");
        seed_opt = cmd->add_option("--seed", seed, "override the training seed");
        jobs_opt = cmd->add_option("--jobs", jobs, "worker threads (0 = all processors)");
    }

    RunConfig load() const {
        RunConfig cfg = config.empty() ? RunConfig{} : RunConfig::from_file(config);
        if (gamma_opt && gamma_opt->count()) cfg.gamma = gamma;
        if (seed_opt->count()) cfg.forest.seed = seed;
        if (jobs_opt->count()) cfg.jobs = jobs;
        cfg.validate();
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chunk-level monolingual alignment toolkit"};
    app.require_subcommand(1);

    CLI::App* align_cmd =
        app.add_subcommand("align", "align two bracket-chunked sentence files into a wa file");
    CommonArgs align_common;
    std::string align_source, align_target, align_type_model, align_score_model, align_out;
    align_cmd->add_option("source", align_source, "source sentences, one [ chunk ] line each")
        ->required()
        ->check(CLI::ExistingFile);
    align_cmd->add_option("target", align_target, "target sentences, same line count")
        ->required()
        ->check(CLI::ExistingFile);
    align_common.attach(align_cmd);
    align_cmd->add_option("--type-model", align_type_model, "trained relation-type model")
        ->check(CLI::ExistingFile);
    align_cmd->add_option("--score-model", align_score_model, "trained score model")
        ->check(CLI::ExistingFile);
    align_cmd->add_option("--out", align_out, "output wa file")->required();

    CLI::App* train_cmd =
        app.add_subcommand("train", "train type and score models from gold wa files");
    CommonArgs train_common;
    std::vector<std::string> train_gold;
    std::string train_type_out, train_score_out;
    train_cmd->add_option("gold", train_gold, "gold wa files (unioned)")
        ->required()
        ->check(CLI::ExistingFile);
    train_common.attach(train_cmd, /*with_gamma=*/false);
    train_cmd->add_option("--type-model", train_type_out, "where to write the type model")
        ->required();
    train_cmd->add_option("--score-model", train_score_out, "where to write the score model")
        ->required();

    CLI::App* grid_cmd =
        app.add_subcommand("gridsearch", "pick gamma by alignment F1 on a dev gold wa file");
    CommonArgs grid_common;
    std::string grid_dev;
    std::vector<double> grid_values;
    grid_cmd->add_option("dev", grid_dev, "dev gold wa file")->required()->check(CLI::ExistingFile);
    grid_common.attach(grid_cmd, /*with_gamma=*/false);
    grid_cmd->add_option("--gamma", grid_values, "gamma values to try")->expected(-1)->required();

    CLI::App* eval_cmd = app.add_subcommand("eval", "score a system wa file against gold");
    CommonArgs eval_common;
    std::string eval_gold, eval_sys;
    eval_cmd->add_option("gold", eval_gold, "gold wa file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("system", eval_sys, "system wa file")
        ->required()
        ->check(CLI::ExistingFile);
    eval_common.attach(eval_cmd, /*with_gamma=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (align_cmd->parsed()) {
            cmd_align(align_common.load(), align_source, align_target, align_type_model,
                      align_score_model, align_out);
        } else if (train_cmd->parsed()) {
            cmd_train(train_common.load(), train_gold, train_type_out, train_score_out);
        } else if (grid_cmd->parsed()) {
            cmd_gridsearch(grid_common.load(), grid_dev, grid_values, std::cout);
        } else if (eval_cmd->parsed()) {
            cmd_eval(eval_common.load(), eval_gold, eval_sys, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
