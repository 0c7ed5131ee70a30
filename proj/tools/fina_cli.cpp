// Command-line front end: closed-loop simulation of shared-setpoint
// strategies, multi-strategy comparisons, schedule generation, and summary
// recomputation from existing traces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fina/config.hpp"
#include "fina/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> strategy;
    std::optional<int> samples;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<std::string> candidate_mode;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--seed", o.seed, "master seed (overrides config)");
    cmd->add_option("--samples", o.samples, "number of control periods");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--format", o.format, "output format: csv|json|both");
    cmd->add_option("--candidate-mode", o.candidate_mode, "union or grid:<step>");
}

fina::ExperimentConfig make_config(const CommonOpts& o) {
    fina::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = fina::load_config(o.config_path);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.strategy) cfg.strategy = fina::strategy_from_string(*o.strategy);
    if (o.samples) cfg.samples = *o.samples;
    if (o.out_dir) cfg.output.dir = *o.out_dir;
    if (o.format) cfg.output.format = *o.format;
    if (o.candidate_mode) cfg.candidate_mode = fina::CandidateMode::parse(*o.candidate_mode);
    cfg.validate();
    return cfg;
}

void print_summary(const fina::ComparisonReport& report) {
    std::cout << fina::summary_json(report).dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FinA fairness-in-adverse-effects smart-home simulation harness"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    auto* sim = app.add_subcommand("simulate", "run one strategy closed-loop");
    add_common(sim, sim_opts);
    sim->add_option("--strategy", sim_opts.strategy, "strategy name");

    CommonOpts cmp_opts;
    std::vector<std::string> cmp_strategies;
    auto* cmp = app.add_subcommand("compare", "run several strategies on identical schedules");
    add_common(cmp, cmp_opts);
    cmp->add_option("--strategies", cmp_strategies,
                    "strategies to compare (default: all eight)");

    CommonOpts gen_opts;
    std::string gen_out = "schedules.csv";
    auto* gen = app.add_subcommand("gen-schedule", "emit weekly schedule template CSV");
    add_common(gen, gen_opts);
    gen->add_option("--file", gen_out, "output CSV path");

    std::string metrics_trace;
    int metrics_window = 100;
    auto* met = app.add_subcommand("metrics", "recompute summary from an existing trace CSV");
    met->add_option("--trace", metrics_trace, "trace CSV path")->required();
    met->add_option("--window", metrics_window, "warmup window length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            auto cfg = make_config(sim_opts);
            fina::ComparisonReport report;
            report.runs.push_back(fina::run_experiment(cfg));
            fina::emit_outputs(report, cfg);
            print_summary(report);
        } else if (cmp->parsed()) {
            auto cfg = make_config(cmp_opts);
            std::vector<fina::Strategy> strategies;
            if (cmp_strategies.empty())
                strategies = fina::all_strategies();
            else
                for (const auto& s : cmp_strategies)
                    strategies.push_back(fina::strategy_from_string(s));
            auto report = fina::compare_strategies(cfg, strategies);
            fina::emit_outputs(report, cfg);
            print_summary(report);
        } else if (gen->parsed()) {
            auto cfg = make_config(gen_opts);
            std::map<int, fina::WeeklyTemplate> templates;
            for (int n = 0; n < cfg.num_humans; ++n)
                templates[n] = fina::make_weekly_template(
                    cfg.schedules.archetypes[static_cast<std::size_t>(n)],
                    fina::derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n)));
            std::ofstream out(gen_out);
            if (!out) {
                std::cerr << "error: cannot write " << gen_out << '\n';
                return kExitIo;
            }
            fina::write_schedule_csv(out, templates);
            std::cout << "wrote " << gen_out << '\n';
        } else if (met->parsed()) {
            std::ifstream in(metrics_trace);
            if (!in) {
                std::cerr << "error: cannot open " << metrics_trace << '\n';
                return kExitIo;
            }
            auto run = fina::read_trace_csv(in);
            fina::ExperimentConfig cfg;
            cfg.num_humans = static_cast<int>(run.trace.front().u.size());
            cfg.window = metrics_window;
            cfg.samples = static_cast<int>(run.trace.size());
            cfg.schedules.archetypes.assign(static_cast<std::size_t>(cfg.num_humans),
                                            fina::Archetype::Routine);
            run.summary = fina::summarize(run.trace, cfg, fina::SummaryBinning{});
            run.summary.strategy = "recomputed";
            fina::ComparisonReport report;
            report.runs.push_back(std::move(run));
            print_summary(report);
        }
    } catch (const fina::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fina::ThermalDivergence& e) {
        std::cerr << "numerical divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const fina::OutputError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
