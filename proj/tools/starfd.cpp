// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "starfd/errors.hpp"
#include "starfd/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumeric = 2;

void report(const starfd::ValidationError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
}

int run(const std::string& file, const std::string& output, unsigned threads) {
    auto kv = starfd::KeyValues::load(file);
    if (!output.empty()) kv.set("output", output);
    if (threads != 0) kv.set("threads", std::to_string(threads));
    const auto spec = starfd::resolve_experiment(kv);
    const auto result = starfd::run_experiment(spec);
    std::cout << "wrote " << result.rows.size() << " rows to " << spec.output.string() << "\n";
    for (const auto& s : result.summary)
        std::cout << "target_dl " << s.target_dl << " " << starfd::to_string(s.design) << "/"
                  << starfd::to_string(s.estimator) << ": argmax tau " << s.argmax_tau << " (sum "
                  << s.max_sum << ")\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STAR-RIS full-duplex NOMA experiment runner"};
    app.require_subcommand(1);

    std::string run_file, run_output;
    unsigned threads = 0;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment file and write its CSV and manifest");
    run_cmd->add_option("file", run_file, "Experiment file (key = value)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--output", run_output, "Override the output CSV path");
    run_cmd->add_option("-j,--threads", threads, "Worker threads (0: all cores)");

    std::string validate_file;
    auto* validate_cmd = app.add_subcommand("validate", "Check an experiment file and print the resolved keys");
    validate_cmd->add_option("file", validate_file, "Experiment file")->required()->check(CLI::ExistingFile);

    std::string preset_name;
    auto* presets_cmd = app.add_subcommand("presets", "Built-in experiment presets");
    presets_cmd->require_subcommand(1);
    auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
    auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset as an experiment file");
    show_cmd->add_option("name", preset_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*run_cmd) return run(run_file, run_output, threads);
        if (*validate_cmd) {
            const auto spec = starfd::load_experiment(validate_file);
            std::cout << spec.resolved.serialize();
            return kOk;
        }
        if (*list_cmd) {
            for (const auto& name : starfd::preset_names()) std::cout << name << "\n";
            return kOk;
        }
        if (*show_cmd) {
            const auto text = starfd::preset_text(preset_name);
            if (!text) {
                std::cerr << "unknown preset '" << preset_name << "'\n";
                return kInvalid;
            }
            std::cout << *text;
            return kOk;
        }
    } catch (const starfd::ValidationError& e) {
        report(e);
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}
