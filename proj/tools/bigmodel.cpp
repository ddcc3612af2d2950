// Command-line front end: one subcommand per pipeline stage.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bigmodel/errors.hpp"
#include "bigmodel/pipeline.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDependency = 3;

struct Flags {
    std::string config;
    std::string out = "out";
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::string scenario;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parcel delineation, urban identification, expansion scenarios and PM2.5 exposure"};
    app.require_subcommand(1);

    Flags flags;
    for (const char* name : {"parcels", "density", "identify", "calibrate", "simulate", "exposure", "all"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " stage");
        sub->add_option("--config", flags.config, "pipeline config file (JSON)")->required();
        sub->add_option("--out", flags.out, "artifact directory")->capture_default_str();
        sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
        sub->add_option("--seed", flags.seed, "simulation seed");
        sub->add_option("--scenario", flags.scenario, "bau | uao | ntu")
            ->check(CLI::IsMember({"bau", "uao", "ntu"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const bigmodel::Stage stage = bigmodel::parse_stage(sub->get_name());
        bigmodel::RunOptions options;
        options.out_dir = flags.out;
        options.jobs = flags.jobs;
        if (sub->get_option("--seed")->count() > 0) {
            options.seed = flags.seed;
        }
        if (!flags.scenario.empty()) {
            options.scenario = bigmodel::parse_scenario(flags.scenario);
        }
        bigmodel::run_pipeline(bigmodel::PipelineConfig::load(flags.config), stage, options);
    } catch (const bigmodel::DependencyError& e) {
        std::cerr << "dependency error: " << e.what() << '\n';
        return kExitDependency;
    } catch (const bigmodel::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
