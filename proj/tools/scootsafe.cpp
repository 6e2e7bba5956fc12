#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "scootsafe/run.hpp"

int main(int argc, char** argv) {
    using namespace scootsafe;

    CLI::App app{"Surrogate-safety analysis of vehicle / e-scooter GPS encounters"};
    app.require_subcommand(1);

    std::string input, config_path, out_dir;
    std::vector<std::string> overrides;
    auto* analyze = app.add_subcommand("analyze", "Analyze a trajectory CSV and write reports");
    analyze->add_option("--input", input, "Trajectory CSV (case_id,dataset,agent,t,lat,lon,alt)")->required();
    analyze->add_option("--config", config_path, "JSON config file");
    analyze->add_option("--out", out_dir, "Output directory")->required();
    analyze->add_option("--set", overrides, "Override a config value, key=value (repeatable)");

    std::string spec_path, out_file;
    std::optional<std::uint64_t> seed;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic encounter corpus as trajectory CSV");
    generate->add_option("--spec", spec_path, "JSON generation spec")->required();
    generate->add_option("--out", out_file, "Output CSV path")->required();
    generate->add_option("--seed", seed, "Override the spec's seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (*analyze) {
        auto run = default_configuration();
        try {
            if (!config_path.empty()) load_config_file(run, config_path);
            for (const auto& o : overrides) apply_override(run, o);
            run.config.validate();
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitConfig;
        }
        return run_analyze(run, input, out_dir);
    }
    return run_generate(spec_path, out_file, seed);
}
