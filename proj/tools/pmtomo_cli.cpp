// pmtomo: command-line front end for the experiment commands.
//
// Exit codes: 0 success, 1 numerical or model failure (error.json written to
// the output directory), 2 usage or config error.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmtomo/errors.hpp"
#include "pmtomo/experiment.hpp"
#include "pmtomo/io.hpp"

namespace {

void write_error(const std::filesystem::path& dir, const std::string& command, const std::string& kind,
                 const std::string& message) {
    try {
        std::filesystem::create_directories(dir);
        pmtomo::io::write_json_file(dir / "error.json",
                                    {{"command", command}, {"error", {{"kind", kind}, {"message", message}}}});
    } catch (...) {
        // The message still reaches stderr.
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-space measurement tomography experiments", "pmtomo"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    for (const auto& name : pmtomo::kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "overrides the config seed");
        sub->add_option("--out", out_dir, "output directory (overrides config 'outputs')");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    pmtomo::ExperimentConfig config;
    try {
        config = pmtomo::load_config(config_path);
        if (seed) {
            config.seed = *seed;
            config.seed_set = true;
        }
        if (out_dir) config.outputs = *out_dir;
    } catch (const pmtomo::Error& e) {
        std::cerr << "pmtomo " << command << ": " << e.what() << '\n';
        if (out_dir) write_error(*out_dir, command, e.kind(), e.what());
        return 2;
    }

    try {
        const auto result = pmtomo::run_command(command, config);
        for (const auto& f : result.files) std::cout << (config.outputs / f).string() << '\n';
        if (!result.success) {
            std::cerr << "pmtomo " << command << ": some checks failed\n";
            return 1;
        }
        return 0;
    } catch (const pmtomo::ConfigError& e) {
        std::cerr << "pmtomo " << command << ": " << e.what() << '\n';
        write_error(config.outputs, command, e.kind(), e.what());
        return 2;
    } catch (const pmtomo::Error& e) {
        std::cerr << "pmtomo " << command << ": " << e.kind() << ": " << e.what() << '\n';
        write_error(config.outputs, command, e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "pmtomo " << command << ": " << e.what() << '\n';
        write_error(config.outputs, command, "internal", e.what());
        return 1;
    }
}
