#include "fractrans/config.hpp"
#include "fractrans/experiments.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fractrans;

int main(int argc, char** argv)
{
    CLI::App app{"fractional transport experiments"};
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    unsigned jobs = 0;
    app.add_option("-c,--config", config_path, "config file ([section] key = value)");
    app.add_option("-s,--set", overrides, "override, section.key=value (repeatable)");
    app.add_option("-j,--jobs", jobs, "concurrent runs (FRACTRANS_JOBS takes precedence)");
    app.add_option("command", command, "experiment to run")->required()->check(CLI::IsMember(kind_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;  // usage errors count as config errors
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "config error: cannot read " << config_path << "\n";
                return 2;
            }
            std::stringstream text;
            text << in.rdbuf();
            cfg = parse_config(text.str(), config_path);
        }
        cfg.kind = parse_kind(command);
        for (const auto& o : overrides) apply_override(cfg, o);
        if (jobs > 0) cfg.jobs = jobs;
        if (const char* env = std::getenv("FRACTRANS_JOBS"); env && *env)
            apply_override(cfg, std::string("run.jobs=") + env);
        return execute(cfg, std::cout, std::cerr);
    } catch (const ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
