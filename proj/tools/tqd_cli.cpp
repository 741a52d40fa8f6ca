// Scenario runner: tqd <fig1|fig2a|fig2b|fuzz|nv-pulse|custom> [--config file] [--out file] [--svg file] [--seed n]

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tqd/scenario.hpp"

namespace
{
    struct Options
    {
        std::string config;
        std::string out;
        std::string svg;
        std::optional<std::uint64_t> seed;
    };
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Counterdiabatic driving costs and speeds for Landau-Zener sweeps"};
    app.require_subcommand(1);

    const std::map<std::string, std::string> commands = {
        {"fig1", "fig1"},       {"fig2a", "fig2a"},       {"fig2b", "fig2b"},
        {"fuzz", "relations-fuzz"}, {"nv-pulse", "nv-pulse"}, {"custom", "custom"},
    };
    const std::map<std::string, std::string> help = {
        {"fig1", "cost rates and speeds along one sweep"},
        {"fig2a", "collective cost rate for several sweep durations"},
        {"fig2b", "collective cost rate for several level splittings"},
        {"fuzz", "check the cost and speed relations on random frames"},
        {"nv-pulse", "lab-frame pulse for an NV centre and its verification"},
        {"custom", "sweep with a chosen protocol, spin and propagation"},
    };

    Options opts;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, scenario] : commands)
    {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", opts.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output file (stdout when omitted)");
        sub->add_option("--svg", opts.svg, "SVG plot file");
        sub->add_option("--seed", opts.seed, "random seed");
        subs[name] = sub;
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : tqd::kExitIoOrConfig;
    }

    try
    {
        std::string scenario;
        for (const auto& [name, sub] : subs)
        {
            if (sub->parsed())
            {
                scenario = commands.at(name);
            }
        }
        tqd::ScenarioConfig cfg = tqd::ScenarioConfig::defaults_for(scenario);
        if (!opts.config.empty())
        {
            cfg = tqd::ScenarioConfig::from_file(opts.config, cfg);
        }
        if (!opts.out.empty())
        {
            cfg.csv_path = opts.out;
        }
        if (!opts.svg.empty())
        {
            cfg.svg_path = opts.svg;
        }
        if (opts.seed)
        {
            cfg.seed = *opts.seed;
        }
        cfg.validate();
        return tqd::run_scenario(cfg, std::cout, std::cerr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return tqd::kExitIoOrConfig;
    }
}
