#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dcm/io.hpp"
#include "dcm/runner.hpp"

namespace {

void add_run_flags(CLI::App* cmd, dcm::RunConfig& c, std::vector<std::uint64_t>& regular,
                   std::optional<double>& alpha, std::optional<std::size_t>& k, std::optional<dcm::half_edge>& x0) {
    cmd->add_option("--regular", regular, "n d: d-regular degree sequence on n vertices")->expected(2);
    cmd->add_option("--degrees", c.degrees_path, "file of whitespace separated degrees");
    cmd->add_option("--alpha", alpha, "fraction of edges rewired per step");
    cmd->add_option("--k", k, "edges rewired per step (instead of --alpha)");
    cmd->add_option("--epsilon", c.epsilon, "TV threshold for the mixing time")->capture_default_str();
    cmd->add_option("--t", c.t, "steps (dynamics, walk, oracle) or largest radius (topology)");
    cmd->add_option("--horizon", c.horizon, "last time step of tau/mixing runs (default 3x theory)");
    cmd->add_option("--replicas", c.replicas, "independent joint-chain replicas")->capture_default_str();
    cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads, 0 for all cores")->capture_default_str();
    cmd->add_option("--engine", c.engine, "auto, full or local")->capture_default_str();
    cmd->add_option("--repetitions", c.repetitions, "independent initial conditions")->capture_default_str();
    cmd->add_option("-o,--output", c.output, "output path (default: standard output)");
    cmd->add_option("--format", c.format, "csv or json")->capture_default_str();
    cmd->add_option("--eta", c.eta_path, "initial configuration JSON");
    cmd->add_option("--x0", x0, "start half-edge");
    cmd->add_option("--samples", c.samples, "topology samples")->capture_default_str();
    cmd->add_option("--segments", c.segments, "|T| for the good-tuple column")->capture_default_str();
    cmd->add_flag("--timestamp", c.timestamp, "add a UTC timestamp to the provenance header");
    cmd->add_flag("--no-timestamp", "omit the timestamp (default)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic configuration model laboratory"};
    app.set_version_flag("--version", dcm::version_string);
    app.require_subcommand(0, 1);
    std::string config_path;
    app.add_option("--config", config_path, "run from a JSON document instead of flags");

    dcm::RunConfig config;
    std::vector<std::uint64_t> regular;
    std::optional<double> alpha;
    std::optional<std::size_t> k;
    std::optional<dcm::half_edge> x0;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"generate", "sample a configuration"},
        {"dynamics", "rewiring trace as JSON lines"},
        {"walk", "joint-chain trajectory as JSON lines"},
        {"tau", "survival curve of tau"},
        {"mixing", "TV curve and mixing time"},
        {"oracle", "exact values by enumeration"},
        {"topology", "ball, tree and good-tuple diagnostics"},
    };
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_run_flags(cmd, config, regular, alpha, k, x0);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    if (!config_path.empty()) {
        try {
            config = dcm::run_config_from_json(dcm::read_json_file(config_path));
        } catch (const dcm::io_error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        } catch (const dcm::validation_error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
        return dcm::run(config);
    }

    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        std::cerr << app.help();
        return 1;
    }
    config.command = chosen.front()->get_name();
    if (!regular.empty()) config.regular = std::pair{static_cast<std::size_t>(regular[0]),
                                                     static_cast<std::uint32_t>(regular[1])};
    config.alpha = alpha;
    config.k = k;
    config.x0 = x0;
    return dcm::run(config);
}
