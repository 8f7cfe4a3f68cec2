#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entroflux/dispatch.hpp"
#include "entroflux/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"entroflux: numerical probes of the relative-entropy framework "
                 "for hyperbolic systems"};

    std::string command;
    std::string config_path;
    std::string system_override;
    std::string out_override;
    long long seed_override = -1;
    int threads_override = 0;
    bool strict_vacuum = false;

    std::string commands_help;
    for (const auto& c : entroflux::known_commands()) {
        commands_help += (commands_help.empty() ? "" : ", ") + c;
    }
    app.add_option("command", command, "one of: " + commands_help)->required();
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--system", system_override, "override [system] id");
    app.add_option("--out", out_override, "override output directory");
    app.add_option("--seed", seed_override, "override the RNG seed");
    app.add_option("--threads", threads_override, "worker thread cap");
    app.add_flag("--strict-vacuum", strict_vacuum, "error instead of clamping at vacuum");

    CLI11_PARSE(app, argc, argv);

    try {
        entroflux::RunConfig cfg = entroflux::parse_config(config_path);
        std::string overrides;
        if (!system_override.empty()) {
            cfg.system_id = system_override;
            overrides += "|system=" + system_override;
        }
        if (!out_override.empty()) {
            cfg.out_dir = out_override;
        }
        if (seed_override >= 0) {
            cfg.seed = static_cast<std::uint64_t>(seed_override);
            overrides += "|seed=" + std::to_string(seed_override);
        }
        if (threads_override > 0) {
            cfg.threads = threads_override;
            overrides += "|threads=" + std::to_string(threads_override);
        }
        if (strict_vacuum) {
            cfg.strict_vacuum = true;
            overrides += "|strict-vacuum";
        }
        if (!overrides.empty()) {
            cfg.config_hash = entroflux::fnv1a64(cfg.raw_text + overrides);
        }
        return entroflux::dispatch_checked(command, cfg, std::cout);
    } catch (const entroflux::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
