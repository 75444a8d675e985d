// Command-line front end: run and validate systems, inspect models, serve
// models to other machines.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "cosim/config.hpp"
#include "cosim/csv_observer.hpp"
#include "cosim/master.hpp"
#include "cosim/model_library.hpp"
#include "cosim/net/provider.hpp"
#include "cosim/report.hpp"

using namespace cosim;

namespace {

enum Exit { success = 0, findings = 1, aborted = 2, usage = 3 };

std::atomic<bool> interrupted{false};

extern "C" void on_signal(int) { interrupted = true; }

std::optional<SystemDescription> load(const std::string& path) {
    auto parsed = load_config(path);
    for (const auto& d : parsed.diagnostics) std::cerr << path << ": " << d.to_string() << "\n";
    return parsed.system;
}

int cmd_validate(const std::string& path) {
    const auto sys = load(path);
    if (!sys) return findings;
    ModelRegistry registry = builtin_registry();
    net::RoutingSlaveSource source(registry);
    try {
        const auto report = validate_system(*sys, source);
        if (!report.ok()) {
            std::cerr << format_findings(report);
            return findings;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aborted;
    }
    std::cout << path << ": ok\n";
    return success;
}

int cmd_run(const std::string& path, const std::string& out_dir, bool seed_check) {
    const auto sys = load(path);
    if (!sys) return findings;
    ModelRegistry registry = builtin_registry();
    net::RoutingSlaveSource source(registry);

    try {
        if (const auto report = validate_system(*sys, source); !report.ok()) {
            std::cerr << format_findings(report);
            return findings;
        }
        auto csv = std::make_shared<CsvObserver>(out_dir);
        auto result = initialize_run(*sys, source, {csv})->run_to_end();
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "steps " << result.steps << ", t_end " << format_real(result.t_end) << "\n";
        std::cout << "wrote " << csv->signals_path().string() << " and " << csv->energy_path().string() << "\n";

        if (seed_check) {
            const auto again = initialize_run(*sys, source)->run_to_end();
            bool same = again.records.size() == result.records.size();
            for (std::size_t i = 0; same && i < again.records.size(); ++i) {
                same = bit_identical(again.records[i], result.records[i]);
            }
            if (!same) {
                std::cerr << "seed check failed: repeated run differs\n";
                return aborted;
            }
            std::cout << "seed check passed\n";
        }
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return findings;
    } catch (const Error& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return aborted;
    }
    return success;
}

int cmd_describe(const std::string& model_id, const std::string& provider) {
    try {
        SlaveDescriptor d;
        if (provider.empty()) {
            d = builtin_registry().describe(model_id);
        } else {
            d = net::ProviderClient(net::Endpoint::parse(provider)).describe(model_id);
        }
        std::cout << format_descriptor(d);
    } catch (const UnknownModel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return findings;
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aborted;
    }
    return success;
}

int cmd_list_models(const std::vector<std::string>& providers) {
    if (providers.empty()) {
        for (const auto& id : builtin_registry().model_ids()) std::cout << id << "\n";
        return success;
    }
    try {
        for (const auto& p : providers) net::Endpoint::parse(p);
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    const auto catalogue = net::discover(providers);
    for (const auto& w : catalogue.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& e : catalogue.entries) std::cout << e.provider << " " << e.model_id << "\n";
    return success;
}

int cmd_provider_serve(std::uint16_t port, const std::vector<std::string>& models, std::size_t max_slaves) {
    const ModelRegistry registry = builtin_registry();
    net::ProviderConfig config;
    config.host = "0.0.0.0";
    config.port = port;
    config.models = models;
    config.max_slaves = max_slaves;
    try {
        net::SlaveProvider provider(registry, config);
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        provider.start();
        std::cout << "serving on port " << provider.port() << std::endl;
        while (!interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        provider.stop();
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aborted;
    }
    return success;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-simulation kernel"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool seed_check = false;
    auto* run = app.add_subcommand("run", "Run a system and write signals.csv and energy.csv");
    run->add_option("config", config_path, "System description")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--seed-check", seed_check, "Run twice and fail on any bit difference");

    auto* validate = app.add_subcommand("validate", "Check a system description");
    validate->add_option("config", config_path, "System description")->required();

    std::string model_id;
    std::string provider;
    auto* describe = app.add_subcommand("describe", "Print the interface of a model");
    describe->add_option("model_id", model_id)->required();
    describe->add_option("--provider", provider, "HOST:PORT of a slave provider");

    std::vector<std::string> providers;
    auto* list = app.add_subcommand("list-models", "List available models");
    list->add_option("--provider", providers, "HOST:PORT of a slave provider");

    auto* provider_cmd = app.add_subcommand("provider", "Slave provider daemon");
    provider_cmd->require_subcommand(1);
    std::uint16_t port = 0;
    std::vector<std::string> models;
    std::size_t max_slaves = 64;
    auto* serve = provider_cmd->add_subcommand("serve", "Publish models and spawn slaves on request");
    serve->add_option("--port", port, "Listen port")->required();
    serve->add_option("--models", models, "Published model ids")->delimiter(',');
    serve->add_option("--max-slaves", max_slaves, "Concurrent slave limit")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    if (*run) return cmd_run(config_path, out_dir, seed_check);
    if (*validate) return cmd_validate(config_path);
    if (*describe) return cmd_describe(model_id, provider);
    if (*list) return cmd_list_models(providers);
    if (*serve) return cmd_provider_serve(port, models, max_slaves);
    return usage;
}
