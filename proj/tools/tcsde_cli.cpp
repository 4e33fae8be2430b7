#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tcsde/errors.hpp"
#include "tcsde/repro/config.hpp"
#include "tcsde/repro/examples.hpp"
#include "tcsde/repro/runner.hpp"
#include "tcsde/repro/verify.hpp"

namespace {

std::optional<std::string> env_out_dir() {
    const char* v = std::getenv("TCSDE_OUT_DIR");
    if (v && *v) return std::string(v);
    return std::nullopt;
}

int report(const tcsde::repro::RunResult& r) {
    for (const auto& line : r.summary) std::cout << line << "\n";
    std::cout << "manifest: " << r.manifest.string() << " (" << r.files.size() << " files)\n";
    return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace tcsde::repro;

    CLI::App app{"Stability experiments for SDEs driven by time-changed Levy noise"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "config file (key = value)")->required();

    auto* rep_cmd = app.add_subcommand("reproduce", "run a registered example with its defaults");
    std::string example_id;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    rep_cmd->add_option("example_id", example_id, "example0, example00, example1 .. example4")->required();
    rep_cmd->add_option("--out", out_dir, "output directory");
    rep_cmd->add_option("--seed", seed, "master seed");

    auto* ver_cmd = app.add_subcommand("verify", "run a property suite at pinned seeds");
    std::string suite;
    ver_cmd->add_option("suite", suite, "slln, martingale, duality, ito, moments or all")->required();

    auto* list_cmd = app.add_subcommand("list", "list registered examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            ExperimentConfig config = load_config(config_path);
            if (const auto dir = env_out_dir()) config.out_dir = *dir;
            return report(run(config));
        }
        if (*rep_cmd) {
            if (out_dir.empty()) out_dir = env_out_dir().value_or("out/" + example_id);
            return report(reproduce(example_id, out_dir, seed));
        }
        if (*ver_cmd) {
            bool all_pass = true;
            if (suite == "all") {
                for (const auto& name : suite_names()) {
                    const auto r = verify_suite(name);
                    std::cout << r.to_text() << "\n";
                    all_pass = all_pass && r.pass;
                }
            } else {
                const auto r = verify_suite(suite);
                std::cout << r.to_text();
                all_pass = r.pass;
            }
            return all_pass ? 0 : 1;
        }
        if (*list_cmd) {
            for (const auto& d : registered_examples()) {
                std::cout << d.id << "\t" << d.theorem << "\t" << d.summary << "\n";
            }
            return 0;
        }
    } catch (const tcsde::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
