#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "feller/commands.hpp"
#include "feller/errors.hpp"
#include "feller/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed_override = -1;
    std::int64_t n_paths_override = -1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", args.seed_override, "override the config seed");
    sub->add_option("--n-paths", args.n_paths_override, "override the config path count");
}

feller::ExperimentConfig load(const CommonArgs& args) {
    feller::ExperimentConfig cfg = feller::load_config(args.config_path);
    if (args.seed_override >= 0) {
        cfg.seed = static_cast<std::uint64_t>(args.seed_override);
        cfg.raw["seed"] = cfg.seed;
    }
    if (args.n_paths_override >= 1) {
        cfg.n_paths = static_cast<int>(args.n_paths_override);
        cfg.raw["n_paths"] = cfg.n_paths;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-state Feller semigroup toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    bool diagnostic = false;

    CLI::App* verify = app.add_subcommand(
        "verify-semigroup", "semigroup laws, strong continuity, generator recovery");
    CLI::App* bounds = app.add_subcommand(
        "bounds", "increment and expected-variation bound constants and checks");
    CLI::App* simulate = app.add_subcommand("simulate", "sample Markov jump paths");
    CLI::App* corrupt_cmd =
        app.add_subcommand("corrupt", "plant null-set corruptions into simulated paths");
    CLI::App* regularize =
        app.add_subcommand("regularize", "profiles, blow-up detection, regularized exports");
    CLI::App* audit = app.add_subcommand(
        "audit", "cadlag, modification, rational-continuity and Markov suites");
    CLI::App* fdd = app.add_subcommand("fdd", "finite-dimensional expectation of phi");

    for (CLI::App* sub : {verify, bounds, simulate, corrupt_cmd, regularize, audit, fdd}) {
        add_common(sub, args);
    }
    audit->add_flag("--diagnostic", diagnostic,
                    "also audit the corruption times themselves");

    CLI11_PARSE(app, argc, argv);

    try {
        const feller::ExperimentConfig cfg = load(args);
        const std::filesystem::path out(args.out_dir);
        if (verify->parsed()) return feller::cmd_verify_semigroup(cfg, out);
        if (bounds->parsed()) return feller::cmd_bounds(cfg, out);
        if (simulate->parsed()) return feller::cmd_simulate(cfg, out);
        if (corrupt_cmd->parsed()) return feller::cmd_corrupt(cfg, out);
        if (regularize->parsed()) return feller::cmd_regularize(cfg, out);
        if (audit->parsed()) return feller::cmd_audit(cfg, out, diagnostic);
        if (fdd->parsed()) return feller::cmd_fdd(cfg, out);
    } catch (const feller::MissingInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const feller::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const feller::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
