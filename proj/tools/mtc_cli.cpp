#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mtc/io.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"driven Kitaev chain simulator"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "run one experiment from a JSON config or manifest");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--output-dir,-o", output_dir, "overrides output_dir");
    run->add_option("--seed", seed, "overrides master_seed");
    run->add_option("--threads,-j", threads, "worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--quiet,-q", quiet, "no summary on stdout");

    auto* list = app.add_subcommand("list", "list the experiments");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << mtc::format_catalog();
        return 0;
    }

    try {
        mtc::RunConfig cfg = mtc::load_config(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (seed) cfg.master_seed = *seed;
        if (threads > 0) cfg.threads = threads;
        cfg.quiet = quiet;
        const mtc::RunOutcome out = mtc::run(cfg);
        for (const auto& w : out.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        if (!quiet)
            for (const auto& [k, v] : out.summary) std::printf("%s = %s\n", k.c_str(), v.c_str());
        return out.exit_code;
    } catch (const mtc::InvalidInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mtc::PreconditionFailure& e) {
        std::fprintf(stderr, "precondition failed: %s\n%s\n", e.what(), e.diagnostic.c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
