#include "offnet/cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    namespace oc = offnet::cli;
    CLI::App app{"Equilibria, collusion metrics and price dynamics for regulated off-network pricing games"};
    app.require_subcommand(1);

    oc::RunOptions opt;
    std::size_t grid = 0;
    double tol = 0.0;

    const std::pair<const char *, const char *> verbs[] = {
        {"solve", "Solve the regime named in the scenario"},
        {"dynamics", "Best-response iteration or projected gradient flow"},
        {"collude", "Exclusive-contract equilibrium and collusion metrics"},
        {"compare", "Ex-ante versus ex-post regulation for one CP"},
        {"verify", "Check solver output against the brute-force oracle"},
        {"sweep", "Evaluate the scenario over its sweep axis"},
    };
    for (const auto &[name, help] : verbs) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", opt.scenario_path, "Scenario JSON file")->required();
        sub->add_option("--out", opt.out_dir, "Output directory");
        sub->add_option("--grid", grid, "Oracle grid points per axis")->check(CLI::Range(3, 100001));
        sub->add_option("--tol", tol, "Override the tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--threads", opt.threads, "Worker threads (0: hardware)");
        sub->add_flag("-q,--quiet", opt.quiet, "Do not print tables");
        sub->callback([&, name = std::string(name)] { opt.verb = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : oc::kUsage;
    }
    if (grid) opt.grid = grid;
    if (tol > 0.0) opt.tol = tol;
    return oc::run(opt, std::cout, std::cerr);
}
