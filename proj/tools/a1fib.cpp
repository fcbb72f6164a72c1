// Command-line front end: parse job specs, dispatch the computations, emit
// JSON or DOT reports.

#include <CLI11.hpp>

#include <iostream>

#include "a1fib/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact invariants of affine-line fibrations on surfaces"};
    app.require_subcommand(1);

    a1fib::cli::Options opt;
    const std::vector<std::string> commands = {
        "zigzag-standardize", "zigzag-revert", "zigzag-ml", "fiber-build",
        "fiber-graph",        "puiseux-point", "stab-fiber", "aut-report",
        "dpd-classify",       "amalgam-nf"};

    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("input", opt.input, "input file or inline JSON")->required();
        sub->add_option("--field", opt.field, "scalar field: rational | radical")
            ->check(CLI::IsMember({"rational", "radical"}));
        sub->add_option("--format", opt.format, "output format: json | dot")
            ->check(CLI::IsMember({"json", "dot"}));
        sub->add_option("--truncation", opt.truncation, "raise the working series order");
        sub->add_option("--out", opt.out_path, "write the report to a file");
        sub->callback([&opt, name] { opt.command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    auto res = a1fib::cli::run(opt);
    if (!res.out.empty()) std::cout << res.out;
    if (!res.err.empty()) std::cerr << res.err;
    return res.exit_code;
}
