// engine <command> --config <path> [options]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "toricqc/toricqc.hpp"

int main(int argc, char** argv) {
    using namespace toricqc;
    CLI::App app{"Big I-functions, mirror maps and quantum products of toric complete intersections"};
    app.set_help_all_flag("--help-all");

    std::string command, config_path, format = "text", order, bound, at;
    std::string a, b;
    bool experimental = false;
    app.add_option("command", command, "validate | sectors | effective | ifun | mirror-map | qproduct | table | coewc-check")
        ->required()
        ->check(CLI::IsMember(cli_commands()));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--order", order, "theta-degree truncation (overrides the config)");
    app.add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--a", a, "first product direction");
    app.add_option("--b", b, "second product direction");
    app.add_option("--at", at, "evaluation point, e.g. x=0");
    app.add_option("--bound", bound, "theta bound for 'effective'");
    app.add_flag("--experimental-divisor", experimental, "allow divisor-direction products (experimental)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        CliOptions opts;
        opts.command = command;
        opts.format = parse_format(format);
        if (!order.empty()) opts.order = parse_q(order);
        if (!bound.empty()) opts.bound = parse_q(bound);
        if (!a.empty()) opts.a = a;
        if (!b.empty()) opts.b = b;
        if (!at.empty()) opts.at = parse_assignments(at);
        opts.experimental_divisor = experimental;

        Config cfg = [&] {
            try {
                return load_config(config_path);
            } catch (const Error& e) {
                if (e.is_validation()) throw;
                throw Error(ErrorCode::ValidationError, e.what());
            }
        }();
        RunResult r = run(cfg, opts);
        std::cerr << r.log;
        std::cout << r.out;
        return r.status;
    } catch (const Error& e) {
        std::cerr << "engine " << command << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "engine " << command << ": " << e.what() << "\n";
        return kExitComputation;
    }
}
