// finsler: Chern–Rund connections and flag curvatures of left-invariant Randers metrics.
//
//   finsler table1            --lambda 2 --mu 1 --xi 0.5 --out table1.csv
//   finsler connection-tables --lambda 2 --mu 1 --xi 0.5 --out tables.json
//   finsler flag   --config model.json --w 0,0,0,0,1 --x 1,0,0,0,0
//   finsler search --config model.json --seed 42
//   finsler verify --config model.json
//
// Exit status: 0 success, 1 tolerance/verdict failure, 2 usage or config error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "finsler/app/commands.hpp"
#include "finsler/app/config.hpp"

namespace {

using namespace finsler::app;

struct ModelOptions {
    std::string config_path;
    std::optional<double> lambda, mu, xi;

    void attach(CLI::App& cmd, bool allow_inline)
    {
        auto* config = cmd.add_option("--config", config_path, "model config (JSON)");
        if (!allow_inline) {
            config->required();
            return;
        }
        auto* l = cmd.add_option("--lambda", lambda, "bracket constant of span(e1,e2)");
        auto* m = cmd.add_option("--mu", mu, "bracket constant of span(e3,e4)");
        auto* x = cmd.add_option("--xi", xi, "deformation X0 = xi Z, 0 < xi < 1");
        for (auto* opt : {l, m, x})
            opt->excludes(config);
    }

    ModelConfig resolve() const
    {
        if (!config_path.empty())
            return load_config(config_path);
        if (!lambda || !mu || !xi)
            throw ConfigError("either --config or all of --lambda, --mu, --xi are required");
        return {make_preset(*lambda, *mu, *xi)};
    }
};

int with_model(const ModelOptions& model, const std::function<int(const ModelConfig&)>& run)
{
    try {
        return run(model.resolve());
    } catch (const IoError& e) {
        std::cerr << e.what() << '\n';
        return kIoError;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kUsageError;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Chern-Rund connection and flag curvature of left-invariant Randers metrics"};
    app.require_subcommand(1);

    ModelOptions table1_model, tables_model, flag_model, search_model, verify_model;
    std::string out_path, w_csv, x_csv;
    std::uint64_t seed = 0;
    int samples = 1;
    int verify_samples = 50;
    std::size_t budget = kDefaultSearchBudget;

    auto* table1 = app.add_subcommand("table1", "special-flag curvatures vs closed forms (CSV)");
    table1_model.attach(*table1, true);
    table1->add_option("--out", out_path, "output CSV path")->required();
    table1->add_option("--seed", seed, "sampling seed");
    table1->add_option("--samples", samples, "random flags per family")->check(CLI::PositiveNumber);

    auto* tables = app.add_subcommand("connection-tables", "connection components vs closed forms (JSON)");
    tables_model.attach(*tables, true);
    tables->add_option("--out", out_path, "output JSON path")->required();
    tables->add_option("--seed", seed, "sampling seed for the poles");

    auto* flag = app.add_subcommand("flag", "flag curvature K(W, X)");
    flag_model.attach(*flag, false);
    flag->add_option("--w", w_csv, "flag pole, comma-separated coordinates")->required();
    flag->add_option("--x", x_csv, "transverse vector, comma-separated coordinates")->required();

    auto* search = app.add_subcommand("search", "certify flags of both curvature signs");
    search_model.attach(*search, false);
    search->add_option("--seed", seed, "sampling seed");
    search->add_option("--max-samples", budget, "evaluation budget");

    auto* verify = app.add_subcommand("verify", "closed forms vs finite-difference oracles and residuals");
    verify_model.attach(*verify, false);
    verify->add_option("--seed", seed, "sampling seed");
    verify->add_option("--samples", verify_samples, "random reference vectors")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? 0 : int(kUsageError);
    }

    if (*table1)
        return with_model(table1_model,
                          [&](const ModelConfig& c) { return cmd_table1(c, out_path, seed, samples, std::cerr); });
    if (*tables)
        return with_model(tables_model,
                          [&](const ModelConfig& c) { return cmd_connection_tables(c, out_path, seed, std::cerr); });
    if (*flag)
        return with_model(flag_model, [&](const ModelConfig& c) {
            return cmd_flag(c, parse_coordinates(w_csv), parse_coordinates(x_csv), std::cout, std::cerr);
        });
    if (*search)
        return with_model(search_model,
                          [&](const ModelConfig& c) { return cmd_search(c, seed, budget, std::cout, std::cerr); });
    return with_model(verify_model,
                      [&](const ModelConfig& c) { return cmd_verify(c, seed, verify_samples, std::cout, std::cerr); });
}
