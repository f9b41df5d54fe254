#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obdiff/experiments.hpp"

namespace {

std::vector<obdiff::MeshPair> parse_mesh_list(const std::string& text) {
    std::vector<obdiff::MeshPair> meshes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--mesh", "expected J:N pairs separated by commas");
        meshes.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    }
    if (meshes.empty()) throw CLI::ValidationError("--mesh", "empty mesh list");
    return meshes;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--window", "expected lo:hi");
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convergence tables for obstacle diffusion schemes (CN, BDF1/2/3)"};
    app.set_config("--config", "", "flat key=value config file; flags override it");

    auto* table_cmd = app.add_subcommand("table", "run a convergence table");

    std::string problem = "model1";
    std::string scheme = "bdf2";
    std::string bdf2_init = "cn";
    int space_order = 4;
    std::string mesh_list;
    int base_j = 0;
    int base_n = 0;
    int doublings = 0;
    std::string ref_mode = "exact";
    int ref_j = 5120;
    int ref_n = 0;
    std::string window = "80:120";
    double spacing = 0.01;
    double newton_tol = 1e-10;
    std::string format = "markdown";
    std::string out_path;

    table_cmd->add_option("--problem", problem,
                          "american-put | model1 | model2 | smooth1 | smooth2")
            ->capture_default_str();
    table_cmd->add_option("--scheme", scheme, "cn1 | cn2 | bdf1 | bdf2 | bdf3")
            ->capture_default_str();
    table_cmd->add_option("--bdf2-init", bdf2_init, "first BDF2 step: cn | bdf1")
            ->capture_default_str();
    table_cmd->add_option("--space-order", space_order, "spatial order: 2 | 4")
            ->check(CLI::IsMember({2, 4}))
            ->capture_default_str();
    table_cmd->add_option("--mesh", mesh_list, "explicit mesh list \"J:N,J:N,...\"");
    table_cmd->add_option("--base-J", base_j, "base J for a doubling sequence");
    table_cmd->add_option("--base-N", base_n, "base N for a doubling sequence");
    table_cmd->add_option("--doublings", doublings, "number of rows in the sequence");
    table_cmd->add_option("--ref-mode", ref_mode, "exact | self")->capture_default_str();
    table_cmd->add_option("--ref-J", ref_j, "self-reference grid points (Jref)")
            ->capture_default_str();
    table_cmd->add_option("--ref-N", ref_n, "self-reference time steps (default Jref)");
    table_cmd->add_option("--window", window, "reference evaluation window lo:hi")
            ->capture_default_str();
    table_cmd->add_option("--spacing", spacing, "reference evaluation spacing")
            ->capture_default_str();
    table_cmd->add_option("--newton-tol", newton_tol, "Newton tolerance scale")
            ->capture_default_str();
    table_cmd->add_option("--format", format, "markdown | csv | both")
            ->check(CLI::IsMember({"markdown", "csv", "both"}))
            ->capture_default_str();
    table_cmd->add_option("--out", out_path, "output path (csv requires it with --format both)");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        obdiff::RunConfig config;
        config.problem = problem;
        config.scheme = obdiff::scheme_from_string(scheme);
        config.bdf2_init = bdf2_init == "bdf1" ? obdiff::Bdf2Init::BDF1 : obdiff::Bdf2Init::CN;
        config.space_order = space_order;
        if (!mesh_list.empty())
            config.meshes = parse_mesh_list(mesh_list);
        else if (base_j > 0 && base_n > 0 && doublings > 0)
            config.meshes = obdiff::doubling_meshes(base_j, base_n, doublings);
        else
            throw std::runtime_error("give either --mesh or --base-J/--base-N/--doublings");
        config.ref_mode = ref_mode == "self" ? obdiff::ReferenceMode::SelfReference
                                             : obdiff::ReferenceMode::Exact;
        config.ref_grid_points = ref_j;
        config.ref_time_steps = ref_n;
        const auto [lo, hi] = parse_window(window);
        config.window_lo = lo;
        config.window_hi = hi;
        config.spacing = spacing;
        config.newton_tol_scale = newton_tol;

        const obdiff::ConvergenceTable table = obdiff::run_table(config);

        if (format == "markdown") {
            write_or_print(obdiff::to_markdown(table), out_path);
        } else if (format == "csv") {
            write_or_print(obdiff::to_csv(table), out_path);
        } else {
            std::cout << obdiff::to_markdown(table);
            if (out_path.empty())
                throw std::runtime_error("--format both needs --out for the csv copy");
            write_or_print(obdiff::to_csv(table), out_path);
        }
        return table.all_ok ? 0 : 2;
    } catch (const std::exception& ex) {
        std::cerr << "obdiff: " << ex.what() << "\n";
        return 1;
    }
}
