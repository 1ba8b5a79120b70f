#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "khorbits/commands.hpp"

// Command-line front end; all real work happens in the library so tests can
// drive the same code paths directly.

int main(int argc, char** argv) {
    CLI::App app{"closed-orbit search for the Kepler problem on the Heisenberg group"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "root random seed")->capture_default_str();

    std::uint64_t search_seed = 0;
    auto* search = app.add_subcommand("search", "refine random starting points");
    search->add_option("seed", search_seed, "seed for the random draws")->required();

    double px = 0.0, py = 0.0;
    auto* optimize = app.add_subcommand("optimize", "refine one explicit starting point");
    optimize->add_option("--px", px, "initial p_x (the dilational momentum J)")->required();
    optimize->add_option("--py", py, "initial p_y (the angular momentum p_theta)")->required();

    auto* scan_plane = app.add_subcommand("scan-plane", "coarse survey of the (p_theta, J) plane");
    auto* scan_line = app.add_subcommand("scan-line", "refined scan along a fixed-J line");

    std::string archive_path;
    auto* detect = app.add_subcommand("detect", "classify the orbits stored in an archive");
    detect->add_option("archive", archive_path, "archive file to read")->required();
    auto* plot = app.add_subcommand("plot", "render the contents of an archive");
    plot->add_option("archive", archive_path, "archive file to read")->required();

    // Let globals like --out appear after the subcommand name.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        khorbits::RunContext ctx;
        if (!config_path.empty()) ctx.config = khorbits::load_config(config_path);
        ctx.out_dir = out_dir;
        ctx.seed = seed;

        if (search->parsed()) return khorbits::cmd_search(ctx, search_seed);
        if (optimize->parsed()) return khorbits::cmd_optimize(ctx, px, py);
        if (scan_plane->parsed()) return khorbits::cmd_scan_plane(ctx);
        if (scan_line->parsed()) return khorbits::cmd_scan_line(ctx);
        if (detect->parsed()) return khorbits::cmd_detect(ctx, archive_path);
        if (plot->parsed()) return khorbits::cmd_plot(ctx, archive_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
