// tomo: entangled tomogram slices and indicator reports.
//
// Subcommands:
//   talbot sweep     indicator CSVs over (D, R) lists
//   talbot density   subsystem density and outcome-table CSVs at one (D, R)
//   biphoton slice   time-time slice grids, difference, indicator report
//   selftest         numerical invariant suite
//
// Exit codes: 0 success, 1 usage or I/O error, 2 numerical-invariant failure.

#include <CLI11.hpp>
#include <iostream>

#include "tomo/runner.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    int D = -1;
    double R = -1.0;
    double window_t = -1.0;
    int n_grid = -1;
    int n_teeth = -1;
    double grid_step = -1.0;
    bool oracle = false;

    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value run configuration file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--threads", threads, "worker threads (0: TOMO_THREADS or hardware)")
            ->check(CLI::NonNegativeNumber);
    }

    tomo::RunConfig resolve() const {
        tomo::RunConfig cfg = config_path.empty() ? tomo::RunConfig{}
                                                  : tomo::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads > 0) cfg.threads = threads;
        if (D > 0) {
            cfg.talbot.D = D;
            cfg.sweep_D = {D};
        }
        if (R >= 0.0) {
            cfg.talbot.R = R;
            cfg.sweep_R = {R};
        }
        if (window_t > 0.0) cfg.window_t = window_t;
        if (n_grid > 0) cfg.n_grid = n_grid;
        if (n_teeth > 0) cfg.comb.n_teeth = n_teeth;
        if (grid_step > 0.0) cfg.grid.step_factor = grid_step;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entangled tomogram slices and entanglement indicators"};
    app.require_subcommand(1);
    CliOverrides ov;

    CLI::App* talbot = app.add_subcommand("talbot", "carpet-mode pair indicators");
    talbot->require_subcommand(1);
    CLI::App* sweep = talbot->add_subcommand("sweep", "indicator CSVs over (D, R) lists");
    CLI::App* density =
        talbot->add_subcommand("density", "subsystem density and outcome table");
    for (CLI::App* cmd : {sweep, density}) {
        ov.add_common(cmd);
        cmd->add_option("--D", ov.D, "number of slits / outcomes")->check(CLI::Range(2, 12));
        cmd->add_option("--R", ov.R, "pair correlation")->check(CLI::Range(0.0, 1.0));
    }

    CLI::App* biphoton = app.add_subcommand("biphoton", "frequency-comb slices");
    biphoton->require_subcommand(1);
    CLI::App* slice =
        biphoton->add_subcommand("slice", "time-time slice grids and indicator report");
    ov.add_common(slice);
    slice->add_option("--window-T", ov.window_t, "window half-width, units of 1/width")
        ->check(CLI::PositiveNumber);
    slice->add_option("--n-grid", ov.n_grid, "grid points per axis")
        ->check(CLI::Range(64, 1 << 16));
    slice->add_option("--n-teeth", ov.n_teeth, "comb teeth per side")
        ->check(CLI::Range(1, 64));
    slice->add_flag("--oracle", ov.oracle,
                    "also emit matched-assumption oracle grids and L_inf discrepancy");

    CLI::App* selftest = app.add_subcommand("selftest", "numerical invariant suite");
    ov.add_common(selftest);
    selftest->add_option("--grid-step", ov.grid_step,
                         "tomogram grid step for the MI check, units of the slit width")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // help request
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        const tomo::RunConfig cfg = ov.resolve();
        if (sweep->parsed()) {
            tomo::cmd_talbot_sweep(cfg, std::cout);
        } else if (density->parsed()) {
            tomo::cmd_talbot_density(cfg, std::cout);
        } else if (slice->parsed()) {
            tomo::cmd_biphoton_slice(cfg, ov.oracle, std::cout);
        } else if (selftest->parsed()) {
            if (!tomo::run_selftest(cfg, std::cout)) return 2;
        }
    } catch (const tomo::invariant_error& e) {
        std::cerr << "numerical invariant failure: " << e.what() << "\n";
        return 2;
    } catch (const tomo::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
