// qrc: command-line front end for the spin-qubit reservoir experiments.
//
//   qrc run    single cell (seed ensemble)
//   qrc sweep  topology x gamma x readout x task grid
//   qrc esn    ESN1/ESN3/ESN5 baseline comparison
//   qrc report re-emit metrics.csv from stored manifests
//
// Exit codes: 0 success, 2 config/output error, 3 numerical-invariant violation.

#include "qrc/error.hpp"
#include "qrc/experiment.hpp"

#include <CLI11.hpp>

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds;
    std::string out_dir = "results";
    unsigned jobs = 0;
};

struct CellFlags {
    std::optional<std::string> task;
    std::optional<std::string> topology;
    std::optional<double> gamma;
    std::optional<int> readout;
};

void add_common(CLI::App* app, CommonFlags& f)
{
    app->add_option("--config", f.config_path, "JSON config (flat keys, or a manifest)");
    app->add_option("--seed", f.seed, "base seed for couplings/weights and inputs");
    app->add_option("--seeds", f.seeds, "ensemble size");
    app->add_option("--out", f.out_dir, "output directory")->capture_default_str();
    app->add_option("--jobs", f.jobs, "worker threads (0 = all cores)")->capture_default_str();
}

nlohmann::json read_json(const std::string& path)
{
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw qrc::ConfigError("cannot read config '" + path + "'");
    try {
        nlohmann::json j;
        in >> j;
        // A manifest carries its config under "config".
        if (j.is_object() && j.contains("config") && j.contains("schema")) return j.at("config");
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw qrc::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

void apply_common(qrc::ExperimentConfig& c, const CommonFlags& f)
{
    if (f.seed) c.reservoir.coupling_seed = c.reservoir.input_seed = *f.seed;
    if (f.seeds) c.seeds = *f.seeds;
}

void print_summary(const std::vector<qrc::CellResult>& results, const std::string& out_dir)
{
    std::vector<qrc::ExperimentManifest> manifests;
    for (const auto& r : results) manifests.push_back(r.manifest);
    for (const auto& row : qrc::metrics_rows(manifests))
        std::cout << fmt::format("{:<12} {:<7} r{} gamma={:<5g} n={:<3} mean={:.4e} std={:.2e}\n",
                                 row.task, row.topology, row.readout_type, row.gamma,
                                 row.seed_count, row.mean_metric, row.std_metric);
    std::cout << "wrote " << out_dir << "/metrics.csv\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dissipative spin-qubit reservoir computing experiments"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags, esn_flags;
    CellFlags cell;
    auto* run = app.add_subcommand("run", "run one experiment cell over a seed ensemble");
    add_common(run, run_flags);
    run->add_option("--task", cell.task, "stm|narma2|narma5|narma10|narma15|narma20");
    run->add_option("--topology", cell.topology, "linear|ring");
    run->add_option("--gamma", cell.gamma, "dissipation rate in [0, 1]");
    run->add_option("--readout", cell.readout, "1 (per-qubit) or 2 (site average)");

    auto* sweep = app.add_subcommand("sweep", "run a topology x gamma x readout x task grid");
    add_common(sweep, sweep_flags);

    auto* esn = app.add_subcommand("esn", "echo-state-network baseline comparison");
    add_common(esn, esn_flags);

    std::vector<std::string> manifest_paths;
    std::string report_out = "results";
    bool rerun = false;
    unsigned report_jobs = 0;
    auto* report = app.add_subcommand("report", "re-emit metrics.csv from stored manifests");
    report->add_option("manifests", manifest_paths, "manifest files or directories")->required();
    report->add_option("--out", report_out, "output directory")->capture_default_str();
    report->add_flag("--rerun", rerun, "re-execute each manifest, verify metrics, rewrite trajectories");
    report->add_option("--jobs", report_jobs, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            auto config = qrc::config_from_json(read_json(run_flags.config_path));
            if (cell.task) {
                const int delay = config.task.kind == qrc::TaskKind::Stm ? config.task.param : 10;
                config.task = qrc::parse_task(*cell.task);
                if (config.task.kind == qrc::TaskKind::Stm) config.task.param = delay;
            }
            if (cell.topology) config.reservoir.topology = qrc::parse_topology(*cell.topology);
            if (cell.gamma) config.reservoir.gamma = *cell.gamma;
            if (cell.readout) config.readout = qrc::parse_readout(*cell.readout);
            apply_common(config, run_flags);
            const auto results = std::vector<qrc::CellResult>{qrc::run_cell(config, run_flags.jobs)};
            qrc::emit_report(results, run_flags.out_dir);
            print_summary(results, run_flags.out_dir);
        } else if (*sweep) {
            auto grid = qrc::sweep_grid_from_json(read_json(sweep_flags.config_path));
            apply_common(grid.base, sweep_flags);
            const auto results = qrc::run_sweep(grid, sweep_flags.jobs);
            qrc::emit_report(results, sweep_flags.out_dir);
            print_summary(results, sweep_flags.out_dir);
        } else if (*esn) {
            auto grid = qrc::esn_grid_from_json(read_json(esn_flags.config_path));
            apply_common(grid.base, esn_flags);
            const auto results = qrc::run_esn_comparison(grid, esn_flags.jobs);
            qrc::emit_report(results, esn_flags.out_dir);
            print_summary(results, esn_flags.out_dir);
        } else if (*report) {
            std::vector<std::filesystem::path> paths(manifest_paths.begin(), manifest_paths.end());
            const auto stored = qrc::load_manifests(paths);
            if (stored.empty()) throw qrc::ConfigError("no manifests found");
            if (!rerun) {
                qrc::write_metrics_csv(stored, report_out);
                std::cout << "wrote " << report_out << "/metrics.csv from " << stored.size()
                          << " manifests\n";
                return 0;
            }
            std::vector<qrc::ExperimentConfig> configs;
            for (const auto& m : stored) configs.push_back(m.config);
            const auto results = qrc::run_cells(configs, report_jobs);
            for (std::size_t i = 0; i < stored.size(); ++i) {
                const auto& a = stored[i].metrics;
                const auto& b = results[i].manifest.metrics;
                bool same = a.size() == b.size();
                for (std::size_t m = 0; same && m < a.size(); ++m)
                    same = a[m].task == b[m].task && a[m].values == b[m].values;
                if (!same)
                    throw qrc::NumericalError("re-run of cell " + stored[i].config.cell_name()
                                              + " did not reproduce the stored metrics");
            }
            qrc::emit_report(results, report_out);
            print_summary(results, report_out);
        }
    } catch (const qrc::NumericalError& e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const qrc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qrc::IoError& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
