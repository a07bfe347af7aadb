#pragma once

// Seeded experiment orchestration: configs, cell runs, sweeps, manifests and
// CSV emission.
//
// A cell is one (model, topology, gamma, readout, task) combination evaluated
// over an ensemble of seeds. Seed index i uses coupling_seed + i for the
// couplings (or ESN weights) and input_seed + i for the STM bit stream.

#include "qrc/esn.hpp"
#include "qrc/readout.hpp"
#include "qrc/reservoir.hpp"
#include "qrc/tasks.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qrc {

inline constexpr const char* kSoftwareVersion = "0.1.0";
inline constexpr std::size_t kMaxSweepCells = 10000;

struct ExperimentConfig {
    ReservoirConfig reservoir;
    TaskSpec task{TaskKind::Narma, 2}; // for STM, param is the largest delay
    ReadoutType readout = ReadoutType::TypeI;
    double ridge = 0.0;
    int seeds = 10;
    NarmaCoefficients narma;
    std::optional<EsnConfig> esn; // when set, the ESN replaces the qubit reservoir

    PhaseSplit phases() const { return reservoir.phases(); }
    void validate() const;
    std::string cell_name() const;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Applies the keys of a flat JSON object on top of `base`; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

struct SeedPair {
    std::uint64_t coupling_seed = 0;
    std::uint64_t input_seed = 0;
};

struct MetricSummary {
    std::string task;   // "narma2", "stm_tau3", ...
    std::string metric; // "nmse" or "stm_capacity"
    std::vector<double> values; // one per seed
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for a single seed
};

struct ExperimentManifest {
    ExperimentConfig config;
    std::vector<SeedPair> seeds;
    std::vector<MetricSummary> metrics;
    std::string software_version = kSoftwareVersion;
    std::string started_utc;
    std::string finished_utc;
};

nlohmann::json manifest_to_json(const ExperimentManifest& manifest);
ExperimentManifest manifest_from_json(const nlohmann::json& j);

/// First-seed time series of a cell, for waveform plots.
struct CellTrajectory {
    PhaseSplit split;
    Eigen::VectorXd inputs;
    Eigen::MatrixXd z;
    Eigen::VectorXd predicted;
    Eigen::VectorXd targets;
};

struct CellResult {
    ExperimentManifest manifest;
    std::optional<CellTrajectory> trajectory; // quantum cells only
};

/// Runs every cell; cells that share a physical configuration share simulations.
/// `jobs` bounds the worker threads (0 = hardware concurrency).
std::vector<CellResult> run_cells(const std::vector<ExperimentConfig>& cells, unsigned jobs = 0);

CellResult run_cell(const ExperimentConfig& config, unsigned jobs = 0);

/// Re-executes the manifest's config and returns it with seeds, metrics and timestamps filled.
ExperimentManifest run_experiment(const ExperimentManifest& manifest_in, unsigned jobs = 0);

struct SweepGrid {
    ExperimentConfig base;
    std::vector<double> gammas{0.1, 0.01};
    std::vector<Topology> topologies{Topology::Linear, Topology::Ring};
    std::vector<ReadoutType> readouts{ReadoutType::TypeI, ReadoutType::TypeII};
    std::vector<TaskSpec> tasks{{TaskKind::Stm, 10},   {TaskKind::Narma, 2},
                                {TaskKind::Narma, 5},  {TaskKind::Narma, 10},
                                {TaskKind::Narma, 15}, {TaskKind::Narma, 20}};

    void validate() const;
    std::vector<ExperimentConfig> cells() const;
};

SweepGrid sweep_grid_from_json(const nlohmann::json& j);

std::vector<CellResult> run_sweep(const SweepGrid& grid, unsigned jobs = 0);

struct EsnGrid {
    ExperimentConfig base;
    EsnConfig esn;
    std::vector<EsnVariant> variants{EsnVariant::Esn1, EsnVariant::Esn3, EsnVariant::Esn5};
    std::vector<TaskSpec> tasks{{TaskKind::Stm, 10},
                                {TaskKind::Narma, 2},
                                {TaskKind::Narma, 5},
                                {TaskKind::Narma, 10},
                                {TaskKind::Narma, 15}};

    void validate() const;
    std::vector<ExperimentConfig> cells() const;
};

EsnGrid esn_grid_from_json(const nlohmann::json& j);

/// Every variant sees the same weight and input seeds.
std::vector<CellResult> run_esn_comparison(const EsnGrid& grid, unsigned jobs = 0);

struct MetricsRow {
    std::string task;
    std::string topology; // "linear", "ring", or the ESN variant
    int readout_type = 1;
    double gamma = 0.0; // 0 for ESN rows
    int seed_count = 0;
    double mean_metric = 0.0;
    double std_metric = 0.0;
};

/// One row per task metric of every manifest, sorted by configuration key.
std::vector<MetricsRow> metrics_rows(const std::vector<ExperimentManifest>& manifests);

std::string format_metrics_csv(const std::vector<MetricsRow>& rows);
std::string format_trajectory_csv(const CellTrajectory& trajectory);

/// Writes metrics.csv, manifest_<cell>.json and trajectory_<cell>.csv into out_dir.
void emit_report(const std::vector<CellResult>& results, const std::filesystem::path& out_dir);

/// Writes metrics.csv only.
void write_metrics_csv(const std::vector<ExperimentManifest>& manifests,
                       const std::filesystem::path& out_dir);

/// Loads manifest_*.json files; directories are scanned (sorted by name).
std::vector<ExperimentManifest> load_manifests(const std::vector<std::filesystem::path>& paths);

} // namespace qrc
