#include "qrc/experiment.hpp"

#include "qrc/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace qrc {

using nlohmann::json;

namespace {

std::string now_utc()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string model_name(const ExperimentConfig& c)
{
    return c.esn ? to_string(c.esn->variant) : "qrc";
}

template <typename T>
T get_as(const json& value, const std::string& key)
{
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

// Runs fn(i) for i in [0, n) on at most `jobs` threads. The exception of the
// lowest failing index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn)
{
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    std::vector<std::exception_ptr> errors(n);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : workers) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Simulation {
    Eigen::VectorXd inputs;
    Eigen::MatrixXd states; // <Z_i> per step, or ESN features with intercept
};

SeedPair seed_pair(const ExperimentConfig& c, int index)
{
    return {c.reservoir.coupling_seed + static_cast<std::uint64_t>(index),
            c.reservoir.input_seed + static_cast<std::uint64_t>(index)};
}

Simulation simulate(const ExperimentConfig& c, int seed_index)
{
    const SeedPair seeds = seed_pair(c, seed_index);
    const int steps = c.phases().total();
    Simulation sim;
    sim.inputs = c.task.kind == TaskKind::Stm ? gen_stm(steps, 0, seeds.input_seed).inputs
                                              : gen_narma_input(steps);
    if (c.esn) {
        EsnConfig esn = *c.esn;
        esn.weight_seed = seeds.coupling_seed;
        sim.states = run_esn(esn, sim.inputs);
    } else {
        ReservoirConfig rc = c.reservoir;
        rc.coupling_seed = seeds.coupling_seed;
        rc.input_seed = seeds.input_seed;
        sim.states = Reservoir(rc).run(sim.inputs).z;
    }
    return sim;
}

// Everything that determines a Simulation.
std::string simulation_key(const ExperimentConfig& c)
{
    json j = config_to_json(c);
    for (const char* k : {"task", "stm_max_delay", "readout", "ridge", "seeds", "narma_a",
                          "narma_b", "narma_c", "narma_d"})
        j.erase(k);
    j["input"] = c.task.kind == TaskKind::Stm ? "stm" : "narma";
    return j.dump();
}

Eigen::MatrixXd readout_features(const ExperimentConfig& c, const Simulation& sim)
{
    return c.esn ? sim.states : make_features(sim.states, c.readout);
}

struct SeedEvaluation {
    std::vector<std::pair<std::string, double>> metrics;
    std::optional<CellTrajectory> trajectory;
};

SeedEvaluation evaluate(const ExperimentConfig& c, const Simulation& sim, bool keep_trajectory)
{
    const PhaseSplit split = c.phases();
    const Eigen::MatrixXd features = readout_features(c, sim);
    SeedEvaluation out;
    auto record = [&](const Eigen::VectorXd& targets, const ReadoutFit& fit) {
        if (keep_trajectory && !c.esn)
            out.trajectory = CellTrajectory{split, sim.inputs, sim.states, fit.predicted, targets};
    };
    if (c.task.kind == TaskKind::Stm) {
        const int traj_delay = std::min(1, c.task.param);
        for (int delay = 0; delay <= c.task.param; ++delay) {
            const Eigen::VectorXd targets = delayed_copy(sim.inputs, delay);
            const ReadoutFit fit = fit_on_train(features, targets, split, c.ridge);
            out.metrics.emplace_back("stm_tau" + std::to_string(delay),
                                     stm_capacity(fit.test_predicted, fit.test_target).value);
            if (delay == traj_delay) record(targets, fit);
        }
    } else {
        const Eigen::VectorXd targets = gen_narma_target(sim.inputs, c.task.param, c.narma);
        const ReadoutFit fit = fit_on_train(features, targets, split, c.ridge);
        out.metrics.emplace_back(c.task.name(), nmse(fit.test_predicted, fit.test_target));
        record(targets, fit);
    }
    return out;
}

MetricSummary summarize(std::string task, std::string metric, std::vector<double> values)
{
    MetricSummary s{std::move(task), std::move(metric), std::move(values), 0.0, 0.0};
    const double n = static_cast<double>(s.values.size());
    s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
    if (s.values.size() > 1) {
        double ss = 0.0;
        for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

std::string context(const ExperimentConfig& c, int seed_index)
{
    const SeedPair s = seed_pair(c, seed_index);
    return fmt::format("cell {} (coupling_seed {}, input_seed {})", c.cell_name(), s.coupling_seed,
                       s.input_seed);
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string num(double v)
{
    return fmt::format("{:.15g}", v);
}

} // namespace

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const
{
    reservoir.validate();
    if (task.kind == TaskKind::Stm && task.param < 0)
        throw ConfigError("stm_max_delay must be non-negative");
    if (task.kind == TaskKind::Stm && task.param >= reservoir.n_pre)
        throw ConfigError("stm_max_delay must be shorter than the prep window");
    if (task.kind == TaskKind::Narma && task.param < 2) throw ConfigError("NARMA order must be >= 2");
    if (!(ridge >= 0.0)) throw ConfigError("ridge must be non-negative");
    if (seeds < 1) throw ConfigError("seed count must be at least 1");
    const int columns = esn ? esn->n_nodes + 1
                            : (readout == ReadoutType::TypeI ? reservoir.n_qubits + 1 : 2);
    if (reservoir.n_fb < columns)
        throw ConfigError("training window shorter than the number of readout weights");
    if (reservoir.n_test < 2) throw ConfigError("test window needs at least 2 steps");
    if (esn) esn->validate();
}

std::string ExperimentConfig::cell_name() const
{
    if (esn) return fmt::format("{}_{}", task.name(), to_string(esn->variant));
    return fmt::format("{}_{}_g{:g}_r{}", task.name(), to_string(reservoir.topology),
                       reservoir.gamma, static_cast<int>(readout));
}

json config_to_json(const ExperimentConfig& c)
{
    json j;
    j["model"] = model_name(c);
    j["n_qubits"] = c.reservoir.n_qubits;
    j["topology"] = to_string(c.reservoir.topology);
    j["gamma"] = c.reservoir.gamma;
    j["theta0"] = c.reservoir.theta0;
    j["n_pre"] = c.reservoir.n_pre;
    j["n_fb"] = c.reservoir.n_fb;
    j["n_test"] = c.reservoir.n_test;
    j["coupling_seed"] = c.reservoir.coupling_seed;
    j["input_seed"] = c.reservoir.input_seed;
    j["input_qubit"] = c.reservoir.input_qubit;
    j["task"] = c.task.name();
    if (c.task.kind == TaskKind::Stm) j["stm_max_delay"] = c.task.param;
    j["readout"] = static_cast<int>(c.readout);
    j["ridge"] = c.ridge;
    j["seeds"] = c.seeds;
    j["narma_a"] = c.narma.a;
    j["narma_b"] = c.narma.b;
    j["narma_c"] = c.narma.c;
    j["narma_d"] = c.narma.d;
    if (c.esn) {
        j["esn_n_nodes"] = c.esn->n_nodes;
        j["esn_w_scale"] = c.esn->w_scale;
        j["esn_w_in_scale"] = c.esn->w_in_scale;
    }
    return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    std::optional<int> max_delay;
    EsnConfig esn = c.esn.value_or(EsnConfig{});
    bool esn_keys = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "model") {
            const auto m = get_as<std::string>(value, key);
            if (m == "qrc") c.esn.reset();
            else if (m == "esn1" || m == "esn3" || m == "esn5") {
                esn.variant = parse_esn_variant(m.back() - '0');
                c.esn = esn;
            } else
                throw ConfigError("unknown model '" + m + "' (expected qrc|esn1|esn3|esn5)");
        } else if (key == "n_qubits") c.reservoir.n_qubits = get_as<int>(value, key);
        else if (key == "topology") c.reservoir.topology = parse_topology(get_as<std::string>(value, key));
        else if (key == "gamma") c.reservoir.gamma = get_as<double>(value, key);
        else if (key == "theta0") c.reservoir.theta0 = get_as<double>(value, key);
        else if (key == "n_pre") c.reservoir.n_pre = get_as<int>(value, key);
        else if (key == "n_fb") c.reservoir.n_fb = get_as<int>(value, key);
        else if (key == "n_test") c.reservoir.n_test = get_as<int>(value, key);
        else if (key == "coupling_seed") c.reservoir.coupling_seed = get_as<std::uint64_t>(value, key);
        else if (key == "input_seed") c.reservoir.input_seed = get_as<std::uint64_t>(value, key);
        else if (key == "input_qubit") c.reservoir.input_qubit = get_as<int>(value, key);
        else if (key == "task") c.task = parse_task(get_as<std::string>(value, key));
        else if (key == "stm_max_delay") max_delay = get_as<int>(value, key);
        else if (key == "readout") c.readout = parse_readout(get_as<int>(value, key));
        else if (key == "ridge") c.ridge = get_as<double>(value, key);
        else if (key == "seeds") c.seeds = get_as<int>(value, key);
        else if (key == "narma_a") c.narma.a = get_as<double>(value, key);
        else if (key == "narma_b") c.narma.b = get_as<double>(value, key);
        else if (key == "narma_c") c.narma.c = get_as<double>(value, key);
        else if (key == "narma_d") c.narma.d = get_as<double>(value, key);
        else if (key == "esn_n_nodes") { esn.n_nodes = get_as<int>(value, key); esn_keys = true; }
        else if (key == "esn_w_scale") { esn.w_scale = get_as<double>(value, key); esn_keys = true; }
        else if (key == "esn_w_in_scale") { esn.w_in_scale = get_as<double>(value, key); esn_keys = true; }
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    if (c.esn) {
        esn.variant = c.esn->variant;
        c.esn = esn;
    } else if (esn_keys) {
        throw ConfigError("esn_* keys require an ESN model");
    }
    if (max_delay) {
        if (c.task.kind != TaskKind::Stm) throw ConfigError("stm_max_delay given for a NARMA task");
        c.task.param = *max_delay;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Manifests

json manifest_to_json(const ExperimentManifest& m)
{
    json j;
    j["schema"] = "qrc-manifest/1";
    j["software_version"] = m.software_version;
    j["cell"] = m.config.cell_name();
    j["config"] = config_to_json(m.config);
    j["seeds"] = json::array();
    for (const auto& s : m.seeds)
        j["seeds"].push_back({{"coupling_seed", s.coupling_seed}, {"input_seed", s.input_seed}});
    j["metrics"] = json::array();
    for (const auto& s : m.metrics)
        j["metrics"].push_back({{"task", s.task},
                                {"metric", s.metric},
                                {"values", s.values},
                                {"mean", s.mean},
                                {"std", s.std}});
    j["scoring"] = "readout trained on the n_fb train rows; metrics over the n_test test rows";
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    return j;
}

ExperimentManifest manifest_from_json(const json& j)
{
    try {
        ExperimentManifest m;
        m.config = config_from_json(j.at("config"));
        m.software_version = j.value("software_version", std::string(kSoftwareVersion));
        m.started_utc = j.value("started_utc", std::string());
        m.finished_utc = j.value("finished_utc", std::string());
        if (j.contains("seeds"))
            for (const auto& s : j.at("seeds"))
                m.seeds.push_back({s.at("coupling_seed").get<std::uint64_t>(),
                                   s.at("input_seed").get<std::uint64_t>()});
        if (j.contains("metrics"))
            for (const auto& s : j.at("metrics"))
                m.metrics.push_back(summarize(s.at("task").get<std::string>(),
                                              s.at("metric").get<std::string>(),
                                              s.at("values").get<std::vector<double>>()));
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Running

std::vector<CellResult> run_cells(const std::vector<ExperimentConfig>& cells, unsigned jobs)
{
    for (const auto& c : cells) c.validate();
    const std::string started = now_utc();

    // Group cells by simulation; one job per (group, seed index).
    std::map<std::string, std::size_t> group_of_key;
    std::vector<std::size_t> cell_group(cells.size());
    std::vector<std::size_t> group_leader;
    std::vector<int> group_seeds;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto [it, inserted] = group_of_key.emplace(simulation_key(cells[i]), group_leader.size());
        if (inserted) {
            group_leader.push_back(i);
            group_seeds.push_back(0);
        }
        cell_group[i] = it->second;
        group_seeds[it->second] = std::max(group_seeds[it->second], cells[i].seeds);
    }
    std::vector<std::pair<std::size_t, int>> job_list;
    for (std::size_t g = 0; g < group_leader.size(); ++g)
        for (int s = 0; s < group_seeds[g]; ++s) job_list.emplace_back(g, s);

    std::vector<Simulation> sims(job_list.size());
    std::vector<std::vector<std::size_t>> job_index(group_leader.size());
    for (std::size_t k = 0; k < job_list.size(); ++k) job_index[job_list[k].first].push_back(k);

    auto with_context = [](const ExperimentConfig& c, int seed, auto&& fn) {
        try {
            fn();
        } catch (const NumericalError& e) {
            throw NumericalError(context(c, seed) + ": " + e.what());
        }
    };

    parallel_for(job_list.size(), jobs, [&](std::size_t k) {
        const auto [g, s] = job_list[k];
        const ExperimentConfig& leader = cells[group_leader[g]];
        with_context(leader, s, [&] { sims[k] = simulate(leader, s); });
    });

    std::vector<CellResult> results(cells.size());
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        const ExperimentConfig& c = cells[i];
        CellResult& r = results[i];
        r.manifest.config = c;
        r.manifest.started_utc = started;
        std::vector<std::string> names;
        std::vector<std::vector<double>> values;
        for (int s = 0; s < c.seeds; ++s) {
            r.manifest.seeds.push_back(seed_pair(c, s));
            SeedEvaluation ev;
            with_context(c, s, [&] {
                ev = evaluate(c, sims[job_index[cell_group[i]][s]], s == 0);
            });
            if (s == 0) {
                r.trajectory = std::move(ev.trajectory);
                for (const auto& [name, v] : ev.metrics) names.push_back(name);
                values.resize(names.size());
            }
            for (std::size_t m = 0; m < ev.metrics.size(); ++m) values[m].push_back(ev.metrics[m].second);
        }
        const std::string metric = c.task.kind == TaskKind::Stm ? "stm_capacity" : "nmse";
        for (std::size_t m = 0; m < names.size(); ++m)
            r.manifest.metrics.push_back(summarize(names[m], metric, values[m]));
    });

    const std::string finished = now_utc();
    for (auto& r : results) r.manifest.finished_utc = finished;
    return results;
}

CellResult run_cell(const ExperimentConfig& config, unsigned jobs)
{
    return std::move(run_cells({config}, jobs).front());
}

ExperimentManifest run_experiment(const ExperimentManifest& manifest_in, unsigned jobs)
{
    return run_cell(manifest_in.config, jobs).manifest;
}

// ---------------------------------------------------------------------------
// Grids

void SweepGrid::validate() const
{
    if (gammas.empty() || topologies.empty() || readouts.empty() || tasks.empty())
        throw ConfigError("sweep grid axes must be nonempty");
    const std::size_t n = gammas.size() * topologies.size() * readouts.size() * tasks.size();
    if (n > kMaxSweepCells)
        throw ConfigError(fmt::format("sweep grid has {} cells (limit {})", n, kMaxSweepCells));
}

std::vector<ExperimentConfig> SweepGrid::cells() const
{
    validate();
    std::vector<ExperimentConfig> out;
    for (auto topology : topologies)
        for (double gamma : gammas)
            for (auto readout : readouts)
                for (const auto& task : tasks) {
                    ExperimentConfig c = base;
                    c.esn.reset();
                    c.reservoir.topology = topology;
                    c.reservoir.gamma = gamma;
                    c.readout = readout;
                    c.task = task;
                    out.push_back(c);
                }
    return out;
}

namespace {

std::vector<TaskSpec> parse_task_list(const json& value, int max_delay)
{
    std::vector<TaskSpec> tasks;
    for (const auto& t : get_as<std::vector<std::string>>(value, "tasks")) {
        TaskSpec spec = parse_task(t);
        if (spec.kind == TaskKind::Stm) spec.param = max_delay;
        tasks.push_back(spec);
    }
    return tasks;
}

int max_delay_of(const json& j)
{
    return j.contains("stm_max_delay") ? get_as<int>(j.at("stm_max_delay"), "stm_max_delay") : 10;
}

// Splits grid axes out of `j`; the remainder is a flat base config.
json strip(const json& j, std::initializer_list<const char*> keys)
{
    if (!j.is_object()) throw ConfigError("grid config must be a JSON object");
    json rest = j;
    for (const char* k : keys) rest.erase(k);
    rest.erase("stm_max_delay");
    return rest;
}

} // namespace

SweepGrid sweep_grid_from_json(const json& j)
{
    SweepGrid grid;
    grid.base = config_from_json(strip(j, {"gammas", "topologies", "readouts", "tasks"}));
    const int max_delay = max_delay_of(j);
    for (auto& t : grid.tasks)
        if (t.kind == TaskKind::Stm) t.param = max_delay;
    if (j.contains("gammas")) grid.gammas = get_as<std::vector<double>>(j.at("gammas"), "gammas");
    if (j.contains("topologies")) {
        grid.topologies.clear();
        for (const auto& t : get_as<std::vector<std::string>>(j.at("topologies"), "topologies"))
            grid.topologies.push_back(parse_topology(t));
    }
    if (j.contains("readouts")) {
        grid.readouts.clear();
        for (int r : get_as<std::vector<int>>(j.at("readouts"), "readouts"))
            grid.readouts.push_back(parse_readout(r));
    }
    if (j.contains("tasks")) grid.tasks = parse_task_list(j.at("tasks"), max_delay);
    grid.validate();
    return grid;
}

std::vector<CellResult> run_sweep(const SweepGrid& grid, unsigned jobs)
{
    return run_cells(grid.cells(), jobs);
}

void EsnGrid::validate() const
{
    if (variants.empty()) throw ConfigError("ESN comparison needs at least one variant");
    if (tasks.empty()) throw ConfigError("ESN comparison needs at least one task");
    esn.validate();
    if (variants.size() * tasks.size() > kMaxSweepCells) throw ConfigError("ESN grid too large");
}

std::vector<ExperimentConfig> EsnGrid::cells() const
{
    validate();
    std::vector<ExperimentConfig> out;
    for (auto variant : variants)
        for (const auto& task : tasks) {
            ExperimentConfig c = base;
            EsnConfig e = esn;
            e.variant = variant;
            c.esn = e;
            c.task = task;
            c.readout = ReadoutType::TypeI;
            out.push_back(c);
        }
    return out;
}

EsnGrid esn_grid_from_json(const json& j)
{
    EsnGrid grid;
    json rest = strip(j, {"variants", "tasks"});
    for (const char* k : {"esn_n_nodes", "esn_w_scale", "esn_w_in_scale"}) {
        if (!rest.contains(k)) continue;
        const std::string key = k;
        if (key == "esn_n_nodes") grid.esn.n_nodes = get_as<int>(rest.at(k), key);
        if (key == "esn_w_scale") grid.esn.w_scale = get_as<double>(rest.at(k), key);
        if (key == "esn_w_in_scale") grid.esn.w_in_scale = get_as<double>(rest.at(k), key);
        rest.erase(k);
    }
    rest.erase("model");
    grid.base = config_from_json(rest);
    const int max_delay = max_delay_of(j);
    for (auto& t : grid.tasks)
        if (t.kind == TaskKind::Stm) t.param = max_delay;
    if (j.contains("variants")) {
        grid.variants.clear();
        for (int v : get_as<std::vector<int>>(j.at("variants"), "variants"))
            grid.variants.push_back(parse_esn_variant(v));
    }
    if (j.contains("tasks")) grid.tasks = parse_task_list(j.at("tasks"), max_delay);
    grid.validate();
    return grid;
}

std::vector<CellResult> run_esn_comparison(const EsnGrid& grid, unsigned jobs)
{
    return run_cells(grid.cells(), jobs);
}

// ---------------------------------------------------------------------------
// Output

std::vector<MetricsRow> metrics_rows(const std::vector<ExperimentManifest>& manifests)
{
    std::vector<MetricsRow> rows;
    for (const auto& m : manifests) {
        const auto& c = m.config;
        for (const auto& s : m.metrics)
            rows.push_back({s.task, c.esn ? to_string(c.esn->variant) : to_string(c.reservoir.topology),
                            static_cast<int>(c.readout), c.esn ? 0.0 : c.reservoir.gamma,
                            static_cast<int>(s.values.size()), s.mean, s.std});
    }
    // "stm_tau10" must sort after "stm_tau9": split the trailing number off.
    auto key = [](const MetricsRow& r) {
        const auto pos = r.task.find_last_not_of("0123456789");
        const std::string stem = r.task.substr(0, pos + 1);
        const int number = pos + 1 < r.task.size() ? std::stoi(r.task.substr(pos + 1)) : -1;
        return std::make_tuple(r.topology, r.readout_type, r.gamma, stem, number);
    };
    std::stable_sort(rows.begin(), rows.end(),
                     [&](const MetricsRow& a, const MetricsRow& b) { return key(a) < key(b); });
    return rows;
}

std::string format_metrics_csv(const std::vector<MetricsRow>& rows)
{
    std::string out = "task,topology,readout_type,gamma,seed_count,mean_metric,std_metric\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{},{}\n", r.task, r.topology, r.readout_type, num(r.gamma),
                           r.seed_count, num(r.mean_metric), num(r.std_metric));
    return out;
}

std::string format_trajectory_csv(const CellTrajectory& t)
{
    const Eigen::Index n_z = t.z.cols();
    std::string out = "step,phase,s_k";
    for (Eigen::Index i = 1; i <= n_z; ++i) out += fmt::format(",z_{}", i);
    out += ",y_pred,y_target\n";
    for (Eigen::Index k = 0; k < t.z.rows(); ++k) {
        out += fmt::format("{},{},{}", k, to_string(t.split.phase_of(static_cast<int>(k))),
                           num(t.inputs(k)));
        for (Eigen::Index i = 0; i < n_z; ++i) out += "," + num(t.z(k, i));
        out += fmt::format(",{},{}\n", num(t.predicted(k)), num(t.targets(k)));
    }
    return out;
}

namespace {

void ensure_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");
}

} // namespace

void write_metrics_csv(const std::vector<ExperimentManifest>& manifests,
                       const std::filesystem::path& out_dir)
{
    if (manifests.empty()) throw ConfigError("no manifests to report");
    ensure_dir(out_dir);
    write_file(out_dir / "metrics.csv", format_metrics_csv(metrics_rows(manifests)));
}

void emit_report(const std::vector<CellResult>& results, const std::filesystem::path& out_dir)
{
    if (results.empty()) throw ConfigError("no results to report");
    std::vector<ExperimentManifest> manifests;
    for (const auto& r : results) manifests.push_back(r.manifest);
    write_metrics_csv(manifests, out_dir);
    for (const auto& r : results) {
        const std::string cell = r.manifest.config.cell_name();
        write_file(out_dir / ("manifest_" + cell + ".json"), manifest_to_json(r.manifest).dump(2) + "\n");
        if (r.trajectory)
            write_file(out_dir / ("trajectory_" + cell + ".csv"), format_trajectory_csv(*r.trajectory));
    }
}

std::vector<ExperimentManifest> load_manifests(const std::vector<std::filesystem::path>& paths)
{
    std::vector<std::filesystem::path> files;
    for (const auto& p : paths) {
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::directory_iterator(p)) {
                const std::string name = entry.path().filename().string();
                if (name.starts_with("manifest_") && name.ends_with(".json")) found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    std::vector<ExperimentManifest> manifests;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw ConfigError("cannot read manifest '" + f.string() + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError("manifest '" + f.string() + "' is not valid JSON: " + e.what());
        }
        manifests.push_back(manifest_from_json(j));
    }
    return manifests;
}

} // namespace qrc
