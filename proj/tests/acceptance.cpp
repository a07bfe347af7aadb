// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exits 1 if any criterion fails.

#include "oracle/two_qubit_oracle.hpp"

#include "qrc/error.hpp"
#include "qrc/experiment.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace qrc;
namespace fs = std::filesystem;

namespace {

constexpr int kSeeds = 10;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string note)
    {
        pass = pass && ok;
        notes.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", note));
    }
};

// ---------------------------------------------------------------- criterion 1

Outcome exactness()
{
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();

    for (auto topology : {Topology::Linear, Topology::Ring}) {
        ReservoirConfig c;
        c.topology = topology;
        const Reservoir r(c);
        const auto& u = r.propagator();
        const double err = (u.adjoint() * u - identity(u.rows())).norm();
        out.require(err < 1e-10, fmt::format("||U^dag U - I||_F = {:.2e} ({}, N=6)",
                                             err, to_string(topology)));
    }

    {
        ReservoirConfig c;
        c.n_qubits = 4;
        const Reservoir r(c);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> s_dist(0.0, 1.0);
        auto state = r.initial_state();
        double trace_err = 0, herm_err = 0, min_eig = 1;
        for (int k = 0; k < 10000; ++k) {
            r.advance(state, s_dist(rng));
            trace_err = std::max(trace_err, std::abs(state.rho.trace() - std::complex<double>(1)));
            herm_err = std::max(herm_err, hermiticity_error(state.rho));
            // advance() already rejects any state failing a Cholesky positivity test
            if (k % 10 == 9) min_eig = std::min(min_eig, min_eigenvalue(state.rho));
        }
        out.require(trace_err < 1e-9 && herm_err < 1e-9 && min_eig > -1e-9,
                    fmt::format("10000 steps (N=4): max |tr-1| = {:.1e}, max herm = {:.1e}, "
                                "min eig = {:.1e}",
                                trace_err, herm_err, min_eig));
    }

    for (double gamma : {0.01, 0.1}) {
        ReservoirConfig c;
        c.gamma = gamma;
        const Reservoir r(c);
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> s_dist(0.0, 1.0);
        ReservoirState a = r.initial_state();
        const Eigen::Index dim = a.rho.rows();
        ReservoirState b{ComplexMatrix(identity(dim) / static_cast<double>(dim)), 0};
        const double d0 = trace_distance(a.rho, b.rho);
        double worst = 0;
        for (int k = 1; k <= 100; ++k) {
            const double s = s_dist(rng);
            r.advance(a, s);
            r.advance(b, s);
            if (k % 10 != 0) continue;
            const double expected = std::pow(1.0 - gamma, k) * d0;
            worst = std::max(worst, std::abs(trace_distance(a.rho, b.rho) - expected) / expected);
        }
        out.require(worst < 1e-8, fmt::format("contraction, gamma = {}: max relative error {:.1e} "
                                              "(k <= 100)",
                                              gamma, worst));
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < 1.0, fmt::format("runtime {:.3f} s", secs));
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome oracle_equivalence()
{
    Outcome out;
    ReservoirConfig c;
    c.n_qubits = 2;
    c.gamma = 0.1;
    const Reservoir r(c, CouplingSet{{{QubitIndex{1}, QubitIndex{2}, 1.0}}});

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> s_dist(0.0, 1.0);
    auto state = r.initial_state();
    oracle::M4 rho = oracle::ground();
    double worst_rho = 0, worst_z = 0;
    for (int k = 0; k < 50; ++k) {
        const double s = s_dist(rng);
        const Eigen::VectorXd z = r.advance(state, s);
        rho = oracle::step(rho, s, c.dt(), c.gamma);
        const auto z_ref = oracle::z_expect(rho);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                worst_rho = std::max(worst_rho, std::abs(state.rho(i, j) - rho[i][j]));
        for (int q = 0; q < 2; ++q) worst_z = std::max(worst_z, std::abs(z(q) - z_ref[q]));
    }
    out.require(worst_rho < 1e-9, fmt::format("50 steps: max |rho - rho_ref| = {:.1e}", worst_rho));
    out.require(worst_z < 1e-9, fmt::format("50 steps: max |z - z_ref| = {:.1e}", worst_z));
    return out;
}

// ---------------------------------------------------------- criteria 3 to 6

struct CellKey {
    std::string task;
    Topology topology;
    double gamma;
    ReadoutType readout;
    auto operator<=>(const CellKey&) const = default;
};

struct QuantumResults {
    std::map<CellKey, ExperimentManifest> cells;
    double seconds = 0;

    double mean(const std::string& task, Topology t, double gamma, ReadoutType r,
                const std::string& metric_task) const
    {
        for (const auto& m : cells.at({task, t, gamma, r}).metrics)
            if (m.task == metric_task) return m.mean;
        throw std::logic_error("missing metric " + metric_task);
    }
    std::vector<double> stm_curve(ReadoutType r) const
    {
        std::vector<double> curve;
        for (const auto& m : cells.at({"stm", Topology::Linear, 0.1, r}).metrics)
            curve.push_back(m.mean);
        return curve;
    }
};

QuantumResults run_quantum_grid()
{
    std::vector<ExperimentConfig> cells;
    for (auto readout : {ReadoutType::TypeI, ReadoutType::TypeII}) {
        ExperimentConfig c;
        c.seeds = kSeeds;
        c.task = {TaskKind::Stm, 10};
        c.readout = readout;
        cells.push_back(c);
        for (double gamma : {0.1, 0.01})
            for (auto topology : {Topology::Linear, Topology::Ring})
                for (int order : {2, 5, 10}) {
                    ExperimentConfig n;
                    n.seeds = kSeeds;
                    n.task = {TaskKind::Narma, order};
                    n.readout = readout;
                    n.reservoir.gamma = gamma;
                    n.reservoir.topology = topology;
                    cells.push_back(n);
                }
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_cells(cells);
    QuantumResults q;
    q.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& r : results) {
        const auto& c = r.manifest.config;
        q.cells[{c.task.name(), c.reservoir.topology, c.reservoir.gamma, c.readout}] = r.manifest;
    }
    return q;
}

std::string join(const std::vector<double>& v, const char* spec = "{:.3f}")
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + fmt::format(fmt::runtime(spec), v[i]);
    return s;
}

Outcome stm_shape(const QuantumResults& q)
{
    Outcome out;
    const auto curve = q.stm_curve(ReadoutType::TypeI);
    out.notes.push_back(fmt::format("     C(tau = 0..10) = {}", join(curve)));
    out.require(curve[1] > 0.9, fmt::format("C(1) = {:.3f} > 0.9", curve[1]));
    bool monotone = true;
    for (std::size_t t = 1; t < curve.size(); ++t) monotone = monotone && curve[t] <= curve[t - 1] + 0.05;
    out.require(monotone, "non-increasing within +0.05");
    out.require(curve[8] < 0.5, fmt::format("C(8) = {:.3f} < 0.5", curve[8]));
    out.require(q.seconds < 600, fmt::format("quantum grid runtime {:.1f} s", q.seconds));
    return out;
}

Outcome narma_magnitudes(const QuantumResults& q)
{
    Outcome out;
    for (auto topology : {Topology::Linear, Topology::Ring})
        for (auto readout : {ReadoutType::TypeI, ReadoutType::TypeII})
            for (int order : {2, 5, 10}) {
                const std::string task = fmt::format("narma{}", order);
                const double v = q.mean(task, topology, 0.1, readout, task);
                const double bound = order == 2 ? 1e-3 : 5e-2;
                out.require(v < bound, fmt::format("{:<7} {:<6} type {}: NMSE {:.2e} < {:.0e}", task,
                                                   to_string(topology), static_cast<int>(readout), v,
                                                   bound));
            }
    return out;
}

Outcome dissipation_direction(const QuantumResults& q)
{
    Outcome out;
    for (auto topology : {Topology::Linear, Topology::Ring})
        for (auto readout : {ReadoutType::TypeI, ReadoutType::TypeII})
            for (int order : {2, 5, 10}) {
                const std::string task = fmt::format("narma{}", order);
                const double hi = q.mean(task, topology, 0.1, readout, task);
                const double lo = q.mean(task, topology, 0.01, readout, task);
                out.require(hi < lo, fmt::format("{:<7} {:<6} type {}: {:.2e} (g=0.1) < {:.2e} (g=0.01)",
                                                 task, to_string(topology),
                                                 static_cast<int>(readout), hi, lo));
            }
    return out;
}

Outcome readout_dominance(const QuantumResults& q)
{
    Outcome out;
    const auto one = q.stm_curve(ReadoutType::TypeI);
    const auto two = q.stm_curve(ReadoutType::TypeII);
    out.notes.push_back(fmt::format("     type I  = {}", join(one)));
    out.notes.push_back(fmt::format("     type II = {}", join(two)));
    for (std::size_t t = 0; t < one.size(); ++t)
        out.require(one[t] >= two[t], fmt::format("tau = {}: {:.3f} >= {:.3f}", t, one[t], two[t]));
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome esn_ordering()
{
    Outcome out;
    EsnGrid grid;
    grid.base.seeds = kSeeds;
    grid.tasks = {{TaskKind::Stm, 10}, {TaskKind::Narma, 2}, {TaskKind::Narma, 5}, {TaskKind::Narma, 10}};
    std::map<std::pair<EsnVariant, std::string>, double> mean;
    for (const auto& r : run_esn_comparison(grid))
        for (const auto& m : r.manifest.metrics) mean[{r.manifest.config.esn->variant, m.task}] = m.mean;

    using enum EsnVariant;
    for (int tau : {2, 3, 4}) {
        const std::string t = fmt::format("stm_tau{}", tau);
        const double e1 = mean[{Esn1, t}], e3 = mean[{Esn3, t}], e5 = mean[{Esn5, t}];
        out.require(e1 >= e3 && e3 >= e5,
                    fmt::format("STM tau = {}: ESN1 {:.3f} >= ESN3 {:.3f} >= ESN5 {:.3f}", tau, e1, e3, e5));
    }
    for (int order : {2, 5, 10}) {
        const std::string t = fmt::format("narma{}", order);
        const double e1 = mean[{Esn1, t}], e3 = mean[{Esn3, t}];
        const double ratio = std::max(e1, e3) / std::min(e1, e3);
        out.require(ratio < 10.0, fmt::format("{:<7}: ESN1 {:.2e}, ESN3 {:.2e}, ratio {:.2f} < 10", t,
                                              e1, e3, ratio));
    }
    return out;
}

// ---------------------------------------------------------------- criterion 8

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const QuantumResults& q)
{
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "qrc_acceptance";
    fs::remove_all(root);

    std::vector<CellResult> first;
    for (const auto& key : {CellKey{"stm", Topology::Linear, 0.1, ReadoutType::TypeI},
                            CellKey{"narma5", Topology::Ring, 0.01, ReadoutType::TypeII}})
        first.push_back({q.cells.at(key), std::nullopt});
    emit_report(first, root / "first");

    const auto stored = load_manifests({root / "first"});
    std::vector<ExperimentManifest> rerun;
    for (const auto& m : stored) rerun.push_back(run_experiment(m));
    write_metrics_csv(rerun, root / "rerun");

    const auto a = slurp(root / "first" / "metrics.csv");
    const auto b = slurp(root / "rerun" / "metrics.csv");
    out.require(!a.empty() && a == b,
                fmt::format("{} manifests re-run, metrics.csv {} bytes, identical: {}", stored.size(),
                            a.size(), a == b ? "yes" : "no"));
    fs::remove_all(root);
    return out;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };

    std::optional<QuantumResults> grid;
    auto quantum = [&]() -> const QuantumResults& {
        if (!grid) grid = run_quantum_grid();
        return *grid;
    };

    const std::vector<Criterion> criteria{
        {1, "exactness suite", exactness},
        {2, "two-qubit oracle equivalence", oracle_equivalence},
        {3, "STM shape at defaults", [&] { return stm_shape(quantum()); }},
        {4, "NARMA magnitudes at gamma = 0.1", [&] { return narma_magnitudes(quantum()); }},
        {5, "dissipation direction", [&] { return dissipation_direction(quantum()); }},
        {6, "type I readout dominates type II", [&] { return readout_dominance(quantum()); }},
        {7, "ESN ordering", esn_ordering},
        {8, "manifest re-run determinism", [&] { return determinism(quantum()); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += o.pass ? 0 : 1;
        std::cout << fmt::format("[{}] {}. {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name);
        for (const auto& n : o.notes) std::cout << "       " << n << "\n";
        std::cout.flush();
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
