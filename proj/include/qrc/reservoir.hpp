#pragma once

// Dissipative spin-qubit reservoir.
//
// One time step, in this order:
//   1. input pulse        rho <- R_X(s) rho R_X(s)^dagger       (qubit 1 by default)
//   2. free evolution     rho <- U rho U^dagger,  U = exp(-i dt H)
//   3. reset dissipation  rho <- (1 - gamma) rho + gamma |0..0><0..0|
//   4. readout            z_i = Tr(Z_i rho)

#include "qrc/complex_linalg.hpp"
#include "qrc/phase.hpp"
#include "qrc/qubit_ops.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qrc {

/// Tolerance on trace / Hermiticity / positivity of the density matrix.
inline constexpr double kStateTol = 1e-10;

enum class Topology { Linear, Ring };

std::string to_string(Topology t);
Topology parse_topology(std::string_view name);

struct Bond {
    QubitIndex i;
    QubitIndex j;
    double coupling;
};

struct CouplingSet {
    std::vector<Bond> bonds;
};

struct ReservoirConfig {
    int n_qubits = 6;
    Topology topology = Topology::Linear;
    double gamma = 0.1;
    double theta0 = 0.5;
    int n_pre = 200;
    int n_fb = 200;
    int n_test = 40;
    std::uint64_t coupling_seed = 1;
    std::uint64_t input_seed = 1;
    int input_qubit = 1;

    double dt() const;
    PhaseSplit phases() const { return {n_pre, n_fb, n_test}; }
    int total_steps() const { return phases().total(); }
    Phase phase_of(int step) const { return phases().phase_of(step); }
    /// Throws ConfigError on out-of-range fields.
    void validate() const;
};

/// Density matrix plus the number of steps already applied.
struct ReservoirState {
    ComplexMatrix rho;
    int step = 0;
};

struct StepOutput {
    Eigen::VectorXd z_expect;
};

/// Per-step Z expectations for a full input sequence (row k = output after step k).
struct Trajectory {
    Eigen::MatrixXd z;
    Eigen::VectorXd inputs;
    std::vector<Phase> phases;
};

/// Bonds (i, i+1), plus (N, 1) for a ring.
std::vector<std::pair<QubitIndex, QubitIndex>> topology_edges(Topology topology, int n_qubits);

/// Uniform [0,1) couplings on the topology's edges, rescaled so the largest equals 1.
CouplingSet sample_couplings(Topology topology, int n_qubits, std::uint64_t seed);

/// sum over bonds of J (XX + YY + ZZ).
ComplexMatrix build_hamiltonian(const CouplingSet& couplings, int n_qubits);

/// Tr(Z_i rho) for i = 1..n_qubits, read off the diagonal.
Eigen::VectorXd measure_z(const ComplexMatrix& rho, int n_qubits);

/// Throws NumericalError unless rho has unit trace, is Hermitian and has
/// no eigenvalue below -tol.
void check_state(const ComplexMatrix& rho, double tol = kStateTol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& rho);

/// Trace distance 0.5 * ||rho - sigma||_1.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// One step with the input pulse on qubit 1. Validates the incoming state and U.
std::pair<ReservoirState, StepOutput> step(const ReservoirState& state, double s_k,
                                           const ComplexMatrix& u, double gamma,
                                           const ComplexMatrix& rho0);

/// A configured reservoir: couplings, Hamiltonian spectrum and U are computed
/// once and reused for every step.
class Reservoir {
public:
    explicit Reservoir(ReservoirConfig config);
    Reservoir(ReservoirConfig config, CouplingSet couplings);

    const ReservoirConfig& config() const { return config_; }
    const CouplingSet& couplings() const { return couplings_; }
    const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
    const ComplexMatrix& propagator() const { return propagator_; }
    const ComplexMatrix& ground() const { return ground_; }

    ReservoirState initial_state() const { return {ground_, 0}; }

    /// Advances `state` in place; checks the state invariants on entry.
    Eigen::VectorXd advance(ReservoirState& state, double s_k) const;

    Trajectory run(const Eigen::VectorXd& inputs) const;

private:
    ReservoirConfig config_;
    CouplingSet couplings_;
    ComplexMatrix hamiltonian_;
    ComplexMatrix propagator_;
    ComplexMatrix ground_;
};

/// Runs `inputs` (length n_pre + n_fb + n_test) from the ground state.
Trajectory run_sequence(const ReservoirConfig& config, const Eigen::VectorXd& inputs);

} // namespace qrc
