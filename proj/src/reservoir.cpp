#include "qrc/reservoir.hpp"

#include "qrc/random.hpp"

#include <algorithm>
#include <bit>
#include <numbers>

namespace qrc {

std::string to_string(Topology t)
{
    return t == Topology::Linear ? "linear" : "ring";
}

Topology parse_topology(std::string_view name)
{
    if (name == "linear") return Topology::Linear;
    if (name == "ring") return Topology::Ring;
    throw ConfigError("unknown topology '" + std::string(name) + "' (expected linear|ring)");
}

double ReservoirConfig::dt() const
{
    return std::numbers::pi * theta0;
}

void ReservoirConfig::validate() const
{
    require_qubit_count(n_qubits);
    if (topology == Topology::Ring && n_qubits < 3)
        throw ConfigError("ring topology needs at least 3 qubits");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    if (!(dt() > 0.0) || !std::isfinite(theta0)) throw ConfigError("theta0 must be positive");
    if (n_pre <= 0 || n_fb <= 0 || n_test <= 0)
        throw ConfigError("phase lengths n_pre, n_fb, n_test must be positive");
    require_qubit_index(QubitIndex{input_qubit}, n_qubits);
}

std::vector<std::pair<QubitIndex, QubitIndex>> topology_edges(Topology topology, int n_qubits)
{
    std::vector<std::pair<QubitIndex, QubitIndex>> edges;
    for (int i = 1; i < n_qubits; ++i)
        edges.emplace_back(QubitIndex{i}, QubitIndex{i + 1});
    if (topology == Topology::Ring && n_qubits >= 3)
        edges.emplace_back(QubitIndex{n_qubits}, QubitIndex{1});
    return edges;
}

CouplingSet sample_couplings(Topology topology, int n_qubits, std::uint64_t seed)
{
    if (n_qubits < 2) throw ConfigError("sample_couplings: need at least 2 qubits");
    auto engine = make_engine(seed, Stream::Couplings);
    CouplingSet set;
    double max_j = 0.0;
    for (auto [i, j] : topology_edges(topology, n_qubits)) {
        const double jij = uniform01(engine);
        max_j = std::max(max_j, jij);
        set.bonds.push_back({i, j, jij});
    }
    if (max_j <= 0.0) throw NumericalError("sample_couplings: all couplings drew zero");
    for (auto& b : set.bonds) b.coupling /= max_j;
    return set;
}

ComplexMatrix build_hamiltonian(const CouplingSet& couplings, int n_qubits)
{
    require_qubit_count(n_qubits);
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (const auto& b : couplings.bonds)
        h += b.coupling * heisenberg_term(b.i, b.j, n_qubits);
    return h;
}

Eigen::VectorXd measure_z(const ComplexMatrix& rho, int n_qubits)
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_qubits);
    for (Eigen::Index b = 0; b < rho.rows(); ++b) {
        const double p = rho(b, b).real();
        for (int q = 0; q < n_qubits; ++q) {
            const bool up = (b >> (n_qubits - 1 - q)) & 1;
            z(q) += up ? -p : p;
        }
    }
    return z;
}

double min_eigenvalue(const ComplexMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma)
{
    const ComplexMatrix diff = rho - sigma;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

void check_state(const ComplexMatrix& rho, double tol)
{
    if (rho.rows() != rho.cols() || !std::has_single_bit(static_cast<std::uint64_t>(rho.rows())))
        throw NumericalError("density matrix must be square with power-of-two dimension");
    if (!rho.allFinite()) throw NumericalError("density matrix has non-finite entries");
    const double trace_err = std::abs(rho.trace() - std::complex<double>(1.0));
    if (trace_err >= tol)
        throw NumericalError("density matrix trace drifted by " + std::to_string(trace_err));
    const double herm_err = hermiticity_error(rho);
    if (herm_err >= tol)
        throw NumericalError("density matrix lost Hermiticity: " + std::to_string(herm_err));
    // rho + tol*I is positive definite iff every eigenvalue of rho exceeds -tol.
    ComplexMatrix shifted = rho;
    shifted.diagonal().array() += tol;
    Eigen::LLT<ComplexMatrix> llt(shifted);
    if (llt.info() != Eigen::Success)
        throw NumericalError("density matrix has an eigenvalue below -"
                             + std::to_string(tol) + " (min " + std::to_string(min_eigenvalue(rho))
                             + ")");
}

namespace {

int qubit_count_of(const ComplexMatrix& rho)
{
    return std::countr_zero(static_cast<std::uint64_t>(rho.rows()));
}

// rho <- (1 - gamma) W rho W^dagger + gamma rho0 with W = U R_X(s), the pulse
// acting on `input_qubit`. W is formed column-wise: R_X mixes column c with c ^ bit.
void evolve(ComplexMatrix& rho, double s, const ComplexMatrix& u, double gamma,
            const ComplexMatrix& rho0, int n_qubits, int input_qubit)
{
    const double half = std::numbers::pi * s / 2;
    const std::complex<double> c(std::cos(half), 0.0);
    const std::complex<double> is(0.0, std::sin(half));
    const Eigen::Index bit = Eigen::Index{1} << (n_qubits - input_qubit);
    ComplexMatrix w(u.rows(), u.cols());
    for (Eigen::Index col = 0; col < u.cols(); ++col)
        w.col(col) = c * u.col(col) + is * u.col(col ^ bit);
    ComplexMatrix tmp(u.rows(), u.cols());
    tmp.noalias() = w * rho;
    rho.noalias() = tmp * w.adjoint();
    rho = (1.0 - gamma) * rho + gamma * rho0;
}

} // namespace

std::pair<ReservoirState, StepOutput> step(const ReservoirState& state, double s_k,
                                           const ComplexMatrix& u, double gamma,
                                           const ComplexMatrix& rho0)
{
    check_state(state.rho);
    if (u.rows() != state.rho.rows() || rho0.rows() != state.rho.rows())
        throw DimensionError("step: U, rho and rho0 dimensions differ");
    if (!is_unitary(u)) throw NumericalError("step: propagator is not unitary");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("step: gamma must lie in [0, 1]");
    if (!std::isfinite(s_k)) throw ConfigError("step: non-finite input");
    const int n = qubit_count_of(state.rho);
    ReservoirState next{state.rho, state.step + 1};
    evolve(next.rho, s_k, u, gamma, rho0, n, 1);
    StepOutput out{measure_z(next.rho, n)};
    return {std::move(next), std::move(out)};
}

Reservoir::Reservoir(ReservoirConfig config)
    : Reservoir(config, sample_couplings(config.topology, config.n_qubits, config.coupling_seed))
{
}

Reservoir::Reservoir(ReservoirConfig config, CouplingSet couplings)
    : config_(config), couplings_(std::move(couplings))
{
    config_.validate();
    hamiltonian_ = build_hamiltonian(couplings_, config_.n_qubits);
    propagator_ = unitary_exp(hermitian_eigen(hamiltonian_), config_.dt());
    if (!is_unitary(propagator_)) throw NumericalError("propagator failed the unitarity check");
    ground_ = ground_density(config_.n_qubits);
}

Eigen::VectorXd Reservoir::advance(ReservoirState& state, double s_k) const
{
    check_state(state.rho);
    if (!std::isfinite(s_k)) throw ConfigError("non-finite input at step " + std::to_string(state.step));
    evolve(state.rho, s_k, propagator_, config_.gamma, ground_, config_.n_qubits, config_.input_qubit);
    ++state.step;
    return measure_z(state.rho, config_.n_qubits);
}

Trajectory Reservoir::run(const Eigen::VectorXd& inputs) const
{
    const int steps = config_.total_steps();
    if (inputs.size() != steps)
        throw ConfigError("run_sequence: expected " + std::to_string(steps) + " inputs, got "
                          + std::to_string(inputs.size()));
    Trajectory traj{Eigen::MatrixXd(steps, config_.n_qubits), inputs, {}};
    traj.phases.reserve(steps);
    auto state = initial_state();
    for (int k = 0; k < steps; ++k) {
        traj.z.row(k) = advance(state, inputs(k)).transpose();
        traj.phases.push_back(config_.phase_of(k));
    }
    return traj;
}

Trajectory run_sequence(const ReservoirConfig& config, const Eigen::VectorXd& inputs)
{
    return Reservoir(config).run(inputs);
}

} // namespace qrc
