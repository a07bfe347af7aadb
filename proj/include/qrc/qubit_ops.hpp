#pragma once

// N-qubit operators in the computational basis.
//
// Basis convention: index b = b_1 b_2 ... b_N in binary, qubit 1 is the most
// significant bit (leftmost Kronecker factor). |0> is the spin-down ground state
// and Z|0> = +|0>.

#include "qrc/complex_linalg.hpp"

#include <cmath>
#include <numbers>

namespace qrc {

inline constexpr int kMaxQubits = 10;

enum class PauliAxis { X, Y, Z };

/// 1-based qubit label.
struct QubitIndex {
    int value;
    constexpr explicit QubitIndex(int v) : value(v) {}
    friend constexpr bool operator==(QubitIndex, QubitIndex) = default;
};

inline void require_qubit_count(int n_qubits)
{
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, "
                          + std::to_string(kMaxQubits) + "]");
}

inline void require_qubit_index(QubitIndex i, int n_qubits)
{
    require_qubit_count(n_qubits);
    if (i.value < 1 || i.value > n_qubits)
        throw ConfigError("qubit index " + std::to_string(i.value) + " outside [1, "
                          + std::to_string(n_qubits) + "]");
}

template <typename Scalar = double>
ComplexMatrixT<Scalar> pauli(PauliAxis axis)
{
    using C = std::complex<Scalar>;
    ComplexMatrixT<Scalar> m(2, 2);
    switch (axis) {
    case PauliAxis::X: m << C(0), C(1), C(1), C(0); break;
    case PauliAxis::Y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case PauliAxis::Z: m << C(1), C(0), C(0), C(-1); break;
    }
    return m;
}

/// I (x) ... (x) op (x) ... (x) I with the 2x2 `op` at position i.
template <typename Derived>
auto embed_single(const Eigen::MatrixBase<Derived>& op, QubitIndex i, int n_qubits)
{
    require_qubit_index(i, n_qubits);
    using Plain = typename Derived::PlainObject;
    const Eigen::Index left = Eigen::Index{1} << (i.value - 1);
    const Eigen::Index right = Eigen::Index{1} << (n_qubits - i.value);
    return kron(kron(Plain::Identity(left, left), op), Plain::Identity(right, right)).eval();
}

template <typename Scalar = double>
ComplexMatrixT<Scalar> pauli_embed(PauliAxis axis, QubitIndex i, int n_qubits)
{
    return embed_single(pauli<Scalar>(axis), i, n_qubits);
}

/// X_i X_j + Y_i Y_j + Z_i Z_j.
template <typename Scalar = double>
ComplexMatrixT<Scalar> heisenberg_term(QubitIndex i, QubitIndex j, int n_qubits)
{
    require_qubit_index(i, n_qubits);
    require_qubit_index(j, n_qubits);
    if (i == j) throw ConfigError("heisenberg_term: qubit indices must differ");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    ComplexMatrixT<Scalar> h = ComplexMatrixT<Scalar>::Zero(dim, dim);
    for (auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z})
        h += pauli_embed<Scalar>(axis, i, n_qubits) * pauli_embed<Scalar>(axis, j, n_qubits);
    return h;
}

/// Single-qubit input pulse exp(+i pi s X / 2) as a 2x2 matrix.
template <typename Scalar = double>
ComplexMatrixT<Scalar> rotation_x_2x2(Scalar s)
{
    using C = std::complex<Scalar>;
    const Scalar half = std::numbers::pi_v<Scalar> * s / 2;
    ComplexMatrixT<Scalar> r(2, 2);
    r << C(std::cos(half)), C(0, std::sin(half)), C(0, std::sin(half)), C(std::cos(half));
    return r;
}

/// exp(+i pi s X_q / 2) on qubit q (default 1), identity elsewhere.
template <typename Scalar = double>
ComplexMatrixT<Scalar> rotation_x(Scalar s, int n_qubits, QubitIndex qubit = QubitIndex{1})
{
    if (!std::isfinite(s)) throw ConfigError("rotation_x: non-finite input");
    return embed_single(rotation_x_2x2<Scalar>(s), qubit, n_qubits);
}

/// |0...0><0...0|
template <typename Scalar = double>
ComplexMatrixT<Scalar> ground_density(int n_qubits)
{
    require_qubit_count(n_qubits);
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    ComplexMatrixT<Scalar> rho = ComplexMatrixT<Scalar>::Zero(dim, dim);
    rho(0, 0) = 1;
    return rho;
}

} // namespace qrc
