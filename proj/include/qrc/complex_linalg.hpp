#pragma once

// Dense complex linear algebra on top of Eigen: checked products, Kronecker
// products, Hermitian eigendecomposition and exp(-i t H).

#include "qrc/error.hpp"

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace qrc {

template <typename Scalar = double>
using ComplexMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexMatrix = ComplexMatrixT<double>;

template <typename Scalar = double>
using RealVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Frobenius-norm tolerance used for unitarity / Hermiticity / orthonormality checks.
inline constexpr double kLinalgTol = 1e-10;

/// Largest operator dimension accepted by kron (10 qubits).
inline constexpr Eigen::Index kMaxDim = Eigen::Index{1} << 10;

template <typename Scalar>
struct HermitianEigen {
    RealVectorT<Scalar> eigenvalues; // ascending
    ComplexMatrixT<Scalar> eigenvectors; // columns orthonormal
};

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got "
                             + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

} // namespace detail

/// Identity of dimension dim.
template <typename Scalar = double>
ComplexMatrixT<Scalar> identity(Eigen::Index dim)
{
    return ComplexMatrixT<Scalar>::Identity(dim, dim);
}

/// a * b for square matrices of equal dimension.
template <typename DerivedA, typename DerivedB>
auto matmul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    detail::require_square(a, "matmul");
    detail::require_square(b, "matmul");
    if (a.rows() != b.rows())
        throw DimensionError("matmul: dimension mismatch " + std::to_string(a.rows()) + " vs "
                             + std::to_string(b.rows()));
    using Plain = typename DerivedA::PlainObject;
    Plain out = a * b;
    return out;
}

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    detail::require_square(a, "kron");
    detail::require_square(b, "kron");
    const Eigen::Index na = a.rows();
    const Eigen::Index nb = b.rows();
    if (na > kMaxDim / nb)
        throw DimensionError("kron: result dimension " + std::to_string(na) + "*"
                             + std::to_string(nb) + " exceeds limit " + std::to_string(kMaxDim));
    using Plain = typename DerivedA::PlainObject;
    Plain out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j)
            out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
    return out;
}

template <typename Derived>
typename Derived::RealScalar hermiticity_error(const Eigen::MatrixBase<Derived>& h)
{
    return (h - h.adjoint()).norm();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double tol = kLinalgTol)
{
    const auto scale = h.norm();
    if (scale == 0) return true;
    return hermiticity_error(h) / scale < tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kLinalgTol)
{
    using Plain = typename Derived::PlainObject;
    return (u.adjoint() * u - Plain::Identity(u.rows(), u.cols())).norm() < tol;
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending.
template <typename Derived>
HermitianEigen<typename Derived::RealScalar> hermitian_eigen(const Eigen::MatrixBase<Derived>& h)
{
    using Real = typename Derived::RealScalar;
    detail::require_square(h, "hermitian_eigen");
    if (!h.allFinite()) throw NumericalError("hermitian_eigen: non-finite entries");
    if (!is_hermitian(h))
        throw ConfigError("hermitian_eigen: matrix is not Hermitian (relative error "
                          + std::to_string(hermiticity_error(h) / h.norm()) + ")");
    const ComplexMatrixT<Real> m = h;
    Eigen::SelfAdjointEigenSolver<ComplexMatrixT<Real>> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian_eigen: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i t H) from a precomputed eigendecomposition: V exp(-i t Lambda) V^dagger.
template <typename Scalar>
ComplexMatrixT<Scalar> unitary_exp(const HermitianEigen<Scalar>& eig, Scalar t)
{
    using C = std::complex<Scalar>;
    const auto& v = eig.eigenvectors;
    Eigen::Matrix<C, Eigen::Dynamic, 1> phases(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = std::exp(C(0, -t * eig.eigenvalues(k)));
    return v * phases.asDiagonal() * v.adjoint();
}

template <typename Derived>
auto unitary_exp(const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar t)
{
    return unitary_exp(hermitian_eigen(h), t);
}

} // namespace qrc
