#pragma once

// Real Lie algebras on a fixed Euclidean-orthonormal basis, described by structure constants.
//
// Indexing: basis vectors are written e1..en in documentation and configuration files (1-based);
// every C++ interface here is 0-based, so e1 is index 0. For the five-dimensional Heisenberg algebra
// the basis is ordered (e1, e2, e3, e4, Z), i.e. the center Z has index 4.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include "finsler/errors.hpp"

namespace finsler {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Vector parameter that accepts any Eigen expression once Scalar is fixed by another argument.
template <typename Scalar>
using VectorArg = std::type_identity_t<Vector<Scalar>>;

/// Flattened index of the ordered pair (i, j) in a d×d² bilinear table.
inline Eigen::Index pair_index(Eigen::Index dim, Eigen::Index i, Eigen::Index j) { return i * dim + j; }

/// Coordinates x_i y_j of x⊗y laid out with pair_index, so that a d×d² table T gives the
/// bilinear map (x, y) ↦ T · pair_coordinates(x, y).
template <typename DerivedX, typename DerivedY>
Vector<typename DerivedX::Scalar> pair_coordinates(const Eigen::MatrixBase<DerivedX>& x,
                                                   const Eigen::MatrixBase<DerivedY>& y)
{
    const auto dim = x.size();
    Vector<typename DerivedX::Scalar> out(dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            out(pair_index(dim, i, j)) = x(i) * y(j);
    return out;
}

/// Finite-dimensional real Lie algebra with an implicit Euclidean inner product for which the
/// stored basis is orthonormal. The structure constants are kept as a dim × dim² matrix whose
/// column pair_index(i, j) holds the coordinates of [e_i, e_j].
template <typename Scalar>
class MetricLieAlgebra {
public:
    using VectorType = Vector<Scalar>;
    using MatrixType = Matrix<Scalar>;

    explicit MetricLieAlgebra(MatrixType structure) : structure_(std::move(structure))
    {
        if (structure_.rows() <= 0 || structure_.cols() != structure_.rows() * structure_.rows())
            throw InputError("structure table must be dim x dim^2 with dim > 0");
    }

    static MetricLieAlgebra abelian(Eigen::Index dim)
    {
        if (dim <= 0)
            throw InputError("dimension must be positive");
        return MetricLieAlgebra(MatrixType::Zero(dim, dim * dim));
    }

    Eigen::Index dim() const { return structure_.rows(); }

    /// c[i][j][k]: coefficient of e_k in [e_i, e_j].
    Scalar constant(Eigen::Index i, Eigen::Index j, Eigen::Index k) const
    {
        return structure_(k, pair_index(dim(), i, j));
    }

    const MatrixType& structure() const { return structure_; }

    VectorType basis(Eigen::Index i) const { return VectorType::Unit(dim(), i); }

private:
    MatrixType structure_;
};

template <typename Scalar>
void require_dim(const MetricLieAlgebra<Scalar>& a, const VectorArg<Scalar>& x, const char* what)
{
    if (x.size() != a.dim())
        throw InputError(std::string(what) + ": expected " + std::to_string(a.dim()) + " coordinates, got " +
                         std::to_string(x.size()));
}

template <typename Scalar>
Vector<Scalar> bracket(const MetricLieAlgebra<Scalar>& a, const VectorArg<Scalar>& x, const VectorArg<Scalar>& y)
{
    require_dim(a, x, "bracket");
    require_dim(a, y, "bracket");
    return a.structure() * pair_coordinates(x, y);
}

template <typename Scalar>
struct ValidationReport {
    Scalar antisymmetry_defect{0};
    Scalar jacobi_defect{0};
    Scalar tolerance{1e-12};

    bool antisymmetric() const { return antisymmetry_defect <= tolerance; }
    bool jacobi() const { return jacobi_defect <= tolerance; }
    bool passed() const { return antisymmetric() && jacobi(); }
};

/// Largest antisymmetry and Jacobi defects over all basis pairs and triples.
template <typename Scalar>
ValidationReport<Scalar> validate(const MetricLieAlgebra<Scalar>& a, Scalar tolerance = Scalar(1e-12))
{
    using std::abs;
    ValidationReport<Scalar> report;
    report.tolerance = tolerance;
    const auto n = a.dim();

    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                report.antisymmetry_defect =
                    std::max(report.antisymmetry_defect, abs(a.constant(i, j, k) + a.constant(j, i, k)));

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) {
                const auto ei = a.basis(i), ej = a.basis(j), ek = a.basis(k);
                const Vector<Scalar> cyclic = bracket(a, ei, bracket(a, ej, ek)) +
                                              bracket(a, ej, bracket(a, ek, ei)) +
                                              bracket(a, ek, bracket(a, ei, ej));
                report.jacobi_defect = std::max(report.jacobi_defect, cyclic.cwiseAbs().maxCoeff());
            }
        }
    }
    return report;
}

/// Five-dimensional Heisenberg algebra in an orthonormal basis (e1, e2, e3, e4, Z):
/// [e1, e2] = λZ, [e3, e4] = μZ, all other brackets of basis vectors vanish. Requires λ ≥ μ > 0.
template <typename Scalar>
MetricLieAlgebra<Scalar> heisenberg5(Scalar lambda, Scalar mu)
{
    using std::isfinite;
    if (!isfinite(lambda) || !isfinite(mu) || !(mu > 0) || !(lambda >= mu))
        throw ParameterError("heisenberg5 requires lambda >= mu > 0");
    Matrix<Scalar> c = Matrix<Scalar>::Zero(5, 25);
    c(4, pair_index(5, 0, 1)) = lambda;
    c(4, pair_index(5, 1, 0)) = -lambda;
    c(4, pair_index(5, 2, 3)) = mu;
    c(4, pair_index(5, 3, 2)) = -mu;
    return MetricLieAlgebra<Scalar>(std::move(c));
}

template <typename Scalar>
struct HeisenbergParameters {
    Scalar lambda;
    Scalar mu;
};

/// Recovers (λ, μ) when `a` has exactly the heisenberg5 shape; throws DomainError otherwise.
template <typename Scalar>
HeisenbergParameters<Scalar> heisenberg_parameters(const MetricLieAlgebra<Scalar>& a)
{
    if (a.dim() != 5)
        throw DomainError("not a five-dimensional Heisenberg algebra");
    const Scalar lambda = a.constant(0, 1, 4);
    const Scalar mu = a.constant(2, 3, 4);
    if (!(mu > 0) || !(lambda >= mu) || heisenberg5(lambda, mu).structure() != a.structure())
        throw DomainError("structure constants are not in Heisenberg normal form");
    return {lambda, mu};
}

} // namespace finsler
