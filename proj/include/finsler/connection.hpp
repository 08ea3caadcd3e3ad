#pragma once

// Chern–Rund connection of a left-invariant Randers metric at a fixed reference vector W.
//
// For left-invariant fields the derivative terms of the Koszul formula drop out, leaving
//
//   2⟨∇_X Y, Z⟩_W = ⟨[X,Y],Z⟩_W − ⟨[Y,Z],X⟩_W + ⟨[Z,X],Y⟩_W
//                   − 2C_W(∇_X W, Y, Z) − 2C_W(∇_Y W, Z, X) + 2C_W(∇_Z W, X, Y).
//
// The Cartan tensor vanishes whenever one slot is W, so the system is solved in three stages with no
// iteration: ∇_W W, then ∇_X W for every basis X, then ∇_X Y. Every stage is a solve against the
// Cholesky factor cached in the OsculatingFrame.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/lie_algebra.hpp"
#include "finsler/randers.hpp"

namespace finsler {

/// Γ with ∇_{e_i} e_j = Σ_k Γ(k, pair_index(i, j)) e_k; the frame fixes the reference vector.
template <typename Scalar>
class ConnectionTable {
public:
    using VectorType = Vector<Scalar>;
    using MatrixType = Matrix<Scalar>;

    ConnectionTable(OsculatingFrame<Scalar> frame, MatrixType gamma) : frame_(std::move(frame)), gamma_(std::move(gamma))
    {
        const auto n = frame_.dim();
        if (gamma_.rows() != n || gamma_.cols() != n * n)
            throw InputError("connection table must be dim x dim^2");
    }

    const OsculatingFrame<Scalar>& frame() const { return frame_; }
    const MetricLieAlgebra<Scalar>& algebra() const { return frame_.algebra(); }
    Eigen::Index dim() const { return frame_.dim(); }
    const MatrixType& gamma() const { return gamma_; }

    /// Coordinates of ∇_{e_i} e_j.
    VectorType coefficient(Eigen::Index i, Eigen::Index j) const { return gamma_.col(pair_index(dim(), i, j)); }

    /// ∇_x y for left-invariant x, y.
    VectorType covariant(const VectorArg<Scalar>& x, const VectorArg<Scalar>& y) const
    {
        require_dim(algebra(), x, "covariant");
        require_dim(algebra(), y, "covariant");
        return gamma_ * pair_coordinates(x, y);
    }

private:
    OsculatingFrame<Scalar> frame_;
    MatrixType gamma_;
};

/// ∇_W W, from ⟨∇_W W, e_i⟩_W = ⟨[e_i, W], W⟩_W.
template <typename Scalar>
Vector<Scalar> nabla_w_of_w(const OsculatingFrame<Scalar>& frame)
{
    const auto& a = frame.algebra();
    const auto& w = frame.reference();
    Vector<Scalar> rhs(frame.dim());
    for (Eigen::Index i = 0; i < frame.dim(); ++i)
        rhs(i) = frame.product(bracket(a, a.basis(i), w), w);
    return frame.raise(rhs);
}

/// Matrix whose column j is ∇_{e_j} W, given ∇_W W. Only C_W(∇_W W, ·, ·) survives among the Cartan
/// terms with Y = W.
template <typename Scalar>
Matrix<Scalar> nabla_x_w_map(const OsculatingFrame<Scalar>& frame, const VectorArg<Scalar>& nabla_ww)
{
    const auto& a = frame.algebra();
    const auto& w = frame.reference();
    const auto n = frame.dim();
    const Matrix<Scalar> cartan_ww = frame.cartan_contracted(nabla_ww);

    Matrix<Scalar> rhs(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vector<Scalar> x = a.basis(j);
        const Vector<Scalar> xw = bracket(a, x, w);
        for (Eigen::Index k = 0; k < n; ++k) {
            const Vector<Scalar> z = a.basis(k);
            rhs(k, j) = Scalar(0.5) * (frame.product(xw, z) - frame.product(bracket(a, w, z), x) +
                                       frame.product(bracket(a, z, x), w)) -
                        cartan_ww(k, j);
        }
    }
    return frame.raise(rhs);
}

template <typename Scalar>
Matrix<Scalar> nabla_x_w_map(const OsculatingFrame<Scalar>& frame)
{
    return nabla_x_w_map(frame, nabla_w_of_w(frame));
}

template <typename Scalar>
ConnectionTable<Scalar> chern_rund_table(const OsculatingFrame<Scalar>& frame)
{
    const auto n = frame.dim();
    const Matrix<Scalar> nabla_w = nabla_x_w_map(frame);
    // lowered(k, (i,j)) = ⟨[e_i, e_j], e_k⟩_W
    const Matrix<Scalar> lowered = frame.gram() * frame.algebra().structure();

    std::vector<Matrix<Scalar>> cartan_nw;
    cartan_nw.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        cartan_nw.push_back(frame.cartan_contracted(nabla_w.col(i)));
    const auto c = [&](Eigen::Index m, Eigen::Index j, Eigen::Index k) {
        return cartan_nw[static_cast<std::size_t>(m)](j, k);
    };

    Matrix<Scalar> rhs(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) {
                const Scalar koszul = lowered(k, pair_index(n, i, j)) - lowered(i, pair_index(n, j, k)) +
                                      lowered(j, pair_index(n, k, i));
                rhs(k, pair_index(n, i, j)) = Scalar(0.5) * koszul - c(i, j, k) - c(j, k, i) + c(k, i, j);
            }
        }
    }
    return ConnectionTable<Scalar>(frame, frame.raise(rhs));
}

/// Levi-Civita connection of the Euclidean metric, from the identity-Gram Koszul formula. The
/// attached frame is that of the Riemannian structure at e1.
template <typename Scalar>
ConnectionTable<Scalar> levi_civita_table(const MetricLieAlgebra<Scalar>& a)
{
    const auto n = a.dim();
    Matrix<Scalar> gamma(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                gamma(k, pair_index(n, i, j)) =
                    Scalar(0.5) * (a.constant(i, j, k) - a.constant(j, k, i) + a.constant(k, i, j));
    return ConnectionTable<Scalar>(OsculatingFrame<Scalar>(RandersStructure<Scalar>::riemannian(a), a.basis(0)),
                                   std::move(gamma));
}

/// max over (i, j) of ‖∇_{e_i} e_j − ∇_{e_j} e_i − [e_i, e_j]‖.
template <typename Scalar>
Scalar torsion_defect(const ConnectionTable<Scalar>& t)
{
    const auto& a = t.algebra();
    Scalar defect = 0;
    for (Eigen::Index i = 0; i < t.dim(); ++i)
        for (Eigen::Index j = 0; j < t.dim(); ++j)
            defect = std::max<Scalar>(
                defect,
                (t.coefficient(i, j) - t.coefficient(j, i) - bracket(a, a.basis(i), a.basis(j))).norm());
    return defect;
}

/// max over (i, j, k) of |⟨∇_{e_i} e_j, e_k⟩_W + ⟨e_j, ∇_{e_i} e_k⟩_W + 2C_W(∇_{e_i} W, e_j, e_k)|.
/// ∇_{e_i} W is read back from the table itself.
template <typename Scalar>
Scalar almost_metric_defect(const ConnectionTable<Scalar>& t)
{
    using std::abs;
    const auto& frame = t.frame();
    const auto& g = frame.gram();
    const auto n = t.dim();
    Scalar defect = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector<Scalar> ei = Vector<Scalar>::Unit(n, i);
        const Matrix<Scalar> cartan_i = frame.cartan_contracted(t.covariant(ei, frame.reference()));
        Matrix<Scalar> nabla_i(n, n); // column j: ∇_{e_i} e_j
        for (Eigen::Index j = 0; j < n; ++j)
            nabla_i.col(j) = t.coefficient(i, j);
        const Matrix<Scalar> lowered = nabla_i.transpose() * g; // (j, k) = ⟨∇_i e_j, e_k⟩_W
        const Matrix<Scalar> residual = lowered + lowered.transpose() + Scalar(2) * cartan_i;
        defect = std::max<Scalar>(defect, residual.cwiseAbs().maxCoeff());
    }
    return defect;
}

/// W⊥ = λw₂e₁ − λw₁e₂ + μw₄e₃ − μw₃e₄ on heisenberg5(λ, μ), for w with no center component.
template <typename Scalar>
Vector<Scalar> w_perp(const MetricLieAlgebra<Scalar>& a, const VectorArg<Scalar>& w)
{
    using std::abs;
    const auto [lambda, mu] = heisenberg_parameters(a);
    require_dim(a, w, "w_perp");
    if (abs(w(4)) > Scalar(1e-12))
        throw DomainError("w_perp requires a pole orthogonal to the center");
    Vector<Scalar> out(5);
    out << lambda * w(1), -lambda * w(0), mu * w(3), -mu * w(2), Scalar(0);
    return out;
}

} // namespace finsler
