#pragma once

// Left-invariant Randers metrics F(X) = √⟨X,X⟩ + ⟨X₀,X⟩ on a metric Lie algebra.
//
// The osculating product ⟨·,·⟩_W and the Cartan tensor are 0- and (−1)-homogeneous in the reference
// vector W respectively. The closed forms below are stated for a Euclidean-unit W, so every entry point
// normalizes W first; a reference vector of Euclidean norm below kMinReferenceNorm is rejected.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "finsler/errors.hpp"
#include "finsler/lie_algebra.hpp"

namespace finsler {

inline constexpr double kMinReferenceNorm = 1e-14;

inline constexpr double kDefaultSecondDifferenceStep = 1e-4;
inline constexpr double kDefaultThirdDifferenceStep = 2e-3;

template <typename Scalar>
class RandersStructure {
public:
    using VectorType = Vector<Scalar>;

    RandersStructure(MetricLieAlgebra<Scalar> algebra, VectorType x0)
        : algebra_(std::move(algebra)), x0_(std::move(x0))
    {
        require_dim(algebra_, x0_, "deformation vector");
        if (!x0_.allFinite() || !(x0_.norm() < Scalar(1)))
            throw ParameterError("deformation vector must have Euclidean norm < 1");
    }

    /// Riemannian structure (X₀ = 0) on `algebra`.
    static RandersStructure riemannian(MetricLieAlgebra<Scalar> algebra)
    {
        const auto n = algebra.dim();
        return RandersStructure(std::move(algebra), VectorType::Zero(n));
    }

    const MetricLieAlgebra<Scalar>& algebra() const { return algebra_; }
    const VectorType& x0() const { return x0_; }
    Eigen::Index dim() const { return algebra_.dim(); }

    /// β(X) = ⟨X₀, X⟩.
    Scalar drift(const VectorArg<Scalar>& x) const { return x0_.dot(x); }

private:
    MetricLieAlgebra<Scalar> algebra_;
    VectorType x0_;
};

/// Z-Randers structure on heisenberg5(λ, μ): X₀ = ξZ with 0 ≤ ξ < 1.
template <typename Scalar>
RandersStructure<Scalar> z_randers(Scalar lambda, Scalar mu, Scalar xi)
{
    if (!(xi >= 0) || !(xi < 1))
        throw ParameterError("xi must lie in [0, 1)");
    return RandersStructure<Scalar>(heisenberg5(lambda, mu), xi * Vector<Scalar>::Unit(5, 4));
}

/// Euclidean normalization of a reference vector.
template <typename Scalar>
Vector<Scalar> unit_reference(const VectorArg<Scalar>& w)
{
    const Scalar norm = w.norm();
    if (!(norm >= Scalar(kMinReferenceNorm)))
        throw DegenerateVectorError("reference vector must be nonzero");
    return w / norm;
}

template <typename Scalar>
Scalar finsler_norm(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& x)
{
    require_dim(s.algebra(), x, "finsler_norm");
    return x.norm() + s.drift(x);
}

namespace detail {

// ⟨u,v⟩_W for a Euclidean-unit w.
template <typename Scalar>
Scalar osculating_product_unit(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w, const VectorArg<Scalar>& u,
                               const VectorArg<Scalar>& v)
{
    const Scalar bu = s.drift(u), bv = s.drift(v), bw = s.drift(w);
    const Scalar wu = w.dot(u), wv = w.dot(v), uv = u.dot(v);
    return uv + bu * bv - bw * wu * wv + bu * wv + bw * uv + bv * wu;
}

// Cartan tensor for a Euclidean-unit w; the cyclic sum runs over (u,v,x), (v,x,u), (x,u,v).
template <typename Scalar>
Scalar cartan_unit(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w, const VectorArg<Scalar>& u,
                   const VectorArg<Scalar>& v, const VectorArg<Scalar>& x)
{
    const Scalar bw = s.drift(w);
    const auto term = [&](const Vector<Scalar>& a, const Vector<Scalar>& b, const Vector<Scalar>& c) {
        const Scalar wa = w.dot(a), wb = w.dot(b), wc = w.dot(c);
        return bw * wa * wb * wc - bw * c.dot(b) * wa - s.drift(c) * wb * wa + s.drift(a) * c.dot(b);
    };
    return Scalar(0.5) * (term(u, v, x) + term(v, x, u) + term(x, u, v));
}

} // namespace detail

template <typename Scalar>
Scalar osculating_product(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w, const VectorArg<Scalar>& u,
                          const VectorArg<Scalar>& v)
{
    require_dim(s.algebra(), w, "osculating_product");
    require_dim(s.algebra(), u, "osculating_product");
    require_dim(s.algebra(), v, "osculating_product");
    return detail::osculating_product_unit(s, unit_reference<Scalar>(w), u, v);
}

template <typename Scalar>
Scalar cartan(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w, const VectorArg<Scalar>& u,
              const VectorArg<Scalar>& v, const VectorArg<Scalar>& x)
{
    for (const auto* p : {&w, &u, &v, &x})
        require_dim(s.algebra(), *p, "cartan");
    return detail::cartan_unit(s, unit_reference<Scalar>(w), u, v, x);
}

/// Osculating inner product at a fixed reference vector, with the Gram matrix ⟨e_i, e_j⟩_W, its
/// Cholesky factorization, and the Cartan tensor on basis triples precomputed.
template <typename Scalar>
class OsculatingFrame {
public:
    using VectorType = Vector<Scalar>;
    using MatrixType = Matrix<Scalar>;

    OsculatingFrame(RandersStructure<Scalar> structure, const VectorArg<Scalar>& w)
        : structure_(std::move(structure)), w_(unit_reference<Scalar>(w))
    {
        const auto n = structure_.dim();
        require_dim(structure_.algebra(), w_, "osculating frame");
        gram_.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                gram_(i, j) =
                    detail::osculating_product_unit(structure_, w_, VectorType::Unit(n, i), VectorType::Unit(n, j));
        llt_.compute(gram_);
        if (llt_.info() != Eigen::Success)
            throw InternalError("osculating Gram matrix is not positive definite");

        cartan_.resize(n, n * n);
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index k = 0; k < n; ++k)
                    cartan_(m, pair_index(n, j, k)) = detail::cartan_unit(
                        structure_, w_, VectorType::Unit(n, m), VectorType::Unit(n, j), VectorType::Unit(n, k));
    }

    const RandersStructure<Scalar>& structure() const { return structure_; }
    const MetricLieAlgebra<Scalar>& algebra() const { return structure_.algebra(); }
    Eigen::Index dim() const { return structure_.dim(); }

    /// Euclidean-unit reference vector.
    const VectorType& reference() const { return w_; }
    const MatrixType& gram() const { return gram_; }
    const Eigen::LLT<MatrixType>& factorization() const { return llt_; }

    Scalar product(const VectorArg<Scalar>& u, const VectorArg<Scalar>& v) const { return u.dot(gram_ * v); }

    /// Cartan tensor on basis triples: entry (m, pair_index(j, k)) is C_W(e_m, e_j, e_k).
    const MatrixType& cartan_table() const { return cartan_; }

    Scalar cartan(const VectorArg<Scalar>& u, const VectorArg<Scalar>& v, const VectorArg<Scalar>& x) const
    {
        return u.dot(cartan_ * pair_coordinates(v, x));
    }

    /// Matrix M with M(j, k) = C_W(a, e_j, e_k).
    MatrixType cartan_contracted(const VectorArg<Scalar>& a) const
    {
        const auto n = dim();
        const VectorType flat = cartan_.transpose() * a;
        MatrixType out(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                out(j, k) = flat(pair_index(n, j, k));
        return out;
    }

    /// Solves ⟨v, e_k⟩_W = rhs_k for v, column by column.
    template <typename Derived>
    MatrixType raise(const Eigen::MatrixBase<Derived>& rhs) const
    {
        return llt_.solve(rhs);
    }

private:
    RandersStructure<Scalar> structure_;
    VectorType w_;
    MatrixType gram_;
    Eigen::LLT<MatrixType> llt_;
    MatrixType cartan_;
};

template <typename Scalar>
OsculatingFrame<Scalar> osculating_gram(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w)
{
    return OsculatingFrame<Scalar>(s, w);
}

namespace detail {

template <typename Scalar>
Scalar squared_norm(const RandersStructure<Scalar>& s, const Vector<Scalar>& x)
{
    const Scalar f = x.norm() + s.drift(x);
    return f * f;
}

} // namespace detail

/// ½ ∂²/∂s∂t F²(w + su + tv) at s = t = 0 by a four-point central difference, evaluated at w as
/// given (no normalization). Step must lie in [1e-6, 1e-2].
template <typename Scalar>
Scalar osculating_product_fd(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w,
                             const VectorArg<Scalar>& u, const VectorArg<Scalar>& v,
                             Scalar h = Scalar(kDefaultSecondDifferenceStep))
{
    if (!(h >= Scalar(1e-6)) || !(h <= Scalar(1e-2)))
        throw ParameterError("second-difference step must lie in [1e-6, 1e-2]");
    for (const auto* p : {&w, &u, &v})
        require_dim(s.algebra(), *p, "osculating_product_fd");
    unit_reference<Scalar>(w);

    Scalar sum = 0;
    for (const int a : {1, -1})
        for (const int b : {1, -1})
            sum += Scalar(a * b) * detail::squared_norm<Scalar>(s, w + (a * h) * u + (b * h) * v);
    return Scalar(0.5) * sum / (Scalar(4) * h * h);
}

/// ¼ ∂³/∂r∂s∂t F²(w + ru + sv + tx) at the origin by an eight-point central difference. Step must lie
/// in [1e-3, 1e-1]. The result scales like 1/‖w‖; callers comparing against `cartan` pass a unit w.
template <typename Scalar>
Scalar cartan_fd(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w, const VectorArg<Scalar>& u,
                 const VectorArg<Scalar>& v, const VectorArg<Scalar>& x,
                 Scalar h = Scalar(kDefaultThirdDifferenceStep))
{
    if (!(h >= Scalar(1e-3)) || !(h <= Scalar(1e-1)))
        throw ParameterError("third-difference step must lie in [1e-3, 1e-1]");
    for (const auto* p : {&w, &u, &v, &x})
        require_dim(s.algebra(), *p, "cartan_fd");
    unit_reference<Scalar>(w);

    Scalar sum = 0;
    for (const int a : {1, -1})
        for (const int b : {1, -1})
            for (const int c : {1, -1})
                sum += Scalar(a * b * c) *
                       detail::squared_norm<Scalar>(s, w + (a * h) * u + (b * h) * v + (c * h) * x);
    return Scalar(0.25) * sum / (Scalar(8) * h * h * h);
}

struct BerwaldReport {
    bool berwald = true;
    /// First basis pair (i, j), 0-based, with ⟨[e_i, e_j], X₀⟩ ≠ 0.
    std::optional<std::pair<Eigen::Index, Eigen::Index>> witness;
};

/// Berwald iff X₀ is Levi-Civita parallel, i.e. ⟨[e_i, e_j], X₀⟩ = 0 for every basis pair.
template <typename Scalar>
BerwaldReport is_berwald(const RandersStructure<Scalar>& s, Scalar tolerance = Scalar(1e-12))
{
    using std::abs;
    const auto& a = s.algebra();
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        for (Eigen::Index j = i + 1; j < a.dim(); ++j)
            if (abs(s.drift(bracket(a, a.basis(i), a.basis(j)))) > tolerance)
                return {false, std::make_pair(i, j)};
    return {};
}

} // namespace finsler
