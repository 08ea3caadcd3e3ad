#pragma once

// Test-only reference computations, deliberately independent of the library's solve path.
//
//  * fundamental_tensor / cartan_tensor use the h-ρ form of a Randers metric at a unit reference
//    vector: g = (1 + β(w)) h + (w + b)(w + b)ᵀ and C = ½ Σ_cyc h ⊗ ρ with h = I − wwᵀ, ρ = b − β(w) w.
//  * monolithic_chern_rund assembles the left-invariant Koszul system for all dim³ coefficients at
//    once, Cartan couplings included, and solves it with a full-pivot LU. No staging.

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "finsler/finsler.hpp"

namespace finsler::oracle {

using Vec = Vector<double>;
using Mat = Matrix<double>;

inline Mat fundamental_tensor(const Vec& x0, const Vec& w_raw)
{
    const Vec w = w_raw.normalized();
    const auto n = w.size();
    const Mat h = Mat::Identity(n, n) - w * w.transpose();
    const Vec l = w + x0;
    return (1 + x0.dot(w)) * h + l * l.transpose();
}

inline double cartan_tensor(const Vec& x0, const Vec& w_raw, const Vec& u, const Vec& v, const Vec& x)
{
    const Vec w = w_raw.normalized();
    const auto n = w.size();
    const Mat h = Mat::Identity(n, n) - w * w.transpose();
    const Vec rho = x0 - x0.dot(w) * w;
    return 0.5 * (u.dot(h * v) * rho.dot(x) + v.dot(h * x) * rho.dot(u) + x.dot(h * u) * rho.dot(v));
}

/// Γ as a dim × dim² matrix laid out like ConnectionTable::gamma().
inline Mat monolithic_chern_rund(const RandersStructure<double>& s, const Vec& w_raw)
{
    const Vec w = w_raw.normalized();
    const auto n = s.dim();
    const Mat g = fundamental_tensor(s.x0(), w);
    const auto e = [n](Eigen::Index i) { return Vec::Unit(n, i); };
    const auto c = [&](Eigen::Index i, Eigen::Index j, Eigen::Index k) {
        return s.algebra().constant(i, j, k);
    };
    // ⟨[e_i, e_j], e_k⟩_W
    const auto lowered = [&](Eigen::Index i, Eigen::Index j, Eigen::Index k) {
        double sum = 0;
        for (Eigen::Index m = 0; m < n; ++m)
            sum += c(i, j, m) * g(m, k);
        return sum;
    };
    // C(e_m, e_j, e_k)
    std::vector<double> cart(static_cast<std::size_t>(n * n * n));
    const auto cidx = [n](Eigen::Index m, Eigen::Index j, Eigen::Index k) {
        return static_cast<std::size_t>((m * n + j) * n + k);
    };
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                cart[cidx(m, j, k)] = cartan_tensor(s.x0(), w, e(m), e(j), e(k));

    // unknown index of Γ(i, j; m): coefficient of e_m in ∇_{e_i} e_j
    const auto var = [n](Eigen::Index i, Eigen::Index j, Eigen::Index m) { return (i * n + j) * n + m; };
    const auto n3 = n * n * n;
    Mat a = Mat::Zero(n3, n3);
    Vec b(n3);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) {
                const auto row = var(i, j, k);
                // 2⟨∇_i e_j, e_k⟩
                for (Eigen::Index m = 0; m < n; ++m)
                    a(row, var(i, j, m)) += 2 * g(m, k);
                // +2C(∇_i W, e_j, e_k) + 2C(∇_j W, e_k, e_i) − 2C(∇_k W, e_i, e_j), ∇_p W = Σ_q w_q ∇_p e_q
                for (Eigen::Index q = 0; q < n; ++q) {
                    for (Eigen::Index m = 0; m < n; ++m) {
                        a(row, var(i, q, m)) += 2 * w(q) * cart[cidx(m, j, k)];
                        a(row, var(j, q, m)) += 2 * w(q) * cart[cidx(m, k, i)];
                        a(row, var(k, q, m)) -= 2 * w(q) * cart[cidx(m, i, j)];
                    }
                }
                b(row) = lowered(i, j, k) - lowered(j, k, i) + lowered(k, i, j);
            }
        }
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (lu.rank() != n3)
        throw InternalError("monolithic Koszul system is singular");
    const Vec gamma = lu.solve(b);

    Mat out(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index m = 0; m < n; ++m)
                out(m, pair_index(n, i, j)) = gamma(var(i, j, m));
    return out;
}

inline Vec random_unit(Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = normal(rng);
    return v.normalized();
}

} // namespace finsler::oracle
