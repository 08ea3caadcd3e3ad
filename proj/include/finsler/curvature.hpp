#pragma once

// Curvature of the Chern–Rund connection at a fixed reference vector and the flag curvature
//
//   K(W, X) = ⟨R^W(X, W)W, X⟩_W / (‖W‖²_W ‖X‖²_W − ⟨X, W⟩²_W).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/connection.hpp"
#include "finsler/errors.hpp"
#include "finsler/lie_algebra.hpp"
#include "finsler/randers.hpp"

namespace finsler {

/// Relative area cutoff below which a flag counts as degenerate.
inline constexpr double kDegenerateFlagThreshold = 1e-10;

/// Smallest |K| accepted as a strict sign witness.
inline constexpr double kSignWitnessThreshold = 1e-8;

template <typename Scalar>
struct FlagReport {
    Vector<Scalar> w; ///< flag pole, Euclidean-normalized
    Vector<Scalar> x; ///< transverse vector as given
    Scalar k = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar denominator = 0;
    bool degenerate = true;
};

template <typename Scalar>
struct SignCertificate {
    FlagReport<Scalar> positive_witness;
    FlagReport<Scalar> negative_witness;
    std::size_t samples_tried = 0;
};

/// R(x, y)z = ∇_x∇_y z − ∇_y∇_x z − ∇_{[x,y]} z with the reference vector of `t` held fixed.
template <typename Scalar>
Vector<Scalar> curvature_operator(const ConnectionTable<Scalar>& t, const VectorArg<Scalar>& x,
                                  const VectorArg<Scalar>& y, const VectorArg<Scalar>& z)
{
    return t.covariant(x, t.covariant(y, z)) - t.covariant(y, t.covariant(x, z)) -
           t.covariant(bracket(t.algebra(), x, y), z);
}

/// Flag curvature with pole t.frame().reference() and transverse vector x.
template <typename Scalar>
FlagReport<Scalar> flag_curvature(const ConnectionTable<Scalar>& t, const VectorArg<Scalar>& x)
{
    const auto& frame = t.frame();
    require_dim(t.algebra(), x, "flag_curvature");
    if (!(x.norm() >= Scalar(kMinReferenceNorm)))
        throw InputError("transverse vector must be nonzero");

    FlagReport<Scalar> report;
    report.w = frame.reference();
    report.x = x;
    const Vector<Scalar>& w = report.w;
    const Scalar ww = frame.product(w, w);
    const Scalar xx = frame.product(x, x);
    const Scalar xw = frame.product(x, w);
    report.denominator = ww * xx - xw * xw;
    report.degenerate = report.denominator < Scalar(kDegenerateFlagThreshold) * ww * xx;
    if (!report.degenerate)
        report.k = frame.product(curvature_operator(t, x, w, w), x) / report.denominator;
    return report;
}

template <typename Scalar>
FlagReport<Scalar> flag_curvature(const RandersStructure<Scalar>& s, const VectorArg<Scalar>& w,
                                  const VectorArg<Scalar>& x)
{
    require_dim(s.algebra(), w, "flag_curvature");
    return flag_curvature(chern_rund_table(osculating_gram(s, w)), x);
}

/// Sectional curvature of the left-invariant Riemannian metric (X₀ = 0).
template <typename Scalar>
Scalar riemannian_sectional(const MetricLieAlgebra<Scalar>& a, const VectorArg<Scalar>& x, const VectorArg<Scalar>& y)
{
    require_dim(a, x, "riemannian_sectional");
    require_dim(a, y, "riemannian_sectional");
    if (!(x.norm() >= Scalar(kMinReferenceNorm)) || !(y.norm() >= Scalar(kMinReferenceNorm)))
        throw DegenerateFlagError("sectional curvature needs two independent vectors");
    const auto report = flag_curvature(RandersStructure<Scalar>::riemannian(a), x, y);
    if (report.degenerate)
        throw DegenerateFlagError("sectional curvature needs two independent vectors");
    return report.k;
}

// Special flags of the Z-Randers metric on heisenberg5 ------------------------------------------

enum class SpecialFlag { k1_1, k1_2, k2_1, k2_2, k2_3, k3_1, k3_2, k3_3 };

/// Subspaces of heisenberg5 from which special poles and transverse vectors are drawn.
enum class FlagSpan { center, e12, e34 };

struct SpecialFlagCase {
    SpecialFlag id;
    std::string_view label;
    FlagSpan pole;
    FlagSpan transverse;
};

inline constexpr std::array<SpecialFlagCase, 8> kSpecialFlags{{
    {SpecialFlag::k1_1, "1.1", FlagSpan::center, FlagSpan::e12},
    {SpecialFlag::k1_2, "1.2", FlagSpan::center, FlagSpan::e34},
    {SpecialFlag::k2_1, "2.1", FlagSpan::e12, FlagSpan::center},
    {SpecialFlag::k2_2, "2.2", FlagSpan::e12, FlagSpan::e12},
    {SpecialFlag::k2_3, "2.3", FlagSpan::e12, FlagSpan::e34},
    {SpecialFlag::k3_1, "3.1", FlagSpan::e34, FlagSpan::center},
    {SpecialFlag::k3_2, "3.2", FlagSpan::e34, FlagSpan::e12},
    {SpecialFlag::k3_3, "3.3", FlagSpan::e34, FlagSpan::e34},
}};

inline const SpecialFlagCase& special_flag_case(SpecialFlag id) { return kSpecialFlags[static_cast<std::size_t>(id)]; }

inline std::string_view to_string(SpecialFlag id) { return special_flag_case(id).label; }

inline std::optional<SpecialFlag> parse_special_flag(std::string_view label)
{
    for (const auto& c : kSpecialFlags)
        if (c.label == label)
            return c.id;
    return std::nullopt;
}

inline std::string_view to_string(FlagSpan span)
{
    switch (span) {
    case FlagSpan::center: return "Z";
    case FlagSpan::e12: return "span(e1;e2)";
    case FlagSpan::e34: return "span(e3;e4)";
    }
    return "?";
}

/// Closed-form flag curvature of the Z-Randers metric X₀ = ξZ on heisenberg5(λ, μ) for a special
/// flag family. Requires λ ≥ μ > 0 and 0 < ξ < 1.
template <typename Scalar>
Scalar special_flag_closed_form(SpecialFlag id, Scalar lambda, Scalar mu, Scalar xi)
{
    if (!(mu > 0) || !(lambda >= mu))
        throw ParameterError("special flags require lambda >= mu > 0");
    if (!(xi > 0) || !(xi < 1))
        throw ParameterError("special flags require 0 < xi < 1");
    const Scalar l2 = lambda * lambda, m2 = mu * mu, x2 = xi * xi;
    switch (id) {
    case SpecialFlag::k1_1: return l2 / 4;
    case SpecialFlag::k1_2: return m2 / 4;
    case SpecialFlag::k2_1: return (1 - x2) * l2 / 4;
    case SpecialFlag::k2_2: return (x2 - 3) * l2 / 4;
    case SpecialFlag::k2_3: return x2 * (m2 - l2) / 4;
    case SpecialFlag::k3_1: return (1 - x2) * m2 / 4;
    case SpecialFlag::k3_2: return x2 * (l2 - m2) / 4;
    case SpecialFlag::k3_3: return (x2 - 3) * m2 / 4;
    }
    throw ParameterError("unknown special flag");
}

/// Vector of heisenberg5 with coefficients (a, b) on the two basis vectors of `span`; the center
/// span ignores b.
template <typename Scalar>
Vector<Scalar> span_vector(FlagSpan span, Scalar a, Scalar b)
{
    Vector<Scalar> v = Vector<Scalar>::Zero(5);
    switch (span) {
    case FlagSpan::center: v(4) = a; break;
    case FlagSpan::e12: v(0) = a; v(1) = b; break;
    case FlagSpan::e34: v(2) = a; v(3) = b; break;
    }
    return v;
}

/// Uniform unit vector in `span` (±Z for the center).
template <typename Scalar, typename Rng>
Vector<Scalar> sample_unit_in_span(FlagSpan span, Rng& rng)
{
    std::normal_distribution<double> normal;
    if (span == FlagSpan::center)
        return span_vector<Scalar>(span, Scalar(1), Scalar(0));
    double a = 0, b = 0;
    while (a * a + b * b < 1e-12) {
        a = normal(rng);
        b = normal(rng);
    }
    const double r = std::hypot(a, b);
    return span_vector<Scalar>(span, Scalar(a / r), Scalar(b / r));
}

/// Uniform point of the Euclidean unit sphere (normalized Gaussian draw).
template <typename Scalar, typename Rng>
Vector<Scalar> sample_unit_sphere(Eigen::Index dim, Rng& rng)
{
    std::normal_distribution<double> normal;
    Vector<Scalar> v(dim);
    do {
        for (Eigen::Index i = 0; i < dim; ++i)
            v(i) = Scalar(normal(rng));
    } while (!(v.norm() > Scalar(1e-6)));
    return v / v.norm();
}

/// Representative (pole, transverse) pair of a special flag family: first basis vector of each span.
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> special_flag_representative(SpecialFlag id)
{
    const auto& c = special_flag_case(id);
    return {span_vector<Scalar>(c.pole, Scalar(1), Scalar(0)),
            span_vector<Scalar>(c.transverse, c.pole == c.transverse ? Scalar(0) : Scalar(1),
                                c.pole == c.transverse ? Scalar(1) : Scalar(0))};
}

/// Seeded search for flags of strictly positive and strictly negative curvature. On five-dimensional
/// algebras the eight special-flag representatives are tried first, then uniformly random unit
/// (pole, transverse) pairs. Returns the first witness of each sign; throws SearchFailure when
/// `max_samples` evaluations do not produce both.
template <typename Scalar>
SignCertificate<Scalar> sign_search(const RandersStructure<Scalar>& s, std::uint64_t seed, std::size_t max_samples)
{
    std::optional<FlagReport<Scalar>> positive, negative;
    std::size_t tried = 0;

    const auto consider = [&](const Vector<Scalar>& w, const Vector<Scalar>& x) {
        ++tried;
        auto report = flag_curvature(s, w, x);
        if (report.degenerate)
            return;
        if (!positive && report.k > Scalar(kSignWitnessThreshold))
            positive = std::move(report);
        else if (!negative && report.k < -Scalar(kSignWitnessThreshold))
            negative = std::move(report);
    };
    const auto done = [&] { return positive.has_value() && negative.has_value(); };

    if (s.dim() == 5) {
        for (const auto& c : kSpecialFlags) {
            if (done() || tried >= max_samples)
                break;
            const auto [w, x] = special_flag_representative<Scalar>(c.id);
            consider(w, x);
        }
    }

    std::mt19937_64 rng(seed);
    while (!done() && tried < max_samples) {
        const Vector<Scalar> w = sample_unit_sphere<Scalar>(s.dim(), rng);
        const Vector<Scalar> x = sample_unit_sphere<Scalar>(s.dim(), rng);
        consider(w, x);
    }

    if (!done()) {
        std::string what = "no nonzero curvature found";
        if (positive || negative)
            what = positive ? "no strictly negative flag found" : "no strictly positive flag found";
        throw SearchFailure(what + " after " + std::to_string(tried) + " samples");
    }
    return {std::move(*positive), std::move(*negative), tried};
}

} // namespace finsler
