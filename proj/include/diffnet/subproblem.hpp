#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include <diffnet/core.hpp>

namespace diffnet {

/*
 * Closed-form minimizer of the two-coefficient fused problem
 *
 *     ½(b1 − ρ1)² + ½(b2 − ρ2)² + λ1(|b1| + |b2|) + λ2|b1 − b2|.
 *
 * The (ρ1, ρ2) plane splits into 13 regions, each with an affine solution:
 *
 *   0  b1 = b2 = 0                   7  b1 = b2 = ½(ρ1+ρ2) + λ1
 *   1  b1 = b2 = ½(ρ1+ρ2) − λ1       8  b1 = ρ1+λ1−λ2,  b2 = ρ2+λ1+λ2
 *   2  b1 = ρ1−λ1+λ2, b2 = ρ2−λ1−λ2  9  b1 = 0,          b2 = ρ2+λ1+λ2
 *   3  b1 = 0,        b2 = ρ2−λ1−λ2 10  b1 = ρ1−λ1−λ2,  b2 = ρ2+λ1+λ2
 *   4  b1 = ρ1+λ1+λ2, b2 = ρ2−λ1−λ2 11  b1 = ρ1−λ1−λ2,  b2 = 0
 *   5  b1 = ρ1+λ1+λ2, b2 = 0        12  b1 = ρ1−λ1−λ2,  b2 = ρ2−λ1+λ2
 *   6  b1 = ρ1+λ1+λ2, b2 = ρ2+λ1−λ2
 *
 * With d = ρ1 − ρ2, the boundaries follow from the subgradient conditions:
 * |d| ≤ 2λ2 fuses the pair (regions 0, 1, 7 by the sign of ½(ρ1+ρ2) ∓ λ1);
 * d < −2λ2 leaves b1 < b2 with shifted values u1 = ρ1+λ2, u2 = ρ2−λ2 that
 * are then soft-thresholded by λ1 (regions 2–6); d > 2λ2 mirrors this with
 * u1 = ρ1−λ2, u2 = ρ2+λ2 (regions 8–12).
 *
 * On a shared boundary the lowest region id wins.
 */

template <class Scalar>
struct RhoPair
{
    Scalar rho1 = 0;
    Scalar rho2 = 0;
};

using RegionId = int;
inline constexpr int region_count = 13;

template <class Scalar>
struct BlockSolution
{
    Scalar beta1 = 0;
    Scalar beta2 = 0;
    RegionId region = 0;
};

template <class Scalar>
Scalar soft_threshold(Scalar x, Scalar threshold)
{
    if (x > threshold) return x - threshold;
    if (x < -threshold) return x + threshold;
    return Scalar(0);
}

/*
 * Membership of the closure of one region. Regions are tested in id order
 * by classify_region so boundary points fall to the lowest id.
 */
template <class Scalar>
bool in_region_closure(RegionId region, const RhoPair<Scalar>& rho, Scalar l1, Scalar l2)
{
    const Scalar r1 = rho.rho1;
    const Scalar r2 = rho.rho2;
    const Scalar d = r1 - r2;
    const Scalar two_l2 = Scalar(2) * l2;
    const bool fused = std::abs(d) <= two_l2;
    const bool below = d <= -two_l2;   // b1 < b2 side
    const bool above = d >= two_l2;    // b1 > b2 side
    const Scalar mean = Scalar(0.5) * (r1 + r2);
    auto inside = [l1](Scalar u) { return std::abs(u) <= l1; };

    switch (region) {
        case 0:
            return (fused && inside(mean))
                || (below && inside(r1 + l2) && inside(r2 - l2))
                || (above && inside(r1 - l2) && inside(r2 + l2));
        case 1: return fused && mean >= l1;
        case 2: return below && r1 + l2 >= l1;
        case 3: return below && inside(r1 + l2) && r2 - l2 >= l1;
        case 4: return below && r1 + l2 <= -l1 && r2 - l2 >= l1;
        case 5: return below && r1 + l2 <= -l1 && inside(r2 - l2);
        case 6: return below && r2 - l2 <= -l1;
        case 7: return fused && mean <= -l1;
        case 8: return above && r1 - l2 <= -l1;
        case 9: return above && inside(r1 - l2) && r2 + l2 <= -l1;
        case 10: return above && r1 - l2 >= l1 && r2 + l2 <= -l1;
        case 11: return above && r1 - l2 >= l1 && inside(r2 + l2);
        case 12: return above && r2 + l2 >= l1;
        default: return false;
    }
}

template <class Scalar>
RegionId classify_region(const RhoPair<Scalar>& rho, const PenaltyConfig<Scalar>& pen)
{
    for (RegionId r = 0; r < region_count; ++r) {
        if (in_region_closure(r, rho, pen.lambda1, pen.lambda2)) return r;
    }
    // Unreachable for finite input: the closures cover the plane.
    throw Error(ErrorCode::NonFinite, "rho pair is not finite");
}

/*
 * Affine solution attached to a region, evaluated at any (ρ1, ρ2). The
 * operand order keeps the map exactly odd and exactly swap-symmetric in
 * floating point.
 */
template <class Scalar>
BlockSolution<Scalar> region_formula(RegionId region, const RhoPair<Scalar>& rho,
                                     const PenaltyConfig<Scalar>& pen)
{
    const Scalar r1 = rho.rho1;
    const Scalar r2 = rho.rho2;
    const Scalar l1 = pen.lambda1;
    const Scalar l2 = pen.lambda2;
    const Scalar mean = Scalar(0.5) * (r1 + r2);
    switch (region) {
        case 0: return {Scalar(0), Scalar(0), region};
        case 1: return {mean - l1, mean - l1, region};
        case 2: return {r1 - l1 + l2, r2 - l1 - l2, region};
        case 3: return {Scalar(0), r2 - l1 - l2, region};
        case 4: return {r1 + l1 + l2, r2 - l1 - l2, region};
        case 5: return {r1 + l1 + l2, Scalar(0), region};
        case 6: return {r1 + l1 + l2, r2 + l1 - l2, region};
        case 7: return {mean + l1, mean + l1, region};
        case 8: return {r1 + l1 - l2, r2 + l1 + l2, region};
        case 9: return {Scalar(0), r2 + l1 + l2, region};
        case 10: return {r1 - l1 - l2, r2 + l1 + l2, region};
        case 11: return {r1 - l1 - l2, Scalar(0), region};
        case 12: return {r1 - l1 - l2, r2 - l1 + l2, region};
        default:
            throw Error(ErrorCode::InvalidArgument, "region id out of range");
    }
}

template <class Scalar>
BlockSolution<Scalar> solve_block(const RhoPair<Scalar>& rho, const PenaltyConfig<Scalar>& pen)
{
    return region_formula(classify_region(rho, pen), rho, pen);
}

template <class Scalar>
Scalar block_objective(Scalar b1, Scalar b2, const RhoPair<Scalar>& rho,
                       const PenaltyConfig<Scalar>& pen)
{
    const Scalar e1 = b1 - rho.rho1;
    const Scalar e2 = b2 - rho.rho2;
    return Scalar(0.5) * (e1 * e1 + e2 * e2)
         + pen.lambda1 * (std::abs(b1) + std::abs(b2))
         + pen.lambda2 * std::abs(b1 - b2);
}

/*
 * Smallest max-norm violation of the subgradient system
 *
 *     b1 − ρ1 + λ1 s1 + λ2 t = 0,   b2 − ρ2 + λ1 s2 − λ2 t = 0,
 *
 * over s1, s2, t ∈ [−1, 1] consistent with the signs of b1, b2, b1 − b2.
 * Zero certifies optimality.
 */
template <class Scalar>
Scalar kkt_residual(Scalar b1, Scalar b2, const RhoPair<Scalar>& rho,
                    const PenaltyConfig<Scalar>& pen)
{
    const Scalar l1 = pen.lambda1;
    const Scalar l2 = pen.lambda2;
    const Scalar g1 = rho.rho1 - b1;   // must equal λ1 s1 + λ2 t
    const Scalar g2 = rho.rho2 - b2;   // must equal λ1 s2 − λ2 t

    auto sign = [](Scalar x) { return Scalar((x > 0) - (x < 0)); };
    // Distance from v to the attainable set of λ1 s for coefficient b.
    auto l1_gap = [&](Scalar v, Scalar b) {
        if (b != Scalar(0)) return std::abs(v - l1 * sign(b));
        return std::max(Scalar(0), std::abs(v) - l1);
    };
    auto violation = [&](Scalar t) {
        return std::max(l1_gap(g1 - l2 * t, b1), l1_gap(g2 + l2 * t, b2));
    };

    if (b1 != b2) return violation(sign(b1 - b2));
    if (l2 == Scalar(0)) return violation(Scalar(0));

    // The violation is convex and piecewise linear in t; check the kinks.
    std::array<Scalar, 10> candidates{Scalar(-1), Scalar(1), Scalar(0)};
    std::size_t n = 3;
    for (Scalar s : {Scalar(-1), Scalar(1)}) {
        candidates[n++] = (g1 - l1 * s) / l2;
        candidates[n++] = (l1 * s - g2) / l2;
    }
    Scalar best = violation(Scalar(-1));
    for (std::size_t i = 0; i < n; ++i) {
        const Scalar t = std::clamp(candidates[i], Scalar(-1), Scalar(1));
        best = std::min(best, violation(t));
    }
    return best;
}

} // namespace diffnet
