#pragma once

// Shared fixtures and independent reference implementations for the tests.
// Nothing here calls the closed-form block solver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <diffnet/core.hpp>
#include <diffnet/random.hpp>
#include <diffnet/subproblem.hpp>
#include <diffnet/synthgen.hpp>

namespace diffnet::test {

inline std::vector<std::string> default_names(Index p)
{
    std::vector<std::string> names;
    for (Index k = 0; k < p; ++k) names.push_back("V" + std::to_string(k));
    return names;
}

inline RawDataset<double> gaussian_raw(Index n, Index p, Rng& rng)
{
    RawDataset<double> raw{Matrix<double>(n, p), default_names(p)};
    for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < p; ++k) raw.values(i, k) = rng.normal();
    }
    return raw;
}

/// Independent Gaussian columns with a shared latent factor mixed in.
inline StandardizedDataset<double> random_dataset(Index n, Index p, std::uint64_t seed, double mix = 0.5)
{
    Rng rng(seed);
    auto a = gaussian_raw(n, p, rng);
    auto b = gaussian_raw(n, p, rng);
    for (auto* raw : {&a, &b}) {
        for (Index i = 0; i < n; ++i) {
            const double z = rng.normal();
            for (Index k = 0; k < p; ++k) raw->values(i, k) += mix * z * (1.0 + 0.1 * double(k));
        }
    }
    return standardize(a, b);
}

/// Random sparse graph pair: a shared chain-ish backbone plus a few changed edges.
inline ExperimentPair random_experiment(Index p, std::uint64_t seed)
{
    Rng rng(seed);
    ExperimentPair pair{{p, {}, {}}, {p, {}, {}}};
    for (Index u = 0; u < p; ++u) {
        for (Index v = u + 1; v < p; ++v) {
            const double r = rng.uniform();
            const double w = -rng.uniform(0.5, 2.0);
            if (r < 1.5 / double(p)) {
                pair.cond1.edges.push_back({u, v, w});
                pair.cond2.edges.push_back({u, v, w});
            } else if (r < 2.0 / double(p)) {
                (rng.uniform() < 0.5 ? pair.cond1 : pair.cond2).edges.push_back({u, v, w});
            }
        }
    }
    return pair;
}

// -----------------------------------------------------------------------
// Two-coefficient fused problem: grid over b1, exact 1-D minimization in b2
// -----------------------------------------------------------------------

struct OraclePoint
{
    double beta1 = 0;
    double beta2 = 0;
    double objective = 0;
};

inline double fused_objective(double b1, double b2, double r1, double r2, double l1, double l2)
{
    return 0.5 * ((b1 - r1) * (b1 - r1) + (b2 - r2) * (b2 - r2)) + l1 * (std::abs(b1) + std::abs(b2))
         + l2 * std::abs(b1 - b2);
}

/*
 * For fixed b1 the objective is convex piecewise quadratic in b2 with kinks
 * at 0 and b1. Its minimizer is a kink or the stationary point of one piece,
 * so scanning those candidates is exact.
 */
inline OraclePoint best_b2(double b1, double r1, double r2, double l1, double l2)
{
    double cand[7] = {0.0, b1, 0, 0, 0, 0, 0};
    int n = 2;
    for (double s : {-1.0, 1.0}) {
        for (double t : {-1.0, 1.0}) cand[n++] = r2 - l1 * s + l2 * t;
    }
    OraclePoint best{b1, cand[0], std::numeric_limits<double>::infinity()};
    for (int i = 0; i < n; ++i) {
        const double f = fused_objective(b1, cand[i], r1, r2, l1, l2);
        if (f < best.objective) best = {b1, cand[i], f};
    }
    return best;
}

/*
 * Brute-force minimizer: b1 scanned on a 1e-3 grid covering [−|ρ|max−1, |ρ|max+1]
 * then refined by golden-section search on the bracketing cells.
 */
inline OraclePoint brute_force_prox(double r1, double r2, double l1, double l2, double step = 1e-3)
{
    const double reach = std::max(std::abs(r1), std::abs(r2)) + 1.0;
    const long cells = static_cast<long>(std::ceil(2.0 * reach / step));
    OraclePoint best{0, 0, std::numeric_limits<double>::infinity()};
    double best_b1 = 0;
    for (long i = 0; i <= cells; ++i) {
        const double b1 = -reach + double(i) * step;
        const auto pt = best_b2(b1, r1, r2, l1, l2);
        if (pt.objective < best.objective) {
            best = pt;
            best_b1 = b1;
        }
    }
    // The profile in b1 is convex, so golden section on the neighbouring cells converges.
    double lo = best_b1 - step;
    double hi = best_b1 + step;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - phi * (hi - lo);
    double b = lo + phi * (hi - lo);
    double fa = best_b2(a, r1, r2, l1, l2).objective;
    double fb = best_b2(b, r1, r2, l1, l2).objective;
    for (int it = 0; it < 80; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = best_b2(a, r1, r2, l1, l2).objective;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = best_b2(b, r1, r2, l1, l2).objective;
        }
    }
    for (double b1 : {lo, hi, 0.5 * (lo + hi), 0.0}) {
        const auto pt = best_b2(b1, r1, r2, l1, l2);
        if (pt.objective < best.objective) best = pt;
    }
    return best;
}

// -----------------------------------------------------------------------
// Plain lasso by coordinate descent on the Gram matrix
// -----------------------------------------------------------------------

/// argmin ½‖y − Xb‖² + λ‖b‖₁ over b with b[skip] = 0.
inline Vector<double> reference_lasso(const Matrix<double>& x, const Vector<double>& y, double lambda,
                                      Index skip, double tol = 1e-13, int max_iter = 100000)
{
    const Index p = x.cols();
    const Matrix<double> gram = x.transpose() * x;
    const Vector<double> xty = x.transpose() * y;
    Vector<double> b = Vector<double>::Zero(p);
    for (int it = 0; it < max_iter; ++it) {
        double delta = 0;
        for (Index k = 0; k < p; ++k) {
            if (k == skip) continue;
            const double z = xty[k] - gram.row(k).dot(b) + gram(k, k) * b[k];
            const double shrunk = std::copysign(std::max(std::abs(z) - lambda, 0.0), z) / gram(k, k);
            delta = std::max(delta, std::abs(shrunk - b[k]));
            b[k] = shrunk;
        }
        if (delta < tol) break;
    }
    return b;
}

// -----------------------------------------------------------------------
// Objective over the explicit block-diagonal design
// -----------------------------------------------------------------------

inline double materialized_objective(const StandardizedDataset<double>& data, Index j,
                                     const CoefficientPair<double>& beta, double l1, double l2)
{
    const Index n = data.n_samples();
    const Index p = data.n_vars();
    Matrix<double> x = Matrix<double>::Zero(2 * n, 2 * (p - 1));
    Vector<double> y(2 * n);
    Vector<double> b(2 * (p - 1));
    y << data.cond1().col(j), data.cond2().col(j);
    Index c = 0;
    for (Index k = 0; k < p; ++k) {
        if (k == j) continue;
        x.block(0, 2 * c, n, 1) = data.cond1().col(k);
        x.block(n, 2 * c + 1, n, 1) = data.cond2().col(k);
        b[2 * c] = beta.beta1[k];
        b[2 * c + 1] = beta.beta2[k];
        ++c;
    }
    double pen = 0;
    for (Index i = 0; i < p - 1; ++i) {
        pen += l1 * (std::abs(b[2 * i]) + std::abs(b[2 * i + 1])) + l2 * std::abs(b[2 * i] - b[2 * i + 1]);
    }
    return 0.5 * (y - x * b).squaredNorm() + pen;
}

/// Precision/recall style counts between two edge sets.
struct SetScore
{
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

template <class T>
SetScore score_sets(const std::vector<T>& truth, const std::vector<T>& found)
{
    std::size_t hit = 0;
    for (const auto& t : truth) hit += std::count(found.begin(), found.end(), t) > 0;
    SetScore s;
    s.precision = found.empty() ? (truth.empty() ? 1.0 : 0.0) : double(hit) / double(found.size());
    s.recall = truth.empty() ? 1.0 : double(hit) / double(truth.size());
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace diffnet::test
