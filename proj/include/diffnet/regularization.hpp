#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <diffnet/core.hpp>
#include <diffnet/parallel.hpp>
#include <diffnet/random.hpp>
#include <diffnet/solver.hpp>

namespace diffnet {

// =======================================================================
// λ2: Fisher-transform significance heuristic
// =======================================================================

inline constexpr double correlation_clamp = 1e-6;

/// Fisher z-transform of a correlation, clamped into (−1, 1).
template <class Scalar>
Scalar fisher_z(Scalar rho)
{
    const Scalar bound = Scalar(1) - Scalar(correlation_clamp);
    const Scalar r = std::min(std::abs(rho), bound);
    return std::copysign(Scalar(0.5) * std::log((Scalar(1) + r) / (Scalar(1) - r)), rho);
}

/*
 * Standard normal quantile. Acklam's rational approximation followed by
 * one Halley step against erfc, good to about 1e-15 in the central range.
 */
inline double normal_quantile(double prob)
{
    if (!(prob > 0.0 && prob < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "normal quantile needs a probability in (0, 1)");
    }
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (prob < p_low) {
        const double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
          / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - p_low) {
        const double q = prob - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
          / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
          / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - prob;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

template <class Scalar>
struct Lambda2Heuristic
{
    Scalar alpha = 0;
    /// Significance threshold on the z scale.
    Scalar s = 0;
    Scalar mean_rho_product = 0;
    Scalar chosen = 0;
    /// Variable pairs whose correlation had to be clamped.
    std::vector<std::string> warnings;
};

/// z-scale threshold Φ⁻¹(1 − α/2) / √((N − 3)/2).
template <class Scalar>
Scalar significance_threshold(Index n_samples, Scalar alpha)
{
    if (n_samples < 4) throw Error(ErrorCode::InvalidArgument, "at least 4 samples are required");
    if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    const double q = normal_quantile(1.0 - static_cast<double>(alpha) / 2.0);
    return Scalar(q / std::sqrt((static_cast<double>(n_samples) - 3.0) / 2.0));
}

/// λ2 = (e^{2s} − 1) / (2e^{2s} + 2) · (1 − mean ρ1ρ2).
template <class Scalar>
Lambda2Heuristic<Scalar> lambda2_from_statistics(Index n_samples, Scalar alpha, Scalar mean_rho_product)
{
    Lambda2Heuristic<Scalar> h;
    h.alpha = alpha;
    h.s = significance_threshold(n_samples, alpha);
    h.mean_rho_product = mean_rho_product;
    const Scalar e2s = std::exp(Scalar(2) * h.s);
    h.chosen = (e2s - Scalar(1)) / (Scalar(2) * e2s + Scalar(2)) * (Scalar(1) - mean_rho_product);
    return h;
}

/*
 * Estimates mean ρ1ρ2 as the average over variable pairs j < l of the
 * condition-1 correlation times the condition-2 correlation, then applies
 * the λ2 formula.
 */
template <class Scalar>
Lambda2Heuristic<Scalar> select_lambda2(const StandardizedDataset<Scalar>& data, Scalar alpha)
{
    const Index p = data.n_vars();
    const Matrix<Scalar> corr1 = data.cond1().transpose() * data.cond1();
    const Matrix<Scalar> corr2 = data.cond2().transpose() * data.cond2();
    const Scalar bound = Scalar(1) - Scalar(correlation_clamp);
    const auto& names = data.variable_names();

    std::vector<std::string> warnings;
    auto clamped = [&](Scalar r, Index j, Index l, int cond) {
        if (std::abs(r) >= bound) {
            warnings.push_back("DegenerateCorrelation: " + names[static_cast<std::size_t>(j)] + "-"
                               + names[static_cast<std::size_t>(l)] + " under condition "
                               + std::to_string(cond));
            return std::clamp(r, -bound, bound);
        }
        return r;
    };

    Scalar sum = 0;
    for (Index j = 0; j < p; ++j) {
        for (Index l = j + 1; l < p; ++l) {
            sum += clamped(corr1(j, l), j, l, 1) * clamped(corr2(j, l), j, l, 2);
        }
    }
    const Scalar mean = Scalar(2) * sum / (Scalar(p) * Scalar(p - 1));
    auto h = lambda2_from_statistics(data.n_samples(), alpha, mean);
    h.warnings = std::move(warnings);
    return h;
}

// =======================================================================
// λ1: cross-validation over a log-spaced grid
// =======================================================================

/// Largest |x_jᵀx_k| over node pairs and both conditions.
template <class Scalar>
Scalar lambda_max(const StandardizedDataset<Scalar>& data)
{
    // Same dot products the solver forms at β = 0, so λ_max zeroes every block exactly.
    Scalar top = 0;
    for (const auto* x : {&data.cond1(), &data.cond2()}) {
        for (Index j = 0; j < x->cols(); ++j) {
            for (Index k = 0; k < x->cols(); ++k) {
                if (k != j) top = std::max(top, std::abs(x->col(k).dot(x->col(j))));
            }
        }
    }
    return top;
}

/// Log-spaced descending grid from λ_max down to 0.01·λ_max.
template <class Scalar>
std::vector<Scalar> lambda1_grid(const StandardizedDataset<Scalar>& data, std::size_t length)
{
    if (length < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
    const Scalar top = lambda_max(data);
    std::vector<Scalar> grid(length);
    const Scalar log_ratio = std::log(Scalar(0.01));
    for (std::size_t i = 0; i < length; ++i) {
        const Scalar t = Scalar(i) / Scalar(length - 1);
        grid[i] = top * std::exp(t * log_ratio);
    }
    grid.front() = top;
    grid.back() = Scalar(0.01) * top;
    return grid;
}

/// Fold id per sample: contiguous blocks over a seeded shuffle of 0..n−1.
inline std::vector<int> assign_folds(Index n_samples, int folds, std::uint64_t seed)
{
    if (folds < 2) throw Error(ErrorCode::InvalidArgument, "at least 2 folds are required");
    if (n_samples < folds) throw Error(ErrorCode::FoldTooSmall, "fewer samples than folds");
    const auto n = static_cast<std::size_t>(n_samples);
    Rng rng(seed);
    const auto order = rng.permutation(n);
    std::vector<int> fold_of(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        fold_of[order[pos]] = static_cast<int>(pos * static_cast<std::size_t>(folds) / n);
    }
    std::vector<int> sizes(static_cast<std::size_t>(folds), 0);
    for (int f : fold_of) ++sizes[static_cast<std::size_t>(f)];
    for (int f = 0; f < folds; ++f) {
        if (sizes[static_cast<std::size_t>(f)] < 2) {
            throw Error(ErrorCode::FoldTooSmall,
                "fold " + std::to_string(f) + " has fewer than 2 samples");
        }
    }
    return fold_of;
}

struct CvOptions
{
    int folds = 10;
    std::uint64_t seed = 0;
    /// Pick the sparsest λ1 within one standard error of the minimum;
    /// false picks the minimum-error grid point.
    bool one_standard_error = true;
};

template <class Scalar>
struct Lambda1Selection
{
    std::vector<Scalar> grid;
    /// Mean over folds of the held-out squared error summed over nodes and conditions.
    std::vector<Scalar> cv_mean;
    std::vector<Scalar> cv_se;
    /// Per-condition mean held-out error.
    std::vector<Scalar> cv_mean_cond1;
    std::vector<Scalar> cv_mean_cond2;
    std::size_t chosen_index = 0;
    Scalar chosen = 0;
    int folds = 0;
};

namespace detail {

template <class Scalar>
Matrix<Scalar> select_rows(const Matrix<Scalar>& m, const std::vector<Index>& rows)
{
    Matrix<Scalar> out(static_cast<Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
    return out;
}

template <class Scalar>
StandardizedDataset<Scalar> restandardized_rows(const StandardizedDataset<Scalar>& data,
                                                const std::vector<Index>& rows)
{
    RawDataset<Scalar> r1{select_rows(data.cond1(), rows), data.variable_names()};
    RawDataset<Scalar> r2{select_rows(data.cond2(), rows), data.variable_names()};
    return StandardizedDataset<Scalar>(detail::standardize_columns(r1),
                                       detail::standardize_columns(r2),
                                       data.variable_names());
}

} // namespace detail

/*
 * K-fold cross-validation of λ1 with λ2 = 0. Training and held-out rows are
 * re-standardized separately; each node is fitted along the grid with warm
 * starts and scored by squared prediction error on the held-out rows.
 */
template <class Scalar>
Lambda1Selection<Scalar> select_lambda1_cv(const StandardizedDataset<Scalar>& data,
                                           const std::vector<Scalar>& grid,
                                           const CvOptions& cv = {},
                                           const SolverOptions<Scalar>& opts = {})
{
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda1 grid");
    const Index p = data.n_vars();
    const auto fold_of = assign_folds(data.n_samples(), cv.folds, cv.seed);
    const std::size_t folds = static_cast<std::size_t>(cv.folds);
    const std::size_t g = grid.size();

    // errors[fold][cond][grid point], summed over nodes.
    std::vector<std::array<std::vector<Scalar>, 2>> errors(folds);
    parallel_for(folds, [&](std::size_t f) {
        std::vector<Index> train, test;
        for (std::size_t i = 0; i < fold_of.size(); ++i) {
            (static_cast<std::size_t>(fold_of[i]) == f ? test : train).push_back(static_cast<Index>(i));
        }
        const auto train_data = detail::restandardized_rows(data, train);
        const auto test_data = detail::restandardized_rows(data, test);
        auto& err = errors[f];
        err[0].assign(g, Scalar(0));
        err[1].assign(g, Scalar(0));
        for (Index j = 0; j < p; ++j) {
            auto beta = CoefficientPair<Scalar>::zeros(p, j);
            for (std::size_t i = 0; i < g; ++i) {
                const PenaltyConfig<Scalar> pen{grid[i], Scalar(0), {}};
                beta = fit_node_from(train_data, beta, pen, opts).coefficients;
                err[0][i] += (test_data.cond1().col(j) - test_data.cond1() * beta.beta1).squaredNorm();
                err[1][i] += (test_data.cond2().col(j) - test_data.cond2() * beta.beta2).squaredNorm();
            }
        }
    }, opts.threads);

    Lambda1Selection<Scalar> out;
    out.grid = grid;
    out.folds = cv.folds;
    out.cv_mean.assign(g, Scalar(0));
    out.cv_se.assign(g, Scalar(0));
    out.cv_mean_cond1.assign(g, Scalar(0));
    out.cv_mean_cond2.assign(g, Scalar(0));
    const Scalar kf = Scalar(folds);
    for (std::size_t i = 0; i < g; ++i) {
        Scalar sum = 0, sum1 = 0, sum2 = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            sum1 += errors[f][0][i];
            sum2 += errors[f][1][i];
            sum += errors[f][0][i] + errors[f][1][i];
        }
        const Scalar mean = sum / kf;
        Scalar var = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            const Scalar e = errors[f][0][i] + errors[f][1][i] - mean;
            var += e * e;
        }
        var /= (kf - Scalar(1));
        out.cv_mean[i] = mean;
        out.cv_se[i] = std::sqrt(var / kf);
        out.cv_mean_cond1[i] = sum1 / kf;
        out.cv_mean_cond2[i] = sum2 / kf;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < g; ++i) {
        if (out.cv_mean[i] < out.cv_mean[best]) best = i;
    }
    if (cv.one_standard_error) {
        const Scalar limit = out.cv_mean[best] + out.cv_se[best];
        std::size_t pick = best;
        for (std::size_t i = 0; i < g; ++i) {
            if (grid[i] > grid[pick] && out.cv_mean[i] <= limit) pick = i;
        }
        best = pick;
    }
    out.chosen_index = best;
    out.chosen = grid[best];
    return out;
}

} // namespace diffnet
