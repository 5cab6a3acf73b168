#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <diffnet/errors.hpp>

namespace diffnet {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// =======================================================================
// Data model
// =======================================================================

/*
 * Samples of one condition: rows are samples, columns are variables.
 */
template <class Scalar>
struct RawDataset
{
    Matrix<Scalar> values;
    std::vector<std::string> variable_names;

    Index n_samples() const { return values.rows(); }
    Index n_vars() const { return values.cols(); }

    void validate() const
    {
        if (static_cast<Index>(variable_names.size()) != values.cols()) {
            throw Error(ErrorCode::ShapeMismatch,
                "expected " + std::to_string(values.cols()) + " variable names, got "
                + std::to_string(variable_names.size()));
        }
        if (values.rows() < 4) {
            throw Error(ErrorCode::InvalidArgument, "at least 4 samples are required");
        }
        if (values.cols() < 2) {
            throw Error(ErrorCode::InvalidArgument, "at least 2 variables are required");
        }
        if (!values.allFinite()) {
            throw Error(ErrorCode::NonFinite, "dataset contains non-finite entries");
        }
        std::set<std::string> seen(variable_names.begin(), variable_names.end());
        if (seen.size() != variable_names.size()) {
            throw Error(ErrorCode::InvalidArgument, "variable names must be unique");
        }
    }
};

/*
 * Paired, balanced samples with every column centered and scaled to unit
 * Euclidean length. Immutable once built.
 */
template <class Scalar>
class StandardizedDataset
{
public:
    static constexpr double invariant_tolerance = 1e-10;

    StandardizedDataset(Matrix<Scalar> cond1, Matrix<Scalar> cond2,
                        std::vector<std::string> variable_names)
        : cond1_(std::move(cond1)), cond2_(std::move(cond2)),
          names_(std::move(variable_names))
    {
        if (cond1_.rows() != cond2_.rows()) {
            throw Error(ErrorCode::UnbalancedDesign, "conditions have different sample counts");
        }
        if (cond1_.cols() != cond2_.cols()
            || static_cast<Index>(names_.size()) != cond1_.cols()) {
            throw Error(ErrorCode::ShapeMismatch, "conditions have different variable counts");
        }
        check_columns(cond1_);
        check_columns(cond2_);
    }

    const Matrix<Scalar>& cond1() const { return cond1_; }
    const Matrix<Scalar>& cond2() const { return cond2_; }
    const Matrix<Scalar>& condition(int c) const { return c == 1 ? cond1_ : cond2_; }
    const std::vector<std::string>& variable_names() const { return names_; }
    Index n_samples() const { return cond1_.rows(); }
    Index n_vars() const { return cond1_.cols(); }

private:
    static void check_columns(const Matrix<Scalar>& m)
    {
        for (Index k = 0; k < m.cols(); ++k) {
            const double mean = static_cast<double>(m.col(k).mean());
            const double sq = static_cast<double>(m.col(k).squaredNorm());
            if (!(std::abs(mean) <= invariant_tolerance)
                || !(std::abs(sq - 1.0) <= invariant_tolerance)) {
                throw Error(ErrorCode::NotStandardized,
                    "column " + std::to_string(k) + " is not centered with unit length");
            }
        }
    }

    Matrix<Scalar> cond1_;
    Matrix<Scalar> cond2_;
    std::vector<std::string> names_;
};

/*
 * Coefficients of node `node_index` regressed on all other nodes, one
 * vector per condition. The self coefficients are pinned at zero.
 */
template <class Scalar>
struct CoefficientPair
{
    Vector<Scalar> beta1;
    Vector<Scalar> beta2;
    Index node_index = 0;

    static CoefficientPair zeros(Index p, Index j)
    {
        return {Vector<Scalar>::Zero(p), Vector<Scalar>::Zero(p), j};
    }

    bool respects_self_edge() const
    {
        return beta1[node_index] == Scalar(0) && beta2[node_index] == Scalar(0);
    }
};

template <class Scalar>
struct PenaltyConfig
{
    Scalar lambda1 = 0;
    Scalar lambda2 = 0;
    std::optional<Scalar> alpha;

    void validate() const
    {
        if (!(lambda1 >= 0) || !(lambda2 >= 0)
            || !std::isfinite(static_cast<double>(lambda1))
            || !std::isfinite(static_cast<double>(lambda2))) {
            throw Error(ErrorCode::InvalidArgument, "penalties must be finite and nonnegative");
        }
        if (alpha && !(*alpha > 0 && *alpha < 1)) {
            throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
        }
    }
};

// =======================================================================
// Operations
// =======================================================================

namespace detail {

template <class Scalar>
Matrix<Scalar> standardize_columns(const RawDataset<Scalar>& raw)
{
    Matrix<Scalar> out = raw.values;
    for (Index k = 0; k < out.cols(); ++k) {
        auto col = out.col(k);
        col.array() -= col.mean();
        const Scalar norm = col.norm();
        if (!(norm > Scalar(0))) {
            throw Error(ErrorCode::ConstantColumn,
                "column '" + raw.variable_names[static_cast<std::size_t>(k)]
                + "' has zero variance");
        }
        col /= norm;
    }
    return out;
}

} // namespace detail

/*
 * Centers every column and scales it to unit Euclidean length, separately
 * per condition. Both conditions must share N, p and the variable labels.
 */
template <class Scalar>
StandardizedDataset<Scalar> standardize(const RawDataset<Scalar>& raw1,
                                        const RawDataset<Scalar>& raw2)
{
    raw1.validate();
    raw2.validate();
    if (raw1.n_vars() != raw2.n_vars() || raw1.variable_names != raw2.variable_names) {
        throw Error(ErrorCode::ShapeMismatch, "conditions must share the same variables in order");
    }
    if (raw1.n_samples() != raw2.n_samples()) {
        throw Error(ErrorCode::UnbalancedDesign,
            "condition 1 has " + std::to_string(raw1.n_samples()) + " samples, condition 2 has "
            + std::to_string(raw2.n_samples()));
    }
    return StandardizedDataset<Scalar>(detail::standardize_columns(raw1),
                                       detail::standardize_columns(raw2),
                                       raw1.variable_names);
}

template <class Scalar>
void check_coefficients(const StandardizedDataset<Scalar>& data, const CoefficientPair<Scalar>& beta)
{
    const Index p = data.n_vars();
    if (beta.beta1.size() != p || beta.beta2.size() != p
        || beta.node_index < 0 || beta.node_index >= p) {
        throw Error(ErrorCode::ShapeMismatch, "coefficient vectors do not match the dataset");
    }
    if (!beta.respects_self_edge()) {
        throw Error(ErrorCode::SelfEdgeViolation,
            "self coefficient of node " + std::to_string(beta.node_index) + " is nonzero");
    }
}

template <class Scalar>
Scalar penalty_value(const CoefficientPair<Scalar>& beta, const PenaltyConfig<Scalar>& pen)
{
    return pen.lambda1 * (beta.beta1.template lpNorm<1>() + beta.beta2.template lpNorm<1>())
         + pen.lambda2 * (beta.beta1 - beta.beta2).template lpNorm<1>();
}

/*
 * ½‖y_j − Xβ‖² + λ1‖β‖₁ + λ2‖β¹ − β²‖₁ for node j, evaluated one
 * condition block at a time.
 */
template <class Scalar>
Scalar objective_value(const StandardizedDataset<Scalar>& data, Index j,
                       const CoefficientPair<Scalar>& beta, const PenaltyConfig<Scalar>& pen)
{
    check_coefficients(data, beta);
    if (beta.node_index != j) {
        throw Error(ErrorCode::InvalidArgument, "coefficients belong to a different node");
    }
    const Scalar loss1 = (data.cond1().col(j) - data.cond1() * beta.beta1).squaredNorm();
    const Scalar loss2 = (data.cond2().col(j) - data.cond2() * beta.beta2).squaredNorm();
    return Scalar(0.5) * (loss1 + loss2) + penalty_value(beta, pen);
}

} // namespace diffnet
