#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <diffnet/core.hpp>
#include <diffnet/parallel.hpp>
#include <diffnet/subproblem.hpp>

namespace diffnet {

template <class Scalar>
struct SolverOptions
{
    /// Stop once no coefficient moves by this much over a full sweep.
    Scalar tolerance = Scalar(1e-6);
    int max_sweeps = 1000;
    /// Worker threads for fit_all (0 = hardware concurrency).
    std::size_t threads = 0;

    void validate() const
    {
        if (!(tolerance > 0) || max_sweeps < 1) {
            throw Error(ErrorCode::InvalidArgument, "tolerance must be positive and max_sweeps >= 1");
        }
    }
};

template <class Scalar>
struct NodeSolution
{
    Index node_index = 0;
    CoefficientPair<Scalar> coefficients;
    Scalar objective = 0;
    int sweeps_used = 0;
    bool converged = false;
};

template <class Scalar>
struct FitResult
{
    std::vector<NodeSolution<Scalar>> nodes;
    /// Nodes that hit max_sweeps, ascending.
    std::vector<Index> not_converged;

    bool all_converged() const { return not_converged.empty(); }
};

/// Residual pair (condition 1, condition 2), each of length N.
template <class Scalar>
using ResidualPair = std::pair<Vector<Scalar>, Vector<Scalar>>;

/*
 * Partial residual of node j with block k left out, computed from scratch:
 * x_j − Σ_{l≠j,k} x_l β_l, separately per condition.
 */
template <class Scalar>
ResidualPair<Scalar> partial_residual(const StandardizedDataset<Scalar>& data, Index j,
                                      const CoefficientPair<Scalar>& beta, Index k)
{
    check_coefficients(data, beta);
    if (k == j) throw Error(ErrorCode::SelfBlock, "block index equals the response node");
    if (k < 0 || k >= data.n_vars()) throw Error(ErrorCode::InvalidArgument, "block index out of range");

    Vector<Scalar> b1 = beta.beta1;
    Vector<Scalar> b2 = beta.beta2;
    b1[j] = b2[j] = b1[k] = b2[k] = Scalar(0);
    return {data.cond1().col(j) - data.cond1() * b1, data.cond2().col(j) - data.cond2() * b2};
}

/*
 * Full residuals y_j − Xβ cached across block updates. Leaving a block out
 * adds its current contribution back; committing a new block value
 * subtracts the change.
 */
template <class Scalar>
class ResidualState
{
public:
    ResidualState(const StandardizedDataset<Scalar>& data, const CoefficientPair<Scalar>& beta)
        : data_(&data), beta_(beta)
    {
        check_coefficients(data, beta);
        const Index j = beta.node_index;
        r1_ = data.cond1().col(j) - data.cond1() * beta.beta1;
        r2_ = data.cond2().col(j) - data.cond2() * beta.beta2;
    }

    /// Correlations of block k with its partial residual.
    RhoPair<Scalar> rho(Index k) const
    {
        const auto x1 = data_->cond1().col(k);
        const auto x2 = data_->cond2().col(k);
        return {x1.dot(r1_) + beta_.beta1[k] * x1.squaredNorm(),
                x2.dot(r2_) + beta_.beta2[k] * x2.squaredNorm()};
    }

    ResidualPair<Scalar> partial(Index k) const
    {
        if (k == beta_.node_index) throw Error(ErrorCode::SelfBlock, "block index equals the response node");
        return {r1_ + data_->cond1().col(k) * beta_.beta1[k],
                r2_ + data_->cond2().col(k) * beta_.beta2[k]};
    }

    void update(Index k, Scalar b1, Scalar b2)
    {
        if (k == beta_.node_index) throw Error(ErrorCode::SelfBlock, "block index equals the response node");
        const Scalar d1 = b1 - beta_.beta1[k];
        const Scalar d2 = b2 - beta_.beta2[k];
        if (d1 != Scalar(0)) r1_.noalias() -= d1 * data_->cond1().col(k);
        if (d2 != Scalar(0)) r2_.noalias() -= d2 * data_->cond2().col(k);
        beta_.beta1[k] = b1;
        beta_.beta2[k] = b2;
    }

    const CoefficientPair<Scalar>& coefficients() const { return beta_; }
    const Vector<Scalar>& residual1() const { return r1_; }
    const Vector<Scalar>& residual2() const { return r2_; }

private:
    const StandardizedDataset<Scalar>* data_;
    CoefficientPair<Scalar> beta_;
    Vector<Scalar> r1_;
    Vector<Scalar> r2_;
};

/// Called after every block update with the block index and the new state.
template <class Scalar>
using BlockObserver = std::function<void(Index, const CoefficientPair<Scalar>&)>;

/*
 * Cyclic block coordinate descent from an arbitrary feasible start. Blocks
 * are visited in ascending order, skipping the response node.
 */
template <class Scalar>
NodeSolution<Scalar> fit_node_from(const StandardizedDataset<Scalar>& data,
                                   const CoefficientPair<Scalar>& start,
                                   const PenaltyConfig<Scalar>& pen,
                                   const SolverOptions<Scalar>& opts = {},
                                   const BlockObserver<Scalar>& observer = {})
{
    pen.validate();
    opts.validate();
    const Index p = data.n_vars();
    const Index j = start.node_index;
    ResidualState<Scalar> state(data, start);

    NodeSolution<Scalar> out;
    out.node_index = j;
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        Scalar max_change = 0;
        for (Index k = 0; k < p; ++k) {
            if (k == j) continue;
#ifndef NDEBUG
            const Scalar before = objective_value(data, j, state.coefficients(), pen);
#endif
            const auto sol = solve_block(state.rho(k), pen);
            const auto& cur = state.coefficients();
            max_change = std::max({max_change, std::abs(sol.beta1 - cur.beta1[k]),
                                   std::abs(sol.beta2 - cur.beta2[k])});
            state.update(k, sol.beta1, sol.beta2);
#ifndef NDEBUG
            assert(objective_value(data, j, state.coefficients(), pen) <= before + Scalar(1e-12));
#endif
            if (observer) observer(k, state.coefficients());
        }
        out.sweeps_used = sweep;
        if (max_change < opts.tolerance) {
            out.converged = true;
            break;
        }
    }
    out.coefficients = state.coefficients();
    out.objective = objective_value(data, j, out.coefficients, pen);
    return out;
}

template <class Scalar>
NodeSolution<Scalar> fit_node(const StandardizedDataset<Scalar>& data, Index j,
                              const PenaltyConfig<Scalar>& pen,
                              const SolverOptions<Scalar>& opts = {},
                              const BlockObserver<Scalar>& observer = {})
{
    if (j < 0 || j >= data.n_vars()) throw Error(ErrorCode::InvalidArgument, "node index out of range");
    return fit_node_from(data, CoefficientPair<Scalar>::zeros(data.n_vars(), j), pen, opts, observer);
}

/*
 * Fits every node. Per-node problems share only the read-only dataset, so
 * they may run concurrently; results are ordered by node index.
 */
template <class Scalar>
FitResult<Scalar> fit_all(const StandardizedDataset<Scalar>& data,
                          const PenaltyConfig<Scalar>& pen,
                          const SolverOptions<Scalar>& opts = {})
{
    pen.validate();
    opts.validate();
    const Index p = data.n_vars();
    FitResult<Scalar> result;
    result.nodes.resize(static_cast<std::size_t>(p));
    parallel_for(static_cast<std::size_t>(p), [&](std::size_t j) {
        result.nodes[j] = fit_node(data, static_cast<Index>(j), pen, opts);
    }, opts.threads);
    for (const auto& node : result.nodes) {
        if (!node.converged) result.not_converged.push_back(node.node_index);
    }
    return result;
}

} // namespace diffnet
