#pragma once

#include <cstdint>
#include <optional>

#include <diffnet/network.hpp>
#include <diffnet/regularization.hpp>

namespace diffnet {

struct LearnConfig
{
    /// Explicit penalties skip the corresponding selection procedure.
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    double alpha = 0.01;
    int folds = 10;
    std::uint64_t seed = 0;
    std::size_t grid_length = 40;
    bool one_standard_error = true;
    SolverOptions<double> solver;
    DifferentialOptions differential;
};

struct LambdaChoice
{
    PenaltyConfig<double> penalty;
    /// Present when λ1 came from cross-validation.
    std::optional<Lambda1Selection<double>> cv;
    /// Present when λ2 came from the significance heuristic.
    std::optional<Lambda2Heuristic<double>> heuristic;
};

struct LearnResult
{
    LambdaChoice lambdas;
    FitResult<double> fit;
    NetworkModel model;
    DifferentialSubnetwork subnetwork;
};

/// λ1 by cross-validation and λ2 by the significance heuristic, unless given.
LambdaChoice choose_lambdas(const StandardizedDataset<double>& data, const LearnConfig& config);

/// Selects penalties, fits every node and extracts the differential sub-network.
LearnResult learn_network(const StandardizedDataset<double>& data, const LearnConfig& config);

} // namespace diffnet
