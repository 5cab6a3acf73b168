#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include <diffnet/core.hpp>

namespace diffnet {

struct WeightedEdge
{
    Index u = 0;
    Index v = 0;
    double weight = 0;
};

/*
 * Undirected graph with weighted edges (u < v) used to generate Gaussian
 * samples. Names are optional; defaults are X1..Xp.
 */
struct GraphSpec
{
    Index p = 0;
    std::vector<std::string> names;
    std::vector<WeightedEdge> edges;

    void validate() const;
    std::vector<std::string> labels() const;
};

struct PrecisionMatrix
{
    Eigen::MatrixXd omega;
    std::vector<std::string> names;
};

/// Graph pair for the two conditions of a simulated experiment.
struct ExperimentPair
{
    GraphSpec cond1;
    GraphSpec cond2;
};

/*
 * Off-diagonals take the edge weights, the diagonal is 1 + Σ|row| + 0.1,
 * then the matrix is rescaled symmetrically to unit diagonal.
 */
PrecisionMatrix build_precision(const GraphSpec& spec);

/// n draws from N(0, Ω⁻¹) via the Cholesky factor of Ω.
RawDataset<double> sample(const PrecisionMatrix& precision, Index n, std::uint64_t seed);

/// Samples both conditions; the two streams use distinct seeds derived from `seed`.
std::pair<RawDataset<double>, RawDataset<double>> simulate_pair(const ExperimentPair& pair, Index n,
                                                                std::uint64_t seed);

/// "six-node" or "grn20".
ExperimentPair builtin_experiment(const std::string& name);
std::vector<std::string> builtin_experiment_names();

/// Node pairs (u < v) whose edge presence or weight differs between the graphs.
std::vector<std::pair<Index, Index>> changed_edges(const ExperimentPair& pair);

nlohmann::json spec_to_json(const GraphSpec& spec);
GraphSpec spec_from_json(const nlohmann::json& j);

} // namespace diffnet
