#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include <diffnet/solver.hpp>

namespace diffnet {

/// Coefficients with smaller magnitude count as zero.
inline constexpr double zero_threshold = 1e-9;

/*
 * Undirected edge source < target. beta<c>_st is the coefficient of the
 * target in the source's regression under condition c; beta<c>_ts the
 * reverse direction.
 */
struct NetworkEdge
{
    Index source = 0;
    Index target = 0;
    double beta1_st = 0;
    double beta1_ts = 0;
    double beta2_st = 0;
    double beta2_ts = 0;
    bool present1 = false;
    bool present2 = false;

    bool weight_changed() const;
    bool presence_changed() const { return present1 != present2; }
};

struct NetworkModel
{
    std::vector<std::string> names;
    /// Sorted by (source, target).
    std::vector<NetworkEdge> edges;
};

struct DifferentialOptions
{
    /// Only presence changes count; equal-support weight changes are ignored.
    bool structural_only = false;
};

struct DifferentialSubnetwork
{
    std::vector<NetworkEdge> edges;
    /// Ascending indices of nodes touching a differential edge.
    std::vector<Index> nodes;
};

bool is_differential(const NetworkEdge& edge, const DifferentialOptions& opts = {});

/*
 * Symmetrizes per-node solutions with the OR rule: an edge is present under
 * a condition when either directional coefficient is nonzero.
 */
NetworkModel assemble(const std::vector<NodeSolution<double>>& solutions,
                      const std::vector<std::string>& names,
                      bool accept_unconverged = false);

DifferentialSubnetwork differential(const NetworkModel& model, const DifferentialOptions& opts = {});

nlohmann::json network_to_json(const NetworkModel& model, const DifferentialOptions& opts = {});
nlohmann::json differential_to_json(const DifferentialSubnetwork& sub, const NetworkModel& model);
NetworkModel network_from_json(const nlohmann::json& j);

/// Black: both conditions, red: condition 1 only, green: condition 2 only.
std::string network_to_dot(const NetworkModel& model);
std::string differential_to_dot(const DifferentialSubnetwork& sub, const NetworkModel& model);

} // namespace diffnet
