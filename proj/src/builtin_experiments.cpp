// Ground-truth topologies of the built-in experiments. These are fixed
// constants of this project; docs/builtin_experiments.md lists them.
//
// Weights are precision-matrix entries before unit-diagonal rescaling.
// Negative entries give positive partial correlations, so the simulated
// variables are strongly and positively correlated.

#include <diffnet/synthgen.hpp>

namespace diffnet {

namespace {

ExperimentPair with_changes(Index p, const std::vector<std::string>& names,
                            const std::vector<WeightedEdge>& shared,
                            const std::vector<WeightedEdge>& only1,
                            const std::vector<WeightedEdge>& only2)
{
    ExperimentPair pair{{p, names, shared}, {p, names, shared}};
    pair.cond1.edges.insert(pair.cond1.edges.end(), only1.begin(), only1.end());
    pair.cond2.edges.insert(pair.cond2.edges.end(), only2.begin(), only2.end());
    return pair;
}

ExperimentPair six_node()
{
    constexpr double shared = -2.5;
    constexpr double changed = -5.0;
    //                          A    B    C    D    E    F
    return with_changes(6, {"A", "B", "C", "D", "E", "F"},
        {{0, 1, shared}, {0, 2, shared}, {1, 3, shared},   // A-B A-C B-D
         {2, 3, shared}, {3, 4, shared}, {4, 5, shared}},  // C-D D-E E-F
        {{2, 4, changed}},                                 // C-E
        {{0, 5, changed}, {1, 4, changed}});               // A-F B-E
}

// The ten changed edges form one matching per condition over the first ten
// genes; the remaining genes carry a shared backbone.
ExperimentPair grn20()
{
    constexpr double shared = -1.5;
    constexpr double changed = -3.0;
    return with_changes(20,
        {"MBP1_SWI6", "CLB5", "CLB6", "PHO2", "FLO1", "FLO10", "TRP4", "CDC10", "ACE2", "SWI4",
         "CLN1", "CLN2", "CDC20", "SIC1", "FKH2", "NDD1", "MCM1", "SWI5", "HO", "CTS1"},
        {{10, 11, shared}, {11, 12, shared}, {12, 13, shared}, {13, 14, shared}, {10, 14, shared},
         {15, 16, shared}, {16, 17, shared}, {17, 18, shared}, {18, 19, shared}, {15, 19, shared},
         {10, 15, shared}, {12, 17, shared}, {14, 19, shared}, {2, 12, shared}, {7, 17, shared}},
        {{0, 1, changed}, {2, 3, changed}, {4, 5, changed}, {6, 7, changed}, {8, 9, changed}},
        {{1, 2, changed}, {3, 4, changed}, {5, 6, changed}, {7, 8, changed}, {0, 9, changed}});
}

} // namespace

std::vector<std::string> builtin_experiment_names()
{
    return {"six-node", "grn20"};
}

ExperimentPair builtin_experiment(const std::string& name)
{
    if (name == "six-node") return six_node();
    if (name == "grn20") return grn20();
    throw Error(ErrorCode::UnknownExperiment, "unknown builtin experiment '" + name + "'");
}

} // namespace diffnet
