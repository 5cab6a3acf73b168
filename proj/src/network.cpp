#include <diffnet/network.hpp>

#include <cmath>
#include <set>
#include <sstream>

namespace diffnet {

namespace {

double clean(double x)
{
    return std::abs(x) < zero_threshold ? 0.0 : x;
}

const char* edge_color(const NetworkEdge& e)
{
    if (e.present1 && e.present2) return "black";
    return e.present1 ? "red" : "green";
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

nlohmann::json edge_to_json(const NetworkEdge& e, const std::vector<std::string>& names, bool diff)
{
    return {{"source", names[static_cast<std::size_t>(e.source)]},
            {"target", names[static_cast<std::size_t>(e.target)]},
            {"beta1_st", e.beta1_st},
            {"beta1_ts", e.beta1_ts},
            {"beta2_st", e.beta2_st},
            {"beta2_ts", e.beta2_ts},
            {"present1", e.present1},
            {"present2", e.present2},
            {"differential", diff}};
}

std::string dot_graph(const std::string& title, const std::vector<std::string>& names,
                      const std::vector<Index>& nodes, const std::vector<NetworkEdge>& edges)
{
    std::ostringstream out;
    out << "graph " << quoted(title) << " {\n";
    for (Index v : nodes) out << "  " << quoted(names[static_cast<std::size_t>(v)]) << ";\n";
    for (const auto& e : edges) {
        out << "  " << quoted(names[static_cast<std::size_t>(e.source)]) << " -- "
            << quoted(names[static_cast<std::size_t>(e.target)]) << " [color=" << edge_color(e)
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace

bool NetworkEdge::weight_changed() const
{
    return std::abs(beta1_st - beta2_st) > zero_threshold
        || std::abs(beta1_ts - beta2_ts) > zero_threshold;
}

bool is_differential(const NetworkEdge& edge, const DifferentialOptions& opts)
{
    return opts.structural_only ? edge.presence_changed() : edge.weight_changed();
}

NetworkModel assemble(const std::vector<NodeSolution<double>>& solutions,
                      const std::vector<std::string>& names, bool accept_unconverged)
{
    const Index p = static_cast<Index>(names.size());
    std::vector<const NodeSolution<double>*> by_node(names.size(), nullptr);
    for (const auto& s : solutions) {
        if (s.node_index < 0 || s.node_index >= p
            || s.coefficients.beta1.size() != p || s.coefficients.beta2.size() != p) {
            throw Error(ErrorCode::ShapeMismatch, "solution does not match the node set");
        }
        if (!s.converged && !accept_unconverged) {
            throw Error(ErrorCode::NotConverged,
                "node '" + names[static_cast<std::size_t>(s.node_index)] + "' did not converge");
        }
        by_node[static_cast<std::size_t>(s.node_index)] = &s;
    }
    for (Index v = 0; v < p; ++v) {
        if (!by_node[static_cast<std::size_t>(v)]) {
            throw Error(ErrorCode::MissingNode,
                "no solution for node '" + names[static_cast<std::size_t>(v)] + "'");
        }
    }

    NetworkModel model;
    model.names = names;
    for (Index u = 0; u < p; ++u) {
        const auto& cu = by_node[static_cast<std::size_t>(u)]->coefficients;
        for (Index v = u + 1; v < p; ++v) {
            const auto& cv = by_node[static_cast<std::size_t>(v)]->coefficients;
            NetworkEdge e;
            e.source = u;
            e.target = v;
            e.beta1_st = clean(cu.beta1[v]);
            e.beta1_ts = clean(cv.beta1[u]);
            e.beta2_st = clean(cu.beta2[v]);
            e.beta2_ts = clean(cv.beta2[u]);
            e.present1 = e.beta1_st != 0.0 || e.beta1_ts != 0.0;
            e.present2 = e.beta2_st != 0.0 || e.beta2_ts != 0.0;
            if (e.present1 || e.present2) model.edges.push_back(e);
        }
    }
    return model;
}

DifferentialSubnetwork differential(const NetworkModel& model, const DifferentialOptions& opts)
{
    DifferentialSubnetwork sub;
    std::set<Index> nodes;
    for (const auto& e : model.edges) {
        if (!is_differential(e, opts)) continue;
        sub.edges.push_back(e);
        nodes.insert(e.source);
        nodes.insert(e.target);
    }
    sub.nodes.assign(nodes.begin(), nodes.end());
    return sub;
}

nlohmann::json network_to_json(const NetworkModel& model, const DifferentialOptions& opts)
{
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : model.edges) edges.push_back(edge_to_json(e, model.names, is_differential(e, opts)));
    return {{"nodes", model.names}, {"edges", edges}};
}

nlohmann::json differential_to_json(const DifferentialSubnetwork& sub, const NetworkModel& model)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (Index v : sub.nodes) nodes.push_back(model.names[static_cast<std::size_t>(v)]);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : sub.edges) edges.push_back(edge_to_json(e, model.names, true));
    return {{"nodes", nodes}, {"edges", edges}};
}

NetworkModel network_from_json(const nlohmann::json& j)
{
    NetworkModel model;
    try {
        model.names = j.at("nodes").get<std::vector<std::string>>();
        auto index_of = [&](const std::string& name) {
            for (std::size_t i = 0; i < model.names.size(); ++i) {
                if (model.names[i] == name) return static_cast<Index>(i);
            }
            throw Error(ErrorCode::ParseError, "edge refers to unknown node '" + name + "'");
        };
        for (const auto& je : j.at("edges")) {
            NetworkEdge e;
            e.source = index_of(je.at("source").get<std::string>());
            e.target = index_of(je.at("target").get<std::string>());
            e.beta1_st = je.at("beta1_st").get<double>();
            e.beta1_ts = je.at("beta1_ts").get<double>();
            e.beta2_st = je.at("beta2_st").get<double>();
            e.beta2_ts = je.at("beta2_ts").get<double>();
            e.present1 = je.at("present1").get<bool>();
            e.present2 = je.at("present2").get<bool>();
            model.edges.push_back(e);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("invalid network JSON: ") + ex.what());
    }
    return model;
}

std::string network_to_dot(const NetworkModel& model)
{
    std::vector<Index> all(model.names.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Index>(i);
    return dot_graph("network", model.names, all, model.edges);
}

std::string differential_to_dot(const DifferentialSubnetwork& sub, const NetworkModel& model)
{
    return dot_graph("differential", model.names, sub.nodes, sub.edges);
}

} // namespace diffnet
