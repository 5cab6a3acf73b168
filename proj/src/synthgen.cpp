#include <diffnet/synthgen.hpp>

#include <Eigen/Cholesky>
#include <cmath>
#include <map>
#include <set>

#include <diffnet/random.hpp>

namespace diffnet {

void GraphSpec::validate() const
{
    if (p < 1) throw Error(ErrorCode::InvalidGraph, "graph needs at least one node");
    if (!names.empty() && static_cast<Index>(names.size()) != p) {
        throw Error(ErrorCode::InvalidGraph, "names do not match node count");
    }
    std::set<std::pair<Index, Index>> seen;
    for (const auto& e : edges) {
        if (e.u < 0 || e.v >= p || e.u >= e.v) {
            throw Error(ErrorCode::InvalidGraph,
                "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v)
                + ") must satisfy 0 <= u < v < p");
        }
        if (!std::isfinite(e.weight) || e.weight == 0.0) {
            throw Error(ErrorCode::InvalidGraph, "edge weights must be finite and nonzero");
        }
        if (!seen.emplace(e.u, e.v).second) {
            throw Error(ErrorCode::InvalidGraph, "duplicate edge");
        }
    }
    if (!names.empty()) {
        std::set<std::string> unique(names.begin(), names.end());
        if (unique.size() != names.size()) throw Error(ErrorCode::InvalidGraph, "duplicate node names");
    }
}

std::vector<std::string> GraphSpec::labels() const
{
    if (!names.empty()) return names;
    std::vector<std::string> out;
    for (Index i = 0; i < p; ++i) out.push_back("X" + std::to_string(i + 1));
    return out;
}

PrecisionMatrix build_precision(const GraphSpec& spec)
{
    spec.validate();
    const Index p = spec.p;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
    for (const auto& e : spec.edges) {
        omega(e.u, e.v) = e.weight;
        omega(e.v, e.u) = e.weight;
    }
    for (Index i = 0; i < p; ++i) {
        omega(i, i) = 1.0 + omega.row(i).cwiseAbs().sum() + 0.1;
    }
    const Eigen::VectorXd scale = omega.diagonal().cwiseSqrt().cwiseInverse();
    omega = scale.asDiagonal() * omega * scale.asDiagonal();
    omega.diagonal().setOnes();

    Eigen::LLT<Eigen::MatrixXd> llt(omega);
    if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 1e-8) {
        throw Error(ErrorCode::NotPositiveDefinite, "precision matrix failed Cholesky factorization");
    }
    return {std::move(omega), spec.labels()};
}

RawDataset<double> sample(const PrecisionMatrix& precision, Index n, std::uint64_t seed)
{
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
    const Index p = precision.omega.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(precision.omega);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "precision matrix failed Cholesky factorization");
    }

    // Draw z row by row so the stream order is sample-major.
    Rng rng(seed);
    Eigen::MatrixXd z(p, n);
    for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < p; ++k) z(k, i) = rng.normal();
    }
    // Ω = LLᵀ, so x = L⁻ᵀz has covariance Ω⁻¹.
    const Eigen::MatrixXd x = llt.matrixU().solve(z);
    return {x.transpose(), precision.names};
}

std::pair<RawDataset<double>, RawDataset<double>> simulate_pair(const ExperimentPair& pair, Index n,
                                                                std::uint64_t seed)
{
    if (pair.cond1.p != pair.cond2.p || pair.cond1.labels() != pair.cond2.labels()) {
        throw Error(ErrorCode::InvalidGraph, "condition graphs must share the node set");
    }
    return {sample(build_precision(pair.cond1), n, seed),
            sample(build_precision(pair.cond2), n, seed ^ 0x9E3779B97F4A7C15ULL)};
}

std::vector<std::pair<Index, Index>> changed_edges(const ExperimentPair& pair)
{
    std::map<std::pair<Index, Index>, double> w1, w2;
    for (const auto& e : pair.cond1.edges) w1[{e.u, e.v}] = e.weight;
    for (const auto& e : pair.cond2.edges) w2[{e.u, e.v}] = e.weight;
    std::set<std::pair<Index, Index>> out;
    for (const auto& [key, w] : w1) {
        auto it = w2.find(key);
        if (it == w2.end() || it->second != w) out.insert(key);
    }
    for (const auto& [key, w] : w2) {
        if (!w1.count(key)) out.insert(key);
    }
    return {out.begin(), out.end()};
}

nlohmann::json spec_to_json(const GraphSpec& spec)
{
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : spec.edges) edges.push_back({e.u, e.v, e.weight});
    return {{"p", spec.p}, {"names", spec.labels()}, {"edges", edges}};
}

GraphSpec spec_from_json(const nlohmann::json& j)
{
    GraphSpec spec;
    try {
        spec.p = j.at("p").get<Index>();
        if (j.contains("names")) spec.names = j.at("names").get<std::vector<std::string>>();
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) {
                throw Error(ErrorCode::ParseError, "edges must be [u, v, weight] triples");
            }
            spec.edges.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("invalid graph spec: ") + ex.what());
    }
    spec.validate();
    return spec;
}

} // namespace diffnet
