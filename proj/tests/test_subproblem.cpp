#include <doctest.h>

#include <diffnet/subproblem.hpp>

#include "support.hpp"

using namespace diffnet;
using diffnet::test::brute_force_prox;

namespace {

PenaltyConfig<double> pen(double l1, double l2) { return {l1, l2, {}}; }

BlockSolution<double> solve(double r1, double r2, double l1, double l2)
{
    return solve_block<double>({r1, r2}, pen(l1, l2));
}

struct Tuple
{
    double r1, r2, l1, l2;
};

std::vector<Tuple> random_tuples(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<Tuple> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, 2), rng.uniform(0, 2)});
    }
    return out;
}

} // namespace

TEST_CASE("region classification")
{
    CHECK(classify_region<double>({0, 0}, pen(1, 0.5)) == 0);
    CHECK(classify_region<double>({2, 4}, pen(1, 0.5)) == 2);
    CHECK(classify_region<double>({3, 3.5}, pen(1, 0.5)) == 1);
    CHECK(classify_region<double>({-2, -4}, pen(1, 0.5)) == 8);
    CHECK(classify_region<double>({-3, -3.5}, pen(1, 0.5)) == 7);
    CHECK(classify_region<double>({4, 2}, pen(1, 0.5)) == 12);
}

TEST_CASE("every region is reachable and matches the oracle")
{
    // One interior point per region at λ1 = 1, λ2 = 0.5.
    const std::vector<std::pair<RegionId, RhoPair<double>>> points = {
        {0, {0.2, -0.1}}, {1, {3, 3.5}},   {2, {2, 4}},    {3, {-0.5, 3}},  {4, {-3, 3}},
        {5, {-3, 0.2}},   {6, {-4, -2}},   {7, {-3, -3.5}}, {8, {-2, -4}},  {9, {0.5, -3}},
        {10, {3, -3}},    {11, {3, -0.2}}, {12, {4, 2}},
    };
    for (const auto& [region, rho] : points) {
        CAPTURE(region);
        const auto sol = solve_block(rho, pen(1, 0.5));
        CHECK(sol.region == region);
        const auto ref = brute_force_prox(rho.rho1, rho.rho2, 1, 0.5);
        CHECK(std::abs(sol.beta1 - ref.beta1) < 1e-6);
        CHECK(std::abs(sol.beta2 - ref.beta2) < 1e-6);
    }
}

TEST_CASE("closed forms on worked examples")
{
    auto a = solve(2, 4, 1, 0.5);
    CHECK(a.beta1 == 1.5);
    CHECK(a.beta2 == 2.5);
    auto b = solve(3, 3.5, 1, 0.5);
    CHECK(b.beta1 == 2.25);
    CHECK(b.beta2 == 2.25);
    auto c = solve(0.7, -1.3, 0, 0);
    CHECK(c.beta1 == 0.7);
    CHECK(c.beta2 == -1.3);
    auto d = solve(2, -0.5, 1, 0);
    CHECK(d.beta1 == 1.0);
    CHECK(d.beta2 == 0.0);
}

TEST_CASE("objective matches brute force on random tuples")
{
    for (const auto& t : random_tuples(500, 11)) {
        const auto sol = solve(t.r1, t.r2, t.l1, t.l2);
        const auto ref = brute_force_prox(t.r1, t.r2, t.l1, t.l2);
        const double f = block_objective<double>(sol.beta1, sol.beta2, {t.r1, t.r2}, pen(t.l1, t.l2));
        CHECK(f <= ref.objective + 1e-6);
        CHECK(std::abs(f - ref.objective) <= 1e-6);
    }
}

TEST_CASE("KKT residual vanishes at the closed form and not elsewhere")
{
    for (const auto& t : random_tuples(5000, 12)) {
        const auto p = pen(t.l1, t.l2);
        const auto sol = solve(t.r1, t.r2, t.l1, t.l2);
        CHECK(kkt_residual<double>(sol.beta1, sol.beta2, {t.r1, t.r2}, p) <= 1e-9);
    }
    CHECK(kkt_residual<double>(1.0, 1.0, {2, 4}, pen(1, 0.5)) > 0.1);
    CHECK(kkt_residual<double>(0.0, 0.0, {2, 4}, pen(1, 0.5)) > 0.1);
}

TEST_CASE("sign and swap symmetry are exact")
{
    for (const auto& t : random_tuples(5000, 13)) {
        const auto s = solve(t.r1, t.r2, t.l1, t.l2);
        const auto neg = solve(-t.r1, -t.r2, t.l1, t.l2);
        const auto sw = solve(t.r2, t.r1, t.l1, t.l2);
        CHECK(neg.beta1 == -s.beta1);
        CHECK(neg.beta2 == -s.beta2);
        CHECK(sw.beta1 == s.beta2);
        CHECK(sw.beta2 == s.beta1);
    }
}

TEST_CASE("fusion and separation limits")
{
    for (const auto& t : random_tuples(2000, 14)) {
        const double l2 = std::abs(t.r1 - t.r2) / 2 + t.l2;
        const auto fused = solve(t.r1, t.r2, t.l1, l2);
        CHECK(fused.beta1 == fused.beta2);

        const auto sep = solve(t.r1, t.r2, t.l1, 0.0);
        CHECK(sep.beta1 == soft_threshold(t.r1, t.l1));
        CHECK(sep.beta2 == soft_threshold(t.r2, t.l1));
    }
}

TEST_CASE("prox is nonexpansive")
{
    Rng rng(15);
    for (int i = 0; i < 5000; ++i) {
        const double l1 = rng.uniform(0, 2), l2 = rng.uniform(0, 2);
        const double a1 = rng.uniform(-5, 5), a2 = rng.uniform(-5, 5);
        const double b1 = rng.uniform(-5, 5), b2 = rng.uniform(-5, 5);
        const auto pa = solve(a1, a2, l1, l2);
        const auto pb = solve(b1, b2, l1, l2);
        const double out = std::hypot(pa.beta1 - pb.beta1, pa.beta2 - pb.beta2);
        CHECK(out <= std::hypot(a1 - b1, a2 - b2) + 1e-12);
    }
}

TEST_CASE("adjacent region formulas agree on shared boundaries")
{
    Rng rng(16);
    const double l1 = 0.8, l2 = 0.3;
    const auto p = pen(l1, l2);
    // Points on the lines that separate regions: d = ±2λ2, mean = ±λ1,
    // and the shifted thresholds u = ±λ1.
    std::vector<RhoPair<double>> boundary;
    for (int i = 0; i < 400; ++i) {
        const double t = rng.uniform(-4, 4);
        boundary.push_back({t + 2 * l2, t});
        boundary.push_back({t - 2 * l2, t});
        boundary.push_back({l1 + t, l1 - t});
        boundary.push_back({-l1 + t, -l1 - t});
        boundary.push_back({l1 - l2, t});
        boundary.push_back({-l1 - l2, t});
        boundary.push_back({l1 + l2, t});
        boundary.push_back({-l1 + l2, t});
        boundary.push_back({t, l1 + l2});
        boundary.push_back({t, -l1 - l2});
        boundary.push_back({t, l1 - l2});
        boundary.push_back({t, -l1 + l2});
    }
    int shared = 0;
    for (const auto& rho : boundary) {
        std::vector<RegionId> owners;
        for (RegionId r = 0; r < region_count; ++r) {
            if (in_region_closure(r, rho, l1, l2)) owners.push_back(r);
        }
        REQUIRE(!owners.empty());
        const auto first = region_formula(owners.front(), rho, p);
        for (RegionId r : owners) {
            const auto other = region_formula(r, rho, p);
            CHECK(std::abs(other.beta1 - first.beta1) <= 1e-12);
            CHECK(std::abs(other.beta2 - first.beta2) <= 1e-12);
        }
        CHECK(solve_block(rho, p).region == owners.front());
        shared += owners.size() > 1;
    }
    CHECK(shared > 1000);
}

TEST_CASE("solution is continuous across region boundaries")
{
    Rng rng(17);
    const double l1 = 1.0, l2 = 0.4;
    const auto p = pen(l1, l2);
    const double h = 1e-7;
    for (int i = 0; i < 500; ++i) {
        const double t = rng.uniform(-4, 4);
        for (RhoPair<double> rho : {RhoPair<double>{t + 2 * l2, t}, {l1 + t, l1 - t}, {l1 - l2, t},
                                    {-l1 - l2, t}, {t, l1 + l2}, {t, -l1 + l2}}) {
            const auto base = solve_block(rho, p);
            for (double dx : {-h, h}) {
                for (double dy : {-h, h}) {
                    const auto near = solve_block<double>({rho.rho1 + dx, rho.rho2 + dy}, p);
                    CHECK(std::hypot(near.beta1 - base.beta1, near.beta2 - base.beta2)
                          <= std::hypot(dx, dy) + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("non-finite input is rejected")
{
    CHECK_THROWS_AS(classify_region<double>({std::nan(""), 1.0}, pen(1, 1)), Error);
}

TEST_CASE("single precision instantiation")
{
    const auto s = solve_block<float>({2.0f, 4.0f}, PenaltyConfig<float>{1.0f, 0.5f, {}});
    CHECK(s.beta1 == 1.5f);
    CHECK(s.beta2 == 2.5f);
}
