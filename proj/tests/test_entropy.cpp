#include <doctest.h>

#include <cmath>
#include <random>

#include "hyplab/entropy_lab.hpp"

using namespace hyplab;
using namespace hyplab::entropy;

namespace {

// Greedy counts straight from the dynamical metric. On forward words at a
// common base d_n is an ultrametric, so both greedy passes are exact.
std::pair<std::size_t, std::size_t> greedy_counts(const std::vector<TreeFlowPoint>& u, int n, double delta) {
    std::vector<std::size_t> centers, separated;
    for (std::size_t i = 0; i < u.size(); ++i) {
        bool covered = false;
        for (auto c : centers)
            if (dyn_metric(u[i], u[c], n) <= delta) covered = true;
        if (!covered) centers.push_back(i);
        bool far = true;
        for (auto s : separated)
            if (dyn_metric(u[i], u[s], n) <= 2 * delta) far = false;
        if (far) separated.push_back(i);
    }
    return {separated.size(), centers.size()};
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("tree dynamical metric equals 2 (k - lcp) on forward windows") {
    auto u = tree_universe(2, 5, 12);
    for (std::size_t i = 0; i < u.size(); i += 7)
        for (std::size_t j = 0; j < u.size(); j += 5) {
            std::size_t lcp = 0;
            while (lcp < u[i].forward.size() && u[i].forward[lcp] == u[j].forward[lcp]) ++lcp;
            for (long k : {1L, 3L, 5L, 9L}) {
                long expect = 2 * std::max<long>(0, k - static_cast<long>(std::min<std::size_t>(lcp, k)));
                CHECK(dyn_metric(u[i], u[j], k) == expect);
            }
        }
    CHECK_THROWS_AS(dyn_metric(u[0], u[1], 13), WindowExceeded);
    CHECK_THROWS_AS(u[0].at(-13), WindowExceeded);
}

TEST_CASE("flow points validate and shift") {
    using tree::Letter;
    CHECK_THROWS(TreeFlowPoint::make(2, tree::Word(), {1, -1}, {2, 2}));
    auto v = TreeFlowPoint::make(2, tree::Word(), {1, 2, 2}, {-2, -2, -2});
    CHECK(to_string(v.at(2)) == "ab");
    CHECK(to_string(v.at(-1)) == "B");
    auto w = v.shifted(1);
    CHECK(to_string(w.at(0)) == "a");
    CHECK(w.at(-1).empty());
    CHECK(to_string(w.at(1)) == "ab");
}

TEST_CASE("tree spanning counts match greedy covers in the dynamical metric") {
    for (int n : {2, 3, 4})
        for (double delta : {0.5, 1.0, 2.5}) {
            auto u = tree_universe(2, n, 16);
            auto r = spanning_count(u, n, delta);
            auto [lower, upper] = greedy_counts(u, n, delta);
            CHECK(r.lower == lower);
            CHECK(r.upper == upper);
            CHECK(r.lower <= r.upper);
        }
    auto r = spanning_count(tree_universe(2, 6), 6, 0.5);
    CHECK(r.upper == 4 * 243);
}

TEST_CASE("plane and flat dynamical metrics against direct sampling") {
    plane::UnitVector v{plane::Point{0.1, 1.2}, 0.4}, w{plane::Point{0.15, 1.1}, 0.5};
    double brute = 0.0;
    for (int i = 0; i <= 3000; ++i) {
        double t = 3.0 * i / 3000;
        brute = std::max(brute, plane::distance(plane::geodesic_flow(v, t).base, plane::geodesic_flow(w, t).base));
    }
    CHECK(dyn_metric(v, w, 3.0, 0.001) == doctest::Approx(brute).epsilon(1e-4));
    FlatFlowPoint a{0.1, 0.1, 0.3}, b{0.1, 0.2, 0.3};
    CHECK(dyn_metric(a, b, 50.0) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(torus_distance({0.05, 0.5}, {0.95, 0.5}) == doctest::Approx(0.1));
}

TEST_CASE("topological entropy of the tree flow matches the volume entropy") {
    auto est = estimate_htop(FlowBackend::Tree, 2, {4, 5, 6, 7, 8}, {1.0, 0.5}, std::log(3.0));
    CHECK(est.h == doctest::Approx(std::log(3.0)).epsilon(0.02));
    CHECK(est.stabilized);
    CHECK(*est.gap < 0.05);
    auto flat = estimate_htop(FlowBackend::Flat, 0, {4, 8, 12, 16}, {0.2, 0.1});
    CHECK(flat.h < 0.15);
}

TEST_CASE("expansivity and endpoint fibers") {
    auto v = TreeFlowPoint::make(2, tree::Word(), {1, 1, 1}, {2, 2, 2});
    CHECK(z_set_probe(v, 0.5).classification == ZClass::ExpansiveAtScale);
    auto flat = z_set_probe(FlatFlowPoint{0.2, 0.3, 0.7}, 0.4);
    CHECK(flat.classification == ZClass::NonExpansiveWitness);
    CHECK(!flat.witnesses.empty());
    auto pl = z_set_probe(plane::UnitVector{plane::Point{0, 1}, 1.0}, 0.3, 8.0, 2000, 3);
    CHECK(pl.classification == ZClass::ExpansiveAtScale);
    CHECK(endpoint_fiber_probe(tree::BoundaryPoint::parse("", "a", 2), tree::BoundaryPoint::parse("", "b", 2)).count == 1);
    CHECK(endpoint_fiber_probe(plane::Ext::at(-1), plane::Ext::inf()).count == 1);
    auto f = endpoint_fiber_probe(0.0, plane::kPi, 8);
    CHECK(f.continuum);
    CHECK(f.representatives.size() == 8);
    CHECK(endpoint_fiber_probe(0.0, 1.0).count == 0);
}

}  // TEST_SUITE
