#pragma once

// Dynamical metrics d_k of the geodesic flow, spanning / separated counts,
// topological-entropy slopes and expansivity probes on the three backends.

#include <optional>
#include <string>
#include <vector>

#include "hyplab/plane.hpp"
#include "hyplab/space.hpp"
#include "hyplab/tree.hpp"

namespace hyplab::entropy {

class WindowExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Bi-infinite tree geodesic with c(0) = base, c(t) = base f_1..f_t and
// c(-t) = base b_1..b_t inside a window of the stored lengths.
struct TreeFlowPoint {
    int rank = 2;
    tree::Word base;
    std::vector<tree::Letter> forward, backward;

    // Validates that both windows are reduced and that f_1 != b_1.
    static TreeFlowPoint make(int rank, tree::Word base, std::vector<tree::Letter> forward,
                              std::vector<tree::Letter> backward);
    long window() const;  // usable |t|
    tree::Word at(long t) const;
    TreeFlowPoint shifted(long t) const;  // phi_t, window shrinks by |t|
};

// Unit-speed line on the unit torus R^2 / Z^2.
struct FlatFlowPoint {
    double x = 0.0, y = 0.0, angle = 0.0;
    flat::Point at(double t) const;
};

double torus_distance(const flat::Point& a, const flat::Point& b);

// d_k(v, w) = max over t in [0, k] of d(c_v(t), c_w(t)); integer times on the
// tree, sampled with the given step elsewhere (plus the endpoint t = k).
long dyn_metric(const TreeFlowPoint& v, const TreeFlowPoint& w, long k);
double dyn_metric(const FlatFlowPoint& v, const FlatFlowPoint& w, double k, double step = 0.01);
double dyn_metric(const plane::UnitVector& v, const plane::UnitVector& w, double k, double step = 0.01);

struct SpanningReport {
    int n = 0;
    double delta = 0.0;
    std::size_t lower = 0;  // maximal (n, 2 delta)-separated subset
    std::size_t upper = 0;  // greedy cover by closed d_n-balls of radius delta
    std::string method = "greedy-cover/separated-lower";
    std::string universe;
};

// Forward words of length n at base e, continued by repeating the last
// letter out to the window; backward windows are a fixed letter.
std::vector<TreeFlowPoint> tree_universe(int rank, int n, int window = 32);
// grid x grid base points times `directions` equally spaced angles.
std::vector<FlatFlowPoint> flat_universe(int grid, int directions);

SpanningReport spanning_count(const std::vector<TreeFlowPoint>& universe, int n, double delta);
SpanningReport spanning_count(const std::vector<FlatFlowPoint>& universe, int n, double delta);

enum class FlowBackend { Tree, Flat };

struct SlopeFit {
    double delta = 0.0;
    double slope = 0.0;
    std::vector<SpanningReport> reports;
};

struct HtopEstimate {
    double h = 0.0;         // slope at the smallest delta
    bool stabilized = true; // slopes at the two smallest deltas agree within 10%
    std::vector<SlopeFit> fits;
    std::optional<double> volume_entropy;
    std::optional<double> gap;  // |h - volume entropy|
};

// Least-squares slope of log r_n (upper counts) against n for each delta.
HtopEstimate estimate_htop(FlowBackend backend, int rank, const std::vector<int>& n_grid,
                           const std::vector<double>& delta_grid, std::optional<double> volume_entropy = std::nullopt);

enum class ZClass { ExpansiveAtScale, NonExpansiveWitness, Unknown };
std::string to_string(ZClass z);

struct ZSetReport {
    ZClass classification = ZClass::Unknown;
    bool certified = false;
    std::string certificate;
    std::size_t samples = 0;
    double closest = 0.0;  // smallest d_horizon found among non-shift candidates
    std::vector<std::string> witnesses;
};

ZSetReport z_set_probe(const TreeFlowPoint& v, double rho);
ZSetReport z_set_probe(const FlatFlowPoint& v, double rho, double horizon = 20.0);
// Sampled search over perturbations of v within rho, seed-deterministic.
ZSetReport z_set_probe(const plane::UnitVector& v, double rho, double horizon, std::size_t budget, std::uint64_t seed);

struct FiberReport {
    std::size_t count = 0;
    bool continuum = false;
    std::string certificate;
    std::vector<std::string> representatives;
};

FiberReport endpoint_fiber_probe(const tree::BoundaryPoint& xi, const tree::BoundaryPoint& eta);
FiberReport endpoint_fiber_probe(const plane::Ext& xi, const plane::Ext& eta);
// Flat endpoints are directions; connecting lines exist only for opposite ones.
FiberReport endpoint_fiber_probe(double xi_angle, double eta_angle, std::size_t budget = 8);

}  // namespace hyplab::entropy
