#pragma once

// Backend-tagged points, boundary points and geodesics with the shared
// metric operations (distance, geodesics, Busemann functions, Gromov
// products, thin-triangle estimates).

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "hyplab/flat.hpp"
#include "hyplab/plane.hpp"
#include "hyplab/tree.hpp"

namespace hyplab {

enum class Backend { Tree, Plane, Flat };
std::string to_string(Backend b);

class BackendMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SpacePoint {
    Backend backend = Backend::Plane;
    tree::Word word;
    int rank = 2;
    double x = 0.0;
    double y = 1.0;

    static SpacePoint tree(tree::Word w, int rank = 2);
    static SpacePoint plane(double x, double y);
    static SpacePoint flat(double x, double y);

    plane::Point plane_point() const { return {x, y}; }
    flat::Point flat_point() const { return {x, y}; }
    std::string str() const;
};

// Exact for tree points, coordinatewise tolerance for plane and flat points.
bool same_point(const SpacePoint& a, const SpacePoint& b, double eps_pt = plane::kPointTol);

struct BoundaryPoint {
    Backend backend = Backend::Plane;
    tree::BoundaryPoint tree_point;
    int rank = 2;
    plane::Ext ext;
    double angle = 0.0;  // flat direction

    static BoundaryPoint tree(tree::BoundaryPoint xi, int rank = 2);
    static BoundaryPoint plane(plane::Ext e);
    static BoundaryPoint flat(double angle);
    std::string str() const;
};

bool same_boundary(const BoundaryPoint& a, const BoundaryPoint& b, double eps = plane::kPointTol);

enum class PathKind { Segment, Ray, Line };

// Unit-speed geodesic. Segments live on [0, length], rays on [0, inf),
// lines on (-inf, inf). Tree paths are evaluated at integer times only.
struct GeodesicPath {
    PathKind kind = PathKind::Segment;
    Backend backend = Backend::Plane;
    double t_min = 0.0;
    double t_max = 0.0;
    bool degenerate = false;  // zero-length segment

    SpacePoint start, end;
    BoundaryPoint xi, eta;
    plane::Geodesic plane_geodesic;
    flat::Line flat_line;

    SpacePoint point(double t) const;
};

double distance(const SpacePoint& p, const SpacePoint& q);
GeodesicPath connect(const SpacePoint& p, const SpacePoint& q);
GeodesicPath ray(const SpacePoint& p, const BoundaryPoint& xi);
// Flat lines exist only between opposite directions; the returned one passes
// through the origin.
GeodesicPath line(const BoundaryPoint& xi, const BoundaryPoint& eta);

// b_p(q, xi), normalized by b_p(p, xi) = 0.
double busemann(const SpacePoint& q, const SpacePoint& p, const BoundaryPoint& xi);
double gromov_beta(const SpacePoint& p, const BoundaryPoint& xi, const BoundaryPoint& eta, double q_time = 0.0);
// |b_q(z, xi) - b_p(z, xi) + b_p(q, xi)|
double busemann_cocycle_check(const SpacePoint& p, const SpacePoint& q, const SpacePoint& z,
                              const BoundaryPoint& xi);

// max over t in [0, T] of d(c1(t), c2(t)); step applies to plane and flat
// paths, tree paths use every integer time.
double fellow_traveling_deviation(const GeodesicPath& c1, const GeodesicPath& c2, double T, double step = 0.05);

struct HyperbolicityConstant {
    enum class Provenance { Exact, Estimated, UnboundedWitness };
    double delta = 0.0;
    Provenance provenance = Provenance::Exact;
    std::uint64_t samples = 0;
    std::string witness;  // description of the worst triangle found
};
std::string to_string(HyperbolicityConstant::Provenance p);

// Tree: exact 0. Plane: Monte-Carlo maximum of the thin-triangle defect over
// triangles with vertices drawn from the hyperbolic ball of the given radius
// about i. Flat: equilateral witness inscribed in the ball.
HyperbolicityConstant estimate_delta(Backend backend, std::uint64_t sample_count, double radius, std::uint64_t seed,
                                     unsigned workers = 1);

// Thin-triangle defect of one plane triangle: max over each side of the
// distance to the union of the other two sides.
double plane_triangle_defect(const plane::Point& a, const plane::Point& b, const plane::Point& c);

// Random point of the hyperbolic ball of radius r about i with density
// proportional to hyperbolic area; u1, u2 uniform in [0, 1).
plane::Point plane_ball_sample(double radius, double u1, double u2);

}  // namespace hyplab
