#pragma once

// Euclidean plane with the deck group Z^2 (flat torus of the unit square).
// Zero-curvature control backend: polynomial growth, flat strips, no
// hyperbolicity.

#include <cstdint>
#include <vector>

namespace hyplab::flat {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& p, const Point& q);

// Boundary point of the plane: a direction angle.
struct Direction {
    double angle = 0.0;
};

// Straight line through `origin` with unit direction `angle`.
struct Line {
    Point origin;
    double angle = 0.0;
    Point at(double t) const;
};

// b_p(q, theta) = -<q - p, u_theta>.
double busemann(const Point& q, const Point& p, const Direction& xi);

// Number of lattice vectors v in Z^2 with |base - (base + v)| <= R, i.e. |v| <= R.
std::uint64_t lattice_ball_count(double radius);

// Equilateral triangle of side L: the midpoint of one side sits at distance
// L sqrt(3)/4 from the union of the other two sides.
struct TriangleWitness {
    Point a, b, c;
    double side = 0.0;
    double defect = 0.0;
};
TriangleWitness equilateral_witness(double side);

// Distance from z to the segment [p, q].
double distance_to_segment(const Point& z, const Point& p, const Point& q);

}  // namespace hyplab::flat
