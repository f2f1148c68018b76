#pragma once

// Upper half-plane model of H^2: points, boundary points on R u {inf},
// Moebius isometries and closed-form geodesics.

#include <complex>
#include <optional>
#include <string>

namespace hyplab::plane {

using Complex = std::complex<double>;

inline constexpr double kPointTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
    double x = 0.0;
    double y = 1.0;
    Complex z() const { return {x, y}; }
    static Point from(Complex z) { return {z.real(), z.imag()}; }
};

bool approx_equal(const Point& p, const Point& q, double tol = kPointTol);
double distance(const Point& p, const Point& q);

// A point of R u {inf}.
struct Ext {
    double x = 0.0;
    bool infinite = false;
    static Ext inf() { return {0.0, true}; }
    static Ext at(double v) { return {v, false}; }
    std::string str() const;
};

bool approx_equal(const Ext& a, const Ext& b, double tol = kPointTol);

// Unit tangent vector: base point and Euclidean angle of the tangent direction.
struct UnitVector {
    Point base;
    double angle = kPi / 2;
};

// Determinant-1 real matrix acting by (az+b)/(cz+d), sign-normalized so the
// first nonzero entry is positive.
struct MobiusMatrix {
    double a = 1, b = 0, c = 0, d = 1;

    static MobiusMatrix identity() { return {1, 0, 0, 1}; }
    // Divides by sqrt(det) and fixes the sign; det must be positive.
    static MobiusMatrix normalized(double a, double b, double c, double d);

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    MobiusMatrix inverse() const { return normalized(d, -b, -c, a); }

    Point apply(const Point& p) const;
    Ext apply(const Ext& e) const;
    UnitVector apply(const UnitVector& v) const;
    // Rotation of tangent directions at p.
    double angle_shift(const Point& p) const;

    friend MobiusMatrix operator*(const MobiusMatrix& m, const MobiusMatrix& n);
    std::string str() const;
};

bool approx_equal(const MobiusMatrix& m, const MobiusMatrix& n, double tol);

// Isometry taking i with upward tangent to v.
MobiusMatrix frame(const UnitVector& v);
// Point at time t along the geodesic generated by frame f.
inline Point frame_point(const MobiusMatrix& f, double t) { return f.apply(Point{0.0, std::exp(t)}); }
UnitVector geodesic_flow(const UnitVector& v, double t);
Ext forward_endpoint(const UnitVector& v);
Ext backward_endpoint(const UnitVector& v);

// Tangent direction at p of the geodesic toward q (q != p) or toward a boundary point.
double direction_to(const Point& p, const Point& q);
double direction_to(const Point& p, const Ext& xi);
// Boundary point reached from p leaving at the given tangent angle.
Ext boundary_in_direction(const Point& p, double angle);

// Closed-form geodesics parameterized by arc length through a frame.
struct Geodesic {
    MobiusMatrix frame;
    Point at(double t) const { return frame_point(frame, t); }
};

Geodesic segment_frame(const Point& p, const Point& q);
Geodesic ray_frame(const Point& p, const Ext& xi);
// Line from xi (t -> -inf) to eta (t -> +inf); time 0 is the top of the arc
// for finite endpoints, height 1 for vertical lines. Throws if xi == eta.
Geodesic line_frame(const Ext& xi, const Ext& eta);

// Distance from z to the segment [p, q].
double distance_to_segment(const Point& z, const Point& p, const Point& q);
// Distance from z to the full geodesic through p, q.
double distance_to_line(const Point& z, const Ext& xi, const Ext& eta);

// b_p(q, xi), with b_p(p, xi) = 0: conjugates xi to infinity and uses -log y.
double busemann(const Point& q, const Point& p, const Ext& xi);
// Numerical limit d(q, ray_p(t)) - t; returns the value at the horizon and the
// last increment as a convergence bound.
struct BusemannLimit {
    double value;
    double bound;
    bool converged;
};
BusemannLimit busemann_limit(const Point& q, const Point& p, const Ext& xi, double horizon = 30.0,
                             double tol = 1e-9);

double gromov_beta(const Point& p, const Ext& xi, const Ext& eta, double q_time = 0.0);

// Angle at p between the directions to two boundary points, in [0, pi].
double visual_angle(const Point& p, const Ext& xi, const Ext& eta);

// Wrap angle to [0, 2pi).
double wrap_angle(double a);

}  // namespace hyplab::plane
