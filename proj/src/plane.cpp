#include "hyplab/plane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hyplab::plane {

bool approx_equal(const Point& p, const Point& q, double tol) {
    return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
}

double distance(const Point& p, const Point& q) {
    double dx = p.x - q.x, dy = p.y - q.y;
    double num = dx * dx + dy * dy;
    // 2 asinh(|p-q| / (2 sqrt(y_p y_q))) is the cancellation-free form of arccosh(1 + |p-q|^2/(2 y_p y_q)).
    return 2.0 * std::asinh(std::sqrt(num) / (2.0 * std::sqrt(p.y * q.y)));
}

std::string Ext::str() const {
    if (infinite) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

bool approx_equal(const Ext& a, const Ext& b, double tol) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return std::abs(a.x - b.x) <= tol;
}

MobiusMatrix MobiusMatrix::normalized(double a, double b, double c, double d) {
    double det = a * d - b * c;
    if (!(det > 0)) throw std::invalid_argument("Moebius matrix must have positive determinant");
    double s = 1.0 / std::sqrt(det);
    MobiusMatrix m{a * s, b * s, c * s, d * s};
    double first = m.a != 0 ? m.a : (m.b != 0 ? m.b : (m.c != 0 ? m.c : m.d));
    if (first < 0) m = {-m.a, -m.b, -m.c, -m.d};
    return m;
}

Point MobiusMatrix::apply(const Point& p) const {
    Complex z = p.z();
    Complex w = (a * z + b) / (c * z + d);
    // Im w = y / |cz+d|^2 for det 1; use that form to keep y strictly positive.
    double den = std::norm(c * z + d);
    return {w.real(), p.y * det() / den};
}

Ext MobiusMatrix::apply(const Ext& e) const {
    if (e.infinite) {
        if (c == 0) return Ext::inf();
        return Ext::at(a / c);
    }
    double den = c * e.x + d;
    if (den == 0) return Ext::inf();
    return Ext::at((a * e.x + b) / den);
}

double MobiusMatrix::angle_shift(const Point& p) const {
    return -2.0 * std::arg(c * p.z() + d);
}

UnitVector MobiusMatrix::apply(const UnitVector& v) const {
    return {apply(v.base), wrap_angle(v.angle + angle_shift(v.base))};
}

MobiusMatrix operator*(const MobiusMatrix& m, const MobiusMatrix& n) {
    return MobiusMatrix::normalized(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
                                    m.c * n.b + m.d * n.d);
}

std::string MobiusMatrix::str() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "[[%.12g,%.12g],[%.12g,%.12g]]", a, b, c, d);
    return buf;
}

bool approx_equal(const MobiusMatrix& m, const MobiusMatrix& n, double tol) {
    auto close = [&](double s) {
        return std::abs(m.a - s * n.a) <= tol && std::abs(m.b - s * n.b) <= tol &&
               std::abs(m.c - s * n.c) <= tol && std::abs(m.d - s * n.d) <= tol;
    };
    return close(1.0) || close(-1.0);
}

double wrap_angle(double a) {
    double r = std::fmod(a, 2 * kPi);
    if (r < 0) r += 2 * kPi;
    if (r >= 2 * kPi) r = 0;
    return r;
}

MobiusMatrix frame(const UnitVector& v) {
    // Affine part sends i to the base point; the rotation about i turns the
    // upward direction by -2 phi.
    double sy = std::sqrt(v.base.y);
    MobiusMatrix affine{sy, v.base.x / sy, 0.0, 1.0 / sy};
    double phi = 0.5 * (kPi / 2 - v.angle);
    MobiusMatrix rot{std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
    return affine * rot;
}

UnitVector geodesic_flow(const UnitVector& v, double t) {
    MobiusMatrix f = frame(v);
    return f.apply(UnitVector{Point{0.0, std::exp(t)}, kPi / 2});
}

Ext forward_endpoint(const UnitVector& v) { return frame(v).apply(Ext::inf()); }
Ext backward_endpoint(const UnitVector& v) { return frame(v).apply(Ext::at(0.0)); }

namespace {

// Cayley transform sends i to 0; the direction at i toward w is arg C(w) + pi/2.
double direction_at_i(Complex w) {
    Complex cz = (w - Complex(0, 1)) / (w + Complex(0, 1));
    return wrap_angle(std::arg(cz) + kPi / 2);
}

}  // namespace

double direction_to(const Point& p, const Point& q) {
    if (approx_equal(p, q, 0.0)) throw std::invalid_argument("direction to coincident point");
    // Affine normalization p -> i preserves angles.
    Complex w((q.x - p.x) / p.y, q.y / p.y);
    return direction_at_i(w);
}

double direction_to(const Point& p, const Ext& xi) {
    if (xi.infinite) return kPi / 2;
    return direction_at_i(Complex((xi.x - p.x) / p.y, 0.0));
}

Ext boundary_in_direction(const Point& p, double angle) { return forward_endpoint(UnitVector{p, angle}); }

Geodesic segment_frame(const Point& p, const Point& q) { return {frame(UnitVector{p, direction_to(p, q)})}; }

Geodesic ray_frame(const Point& p, const Ext& xi) { return {frame(UnitVector{p, direction_to(p, xi)})}; }

Geodesic line_frame(const Ext& xi, const Ext& eta) {
    if (approx_equal(xi, eta, 0.0)) throw std::invalid_argument("line endpoints coincide");
    if (eta.infinite) return {frame(UnitVector{Point{xi.x, 1.0}, kPi / 2})};
    if (xi.infinite) return {frame(UnitVector{Point{eta.x, 1.0}, 3 * kPi / 2})};
    Point top{0.5 * (xi.x + eta.x), 0.5 * std::abs(eta.x - xi.x)};
    return {frame(UnitVector{top, eta.x > xi.x ? 0.0 : kPi})};
}

double distance_to_line(const Point& z, const Ext& xi, const Ext& eta) {
    Geodesic g = line_frame(xi, eta);
    Point w = g.frame.inverse().apply(z);
    return std::asinh(std::abs(w.x) / w.y);
}

double distance_to_segment(const Point& z, const Point& p, const Point& q) {
    if (approx_equal(p, q, 0.0)) return distance(z, p);
    Geodesic g = segment_frame(p, q);
    MobiusMatrix inv = g.frame.inverse();
    Point w = inv.apply(z);
    double len = distance(p, q);
    // The segment is {i e^t : 0 <= t <= len}; the foot of z on the axis has height |w|.
    double foot = std::log(std::abs(w.z()));
    if (foot >= 0.0 && foot <= len) return std::asinh(std::abs(w.x) / w.y);
    return std::min(distance(z, p), distance(z, q));
}

double busemann(const Point& q, const Point& p, const Ext& xi) {
    if (xi.infinite) return std::log(p.y) - std::log(q.y);
    // z -> -1/(z - xi) sends xi to infinity.
    MobiusMatrix m{0.0, -1.0, 1.0, -xi.x};
    return std::log(m.apply(p).y) - std::log(m.apply(q).y);
}

BusemannLimit busemann_limit(const Point& q, const Point& p, const Ext& xi, double horizon, double tol) {
    Geodesic ray = ray_frame(p, xi);
    double prev = distance(q, ray.at(1.0)) - 1.0;
    double delta = 0.0;
    for (double t = 2.0; t <= horizon; t += 1.0) {
        double cur = distance(q, ray.at(t)) - t;
        delta = std::abs(cur - prev);
        prev = cur;
        if (delta < tol) return {cur, delta, true};
    }
    return {prev, delta, delta < tol};
}

double gromov_beta(const Point& p, const Ext& xi, const Ext& eta, double q_time) {
    Point q = line_frame(xi, eta).at(q_time);
    return -(busemann(q, p, xi) + busemann(q, p, eta));
}

double visual_angle(const Point& p, const Ext& xi, const Ext& eta) {
    double d = std::abs(wrap_angle(direction_to(p, xi)) - wrap_angle(direction_to(p, eta)));
    return d > kPi ? 2 * kPi - d : d;
}

}  // namespace hyplab::plane
