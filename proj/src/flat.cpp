#include "hyplab/flat.hpp"

#include <algorithm>
#include <cmath>

namespace hyplab::flat {

double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

Point Line::at(double t) const { return {origin.x + t * std::cos(angle), origin.y + t * std::sin(angle)}; }

double busemann(const Point& q, const Point& p, const Direction& xi) {
    return -((q.x - p.x) * std::cos(xi.angle) + (q.y - p.y) * std::sin(xi.angle));
}

std::uint64_t lattice_ball_count(double radius) {
    if (radius < 0) return 0;
    auto m = static_cast<std::int64_t>(std::floor(radius));
    double r2 = radius * radius;
    std::uint64_t count = 0;
    for (std::int64_t i = -m; i <= m; ++i) {
        double rest = r2 - static_cast<double>(i * i);
        if (rest < 0) continue;
        auto j = static_cast<std::int64_t>(std::floor(std::sqrt(rest) + 1e-12));
        while (static_cast<double>(j * j) > rest) --j;
        while (static_cast<double>((j + 1) * (j + 1)) <= rest) ++j;
        count += static_cast<std::uint64_t>(2 * j + 1);
    }
    return count;
}

double distance_to_segment(const Point& z, const Point& p, const Point& q) {
    double vx = q.x - p.x, vy = q.y - p.y;
    double len2 = vx * vx + vy * vy;
    if (len2 == 0) return distance(z, p);
    double t = std::clamp(((z.x - p.x) * vx + (z.y - p.y) * vy) / len2, 0.0, 1.0);
    return distance(z, Point{p.x + t * vx, p.y + t * vy});
}

TriangleWitness equilateral_witness(double side) {
    TriangleWitness w;
    w.side = side;
    w.a = {0.0, 0.0};
    w.b = {side, 0.0};
    w.c = {side / 2, side * std::sqrt(3.0) / 2};
    Point mid{side / 2, 0.0};
    w.defect = std::min(distance_to_segment(mid, w.a, w.c), distance_to_segment(mid, w.b, w.c));
    return w;
}

}  // namespace hyplab::flat
