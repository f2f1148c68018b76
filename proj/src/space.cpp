#include "hyplab/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "hyplab/parallel.hpp"

namespace hyplab {

std::string to_string(Backend b) {
    switch (b) {
        case Backend::Tree: return "tree";
        case Backend::Plane: return "plane";
        case Backend::Flat: return "flat";
    }
    return "?";
}

std::string to_string(HyperbolicityConstant::Provenance p) {
    switch (p) {
        case HyperbolicityConstant::Provenance::Exact: return "exact";
        case HyperbolicityConstant::Provenance::Estimated: return "estimated";
        case HyperbolicityConstant::Provenance::UnboundedWitness: return "unbounded-witness";
    }
    return "?";
}

SpacePoint SpacePoint::tree(tree::Word w, int rank) {
    SpacePoint p;
    p.backend = Backend::Tree;
    p.word = std::move(w);
    p.rank = rank;
    return p;
}

SpacePoint SpacePoint::plane(double x, double y) {
    if (!(y > 0)) throw std::invalid_argument("plane point needs y > 0");
    SpacePoint p;
    p.backend = Backend::Plane;
    p.x = x;
    p.y = y;
    return p;
}

SpacePoint SpacePoint::flat(double x, double y) {
    SpacePoint p;
    p.backend = Backend::Flat;
    p.x = x;
    p.y = y;
    return p;
}

std::string SpacePoint::str() const {
    if (backend == Backend::Tree) return tree::to_string(word);
    char buf[80];
    std::snprintf(buf, sizeof buf, "(%.12g,%.12g)", x, y);
    return buf;
}

bool same_point(const SpacePoint& a, const SpacePoint& b, double eps_pt) {
    if (a.backend != b.backend) throw BackendMismatch("points from different backends");
    if (a.backend == Backend::Tree) return a.word == b.word;
    return std::abs(a.x - b.x) <= eps_pt && std::abs(a.y - b.y) <= eps_pt;
}

BoundaryPoint BoundaryPoint::tree(tree::BoundaryPoint xi, int rank) {
    BoundaryPoint b;
    b.backend = Backend::Tree;
    b.tree_point = std::move(xi);
    b.rank = rank;
    return b;
}

BoundaryPoint BoundaryPoint::plane(plane::Ext e) {
    BoundaryPoint b;
    b.backend = Backend::Plane;
    b.ext = e;
    return b;
}

BoundaryPoint BoundaryPoint::flat(double angle) {
    BoundaryPoint b;
    b.backend = Backend::Flat;
    b.angle = plane::wrap_angle(angle);
    return b;
}

std::string BoundaryPoint::str() const {
    switch (backend) {
        case Backend::Tree: return tree_point.str();
        case Backend::Plane: return ext.str();
        case Backend::Flat: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "angle %.12g", angle);
            return buf;
        }
    }
    return "?";
}

bool same_boundary(const BoundaryPoint& a, const BoundaryPoint& b, double eps) {
    if (a.backend != b.backend) throw BackendMismatch("boundary points from different backends");
    switch (a.backend) {
        case Backend::Tree: return a.tree_point == b.tree_point;
        case Backend::Plane: return plane::approx_equal(a.ext, b.ext, eps);
        case Backend::Flat: {
            double d = std::abs(a.angle - b.angle);
            return std::min(d, 2 * plane::kPi - d) <= eps;
        }
    }
    return false;
}

namespace {

void require_same(const SpacePoint& a, const SpacePoint& b) {
    if (a.backend != b.backend) throw BackendMismatch("points from different backends");
    if (a.backend == Backend::Tree && a.rank != b.rank) throw BackendMismatch("tree points of different rank");
}

void require_same(const SpacePoint& a, const BoundaryPoint& xi) {
    if (a.backend != xi.backend) throw BackendMismatch("point and boundary point from different backends");
    if (a.backend == Backend::Tree && a.rank != xi.rank) throw BackendMismatch("tree data of different rank");
}

long integer_time(double t) {
    double r = std::round(t);
    if (std::abs(r - t) > 1e-9) throw DomainError("tree geodesics are evaluated at integer times");
    return static_cast<long>(r);
}

}  // namespace

SpacePoint GeodesicPath::point(double t) const {
    if (t < t_min - 1e-9 || t > t_max + 1e-9) throw DomainError("time outside the geodesic's domain");
    switch (backend) {
        case Backend::Tree: {
            long n = integer_time(t);
            tree::Word w;
            if (kind == PathKind::Segment) w = tree::segment_point(start.word, end.word, n);
            else if (kind == PathKind::Ray) w = tree::ray_point(start.word, xi.tree_point, n);
            else w = tree::line_point(xi.tree_point, eta.tree_point, n);
            return SpacePoint::tree(std::move(w), start.rank);
        }
        case Backend::Plane: {
            if (degenerate) return start;
            plane::Point p = plane_geodesic.at(t);
            return SpacePoint::plane(p.x, p.y);
        }
        case Backend::Flat: {
            flat::Point p = flat_line.at(t);
            return SpacePoint::flat(p.x, p.y);
        }
    }
    return start;
}

double distance(const SpacePoint& p, const SpacePoint& q) {
    require_same(p, q);
    switch (p.backend) {
        case Backend::Tree: return tree::distance(p.word, q.word);
        case Backend::Plane: return plane::distance(p.plane_point(), q.plane_point());
        case Backend::Flat: return flat::distance(p.flat_point(), q.flat_point());
    }
    return 0.0;
}

GeodesicPath connect(const SpacePoint& p, const SpacePoint& q) {
    require_same(p, q);
    GeodesicPath g;
    g.kind = PathKind::Segment;
    g.backend = p.backend;
    g.start = p;
    g.end = q;
    g.t_max = distance(p, q);
    g.degenerate = same_point(p, q);
    if (g.degenerate) g.t_max = 0.0;
    if (p.backend == Backend::Plane && !g.degenerate) g.plane_geodesic = plane::segment_frame(p.plane_point(), q.plane_point());
    if (p.backend == Backend::Flat)
        g.flat_line = {p.flat_point(), g.degenerate ? 0.0 : std::atan2(q.y - p.y, q.x - p.x)};
    return g;
}

GeodesicPath ray(const SpacePoint& p, const BoundaryPoint& xi) {
    require_same(p, xi);
    GeodesicPath g;
    g.kind = PathKind::Ray;
    g.backend = p.backend;
    g.start = p;
    g.xi = xi;
    g.t_max = std::numeric_limits<double>::infinity();
    if (p.backend == Backend::Plane) g.plane_geodesic = plane::ray_frame(p.plane_point(), xi.ext);
    if (p.backend == Backend::Flat) g.flat_line = {p.flat_point(), xi.angle};
    return g;
}

GeodesicPath line(const BoundaryPoint& xi, const BoundaryPoint& eta) {
    if (xi.backend != eta.backend) throw BackendMismatch("boundary points from different backends");
    if (same_boundary(xi, eta)) throw std::invalid_argument("line endpoints coincide");
    GeodesicPath g;
    g.kind = PathKind::Line;
    g.backend = xi.backend;
    g.xi = xi;
    g.eta = eta;
    g.t_min = -std::numeric_limits<double>::infinity();
    g.t_max = std::numeric_limits<double>::infinity();
    switch (xi.backend) {
        case Backend::Tree:
            g.start = SpacePoint::tree(tree::line_point(xi.tree_point, eta.tree_point, 0), xi.rank);
            break;
        case Backend::Plane:
            g.plane_geodesic = plane::line_frame(xi.ext, eta.ext);
            g.start = SpacePoint::plane(g.plane_geodesic.at(0).x, g.plane_geodesic.at(0).y);
            break;
        case Backend::Flat: {
            double d = std::abs(plane::wrap_angle(eta.angle - xi.angle) - plane::kPi);
            if (d > 1e-9) throw std::invalid_argument("flat lines join opposite directions only");
            g.flat_line = {flat::Point{0.0, 0.0}, eta.angle};
            g.start = SpacePoint::flat(0.0, 0.0);
            break;
        }
    }
    return g;
}

double busemann(const SpacePoint& q, const SpacePoint& p, const BoundaryPoint& xi) {
    require_same(q, p);
    require_same(p, xi);
    switch (p.backend) {
        case Backend::Tree: return static_cast<double>(tree::busemann(q.word, p.word, xi.tree_point));
        case Backend::Plane: return plane::busemann(q.plane_point(), p.plane_point(), xi.ext);
        case Backend::Flat: return flat::busemann(q.flat_point(), p.flat_point(), flat::Direction{xi.angle});
    }
    return 0.0;
}

double gromov_beta(const SpacePoint& p, const BoundaryPoint& xi, const BoundaryPoint& eta, double q_time) {
    require_same(p, xi);
    if (xi.backend != eta.backend) throw BackendMismatch("boundary points from different backends");
    if (same_boundary(xi, eta)) throw std::invalid_argument("Gromov product needs distinct boundary points");
    switch (p.backend) {
        case Backend::Tree:
            return static_cast<double>(
                tree::gromov_beta(p.word, xi.tree_point, eta.tree_point, integer_time(q_time)));
        case Backend::Plane: return plane::gromov_beta(p.plane_point(), xi.ext, eta.ext, q_time);
        case Backend::Flat: {
            SpacePoint q = line(xi, eta).point(q_time);
            return -(busemann(q, p, xi) + busemann(q, p, eta));
        }
    }
    return 0.0;
}

double busemann_cocycle_check(const SpacePoint& p, const SpacePoint& q, const SpacePoint& z,
                              const BoundaryPoint& xi) {
    return std::abs(busemann(z, q, xi) - busemann(z, p, xi) + busemann(q, p, xi));
}

double fellow_traveling_deviation(const GeodesicPath& c1, const GeodesicPath& c2, double T, double step) {
    if (c1.backend != c2.backend) throw BackendMismatch("paths from different backends");
    if (T < 0 || c1.t_min > 1e-9 || c2.t_min > 1e-9 || T > c1.t_max + 1e-9 || T > c2.t_max + 1e-9)
        throw DomainError("paths are not both defined on [0, T]");
    double worst = 0.0;
    if (c1.backend == Backend::Tree) {
        long n = static_cast<long>(std::floor(T + 1e-9));
        for (long t = 0; t <= n; ++t)
            worst = std::max(worst, distance(c1.point(static_cast<double>(t)), c2.point(static_cast<double>(t))));
        return worst;
    }
    if (!(step > 0)) throw std::invalid_argument("sampling step must be positive");
    auto steps = static_cast<long>(std::ceil(T / step - 1e-12));
    for (long i = 0; i <= steps; ++i) {
        double t = std::min(T, static_cast<double>(i) * step);
        worst = std::max(worst, distance(c1.point(t), c2.point(t)));
    }
    return worst;
}

namespace {

// The defect is computed from the three side lengths by hyperbolic
// trigonometry; side lengths come from the cancellation-free distance
// formula, so triangles far from i keep full precision.
double angle_at(double adj1, double adj2, double opp) {
    double num = std::sinh(0.5 * (opp - adj1 + adj2)) * std::sinh(0.5 * (opp + adj1 - adj2));
    double s2 = num / (std::sinh(adj1) * std::sinh(adj2));
    return 2.0 * std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0)));
}

// Distance from the point at distance t from A along side AB to the segment
// [A, C] of length len, where alpha is the angle at A.
double to_segment(double t, double alpha, double len) {
    double ca = std::cos(alpha);
    if (ca <= 0.0) return t;
    // The foot of the perpendicular sits at s with tanh s = tanh t cos alpha;
    // compare 1 - tanh s with 1 - tanh len in a form that survives t, len >> 1.
    double sa = std::sin(0.5 * alpha);
    double gap_foot = 2.0 / (std::exp(2.0 * t) + 1.0) + std::tanh(t) * 2.0 * sa * sa;
    double gap_end = 2.0 / (std::exp(2.0 * len) + 1.0);
    if (gap_foot >= gap_end) return std::asinh(std::sinh(t) * std::sin(alpha));
    double h = std::sinh(0.5 * (t - len));
    double q = h * h + std::sinh(t) * std::sinh(len) * sa * sa;
    return 2.0 * std::asinh(std::sqrt(q));
}

// max over the side AB (length c) of the distance to the other two sides;
// b = |AC|, a = |BC|, alpha and beta the angles at A and B.
double side_defect(double c, double b, double a, double alpha, double beta) {
    if (c == 0.0) return 0.0;
    auto f = [&](double t) { return std::min(to_segment(t, alpha, b), to_segment(c - t, beta, a)); };
    const int grid = 32;
    int best = 0;
    double best_val = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double v = f(c * i / grid);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    // Golden-section refinement around the best grid point.
    double lo = c * std::max(0, best - 1) / grid, hi = c * std::min(grid, best + 1) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::max({best_val, f1, f2});
}

}  // namespace

double plane_triangle_defect(const plane::Point& A, const plane::Point& B, const plane::Point& C) {
    double c = plane::distance(A, B), a = plane::distance(B, C), b = plane::distance(C, A);
    if (a == 0.0 || b == 0.0 || c == 0.0) return 0.0;
    double alpha = angle_at(b, c, a), beta = angle_at(a, c, b), gamma = angle_at(a, b, c);
    return std::max({side_defect(c, b, a, alpha, beta), side_defect(a, c, b, beta, gamma),
                     side_defect(b, a, c, gamma, alpha)});
}

plane::Point plane_ball_sample(double radius, double u1, double u2) {
    // Area of the ball of radius r is proportional to cosh r - 1.
    double r = std::acosh(1.0 + u1 * (std::cosh(radius) - 1.0));
    return plane::geodesic_flow(plane::UnitVector{plane::Point{0.0, 1.0}, 2 * plane::kPi * u2}, r).base;
}

HyperbolicityConstant estimate_delta(Backend backend, std::uint64_t sample_count, double radius, std::uint64_t seed,
                                     unsigned workers) {
    HyperbolicityConstant out;
    if (backend == Backend::Tree) return out;
    if (!(radius > 0)) throw std::invalid_argument("estimate_delta radius must be positive");
    if (backend == Backend::Flat) {
        flat::TriangleWitness w = flat::equilateral_witness(radius * std::sqrt(3.0));
        out.delta = w.defect;
        out.provenance = HyperbolicityConstant::Provenance::UnboundedWitness;
        out.samples = 1;
        char buf[160];
        std::snprintf(buf, sizeof buf, "equilateral side %.12g defect %.12g (grows linearly with the side)", w.side,
                      w.defect);
        out.witness = buf;
        return out;
    }
    struct Best {
        double defect = 0.0;
        plane::Point a, b, c;
    };
    const std::size_t chunks = 64;
    auto parts = parallel_chunks(chunks, workers, [&](std::size_t chunk) {
        std::uint64_t lo = sample_count * chunk / chunks, hi = sample_count * (chunk + 1) / chunks;
        std::mt19937_64 rng(chunk_seed(seed, chunk));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Best best;
        for (std::uint64_t i = lo; i < hi; ++i) {
            plane::Point v[3];
            for (auto& p : v) {
                double u1 = u(rng), u2 = u(rng);
                p = plane_ball_sample(radius, u1, u2);
            }
            double d = plane_triangle_defect(v[0], v[1], v[2]);
            if (d > best.defect) best = {d, v[0], v[1], v[2]};
        }
        return best;
    });
    Best best;
    for (const auto& b : parts)
        if (b.defect > best.defect) best = b;
    out.delta = best.defect;
    out.provenance = HyperbolicityConstant::Provenance::Estimated;
    out.samples = sample_count;
    char buf[256];
    std::snprintf(buf, sizeof buf, "triangle (%.12g,%.12g) (%.12g,%.12g) (%.12g,%.12g)", best.a.x, best.a.y, best.b.x,
                  best.b.y, best.c.x, best.c.y);
    out.witness = buf;
    return out;
}

}  // namespace hyplab
