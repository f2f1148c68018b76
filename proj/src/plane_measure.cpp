#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hyplab/patterson_sullivan.hpp"

namespace hyplab::ps::plane_ps {

using plane::Ext;
using plane::kPi;
using plane::Point;

double ArcPartition::width() const { return 2 * kPi / arcs; }

int ArcPartition::cell_of_angle(double angle) const {
    int c = static_cast<int>(std::floor(plane::wrap_angle(angle) / width()));
    return std::clamp(c, 0, arcs - 1);
}

int ArcPartition::cell_of(const Ext& xi) const { return cell_of_angle(plane::direction_to(center, xi)); }

double ArcPartition::mid_angle(int cell) const { return (cell + 0.5) * width(); }

Ext ArcPartition::representative(int cell) const { return plane::boundary_in_direction(center, mid_angle(cell)); }

Orbit modular_orbit(const Point& x, double cap) {
    Orbit o;
    o.x = x;
    o.cap = cap;
    for (const auto& g : fuchsian::modular_ball(x, cap)) o.points.push_back(g.to_float().apply(x));
    return o;
}

namespace {

// Largest count(d(x, gamma x) <= r) e^{-h r} over the upper half of the orbit radius.
double growth_constant(const Orbit& orbit, double h) {
    std::vector<double> d;
    d.reserve(orbit.points.size());
    for (const Point& y : orbit.points) d.push_back(plane::distance(orbit.x, y));
    std::sort(d.begin(), d.end());
    double c2 = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] >= 0.5 * orbit.cap) c2 = std::max(c2, static_cast<double>(i + 1) * std::exp(-h * d[i]));
    return c2 > 0 ? c2 : 1.0;
}

double complete_radius(const Orbit& orbit, const Point& p) {
    double r = orbit.cap - plane::distance(p, orbit.x);
    if (!(r > 0)) throw std::invalid_argument("viewpoint too far from the orbit center for the cap");
    return r;
}

// Atoms closer than this fraction of the radius carry finite mass, which the
// diverging total makes negligible as s -> h; at a fixed cap they only add
// lumpy noise, so the limit estimators drop them.
constexpr double kInnerFraction = 0.5;

void check_s(double s, double h) {
    if (!(s > h))
        throw DivergenceError("Poincare series diverges for s <= h (s = " + std::to_string(s) +
                              ", h = " + std::to_string(h) + ")");
}

}  // namespace

SeriesValue poincare_series(const Orbit& orbit, const Point& p, double s, double h) {
    check_s(s, h);
    SeriesValue v;
    v.s = s;
    v.h = h;
    v.cap = complete_radius(orbit, p);
    for (const Point& y : orbit.points) {
        double d = plane::distance(p, y);
        if (d <= v.cap) v.partial += std::exp(-s * d);
    }
    // N_p(r) <= N_x(r + d(p, x)) <= C2 e^{h d(p, x)} e^{h r}; integrate the tail by parts.
    v.growth_constant = growth_constant(orbit, h) * std::exp(h * plane::distance(p, orbit.x));
    v.tail = s * v.growth_constant * std::exp(-(s - h) * v.cap) / (s - h);
    return v;
}

AtomicMeasure ps_measure(const Orbit& orbit, const Point& p, double s, double h) {
    SeriesValue pp = poincare_series(orbit, p, s, h);
    SeriesValue xx = poincare_series(orbit, orbit.x, s, h);
    AtomicMeasure m;
    m.s = s;
    m.cap = pp.cap;
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.12g,%.12g)", p.x, p.y);
    m.p = buf;
    std::snprintf(buf, sizeof buf, "(%.12g,%.12g)", orbit.x.x, orbit.x.y);
    m.x = buf;
    for (const Point& y : orbit.points) {
        double d = plane::distance(p, y);
        if (d > pp.cap) continue;
        std::snprintf(buf, sizeof buf, "(%.12g,%.12g)", y.x, y.y);
        double w = std::exp(-s * d) / xx.partial;
        m.atoms.push_back({buf, w});
        m.total += w;
    }
    // Both the numerator and the normalizer are truncated.
    m.tail = pp.tail / xx.partial + m.total * xx.tail / xx.partial;
    double dpx = plane::distance(p, orbit.x);
    m.lower_bound = std::exp(-s * dpx);
    m.upper_bound = std::exp(s * dpx);
    return m;
}

std::vector<double> cell_sums(const Orbit& orbit, const Point& view, const ArcPartition& part, double s,
                              double radius, double inner) {
    double cap = complete_radius(orbit, part.center);
    if (radius > 0) {
        if (radius > cap) throw std::invalid_argument("radius exceeds the certified orbit range");
        cap = radius;
    }
    std::vector<double> sums(part.arcs, 0.0);
    for (const Point& y : orbit.points) {
        double r = plane::distance(part.center, y);
        if (r > cap || r <= inner || r == 0.0) continue;
        sums[part.cell_of_angle(plane::direction_to(part.center, y))] += std::exp(-s * plane::distance(view, y));
    }
    return sums;
}

ConformalReport conformal_check(const Orbit& orbit, const Point& p, const Point& q, const ArcPartition& part,
                                const std::vector<double>& s_grid, double h) {
    if (s_grid.empty()) throw std::invalid_argument("conformal check needs an s grid");
    // Both measures run over the same atoms, so truncation cancels in the ratio.
    if (!plane::approx_equal(p, part.center, 0.0)) throw std::invalid_argument("partition must be centered at p");
    double radius = complete_radius(orbit, p);
    double inner = kInnerFraction * radius;
    std::vector<std::vector<double>> sp, sq;
    std::vector<double> u;
    for (double s : s_grid) {
        check_s(s, h);
        u.push_back(s - h);
        sp.push_back(cell_sums(orbit, p, part, s, radius, inner));
        sq.push_back(cell_sums(orbit, q, part, s, radius, inner));
    }
    ConformalReport r;
    double total = 0.0;
    for (int c = 0; c < part.arcs; ++c) {
        ++r.cells;
        std::vector<double> logs;
        bool empty = false;
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            if (!(sp[i][c] > 0) || !(sq[i][c] > 0)) {
                empty = true;
                break;
            }
            logs.push_back(std::log(sq[i][c] / sp[i][c]));
        }
        if (empty) {
            ++r.excluded;
            continue;
        }
        double lim = extrapolate_to_zero(u, logs).value;
        double b = plane::busemann(q, p, part.representative(c));
        double defect = std::abs(lim + h * b);
        r.max_defect = std::max(r.max_defect, defect);
        total += defect;
    }
    std::size_t used = r.cells - r.excluded;
    r.mean_defect = used ? total / static_cast<double>(used) : 0.0;
    return r;
}

std::vector<double> limit_cell_masses(const Orbit& orbit, const ArcPartition& part, const std::vector<double>& s_grid,
                                      double h) {
    std::vector<std::vector<double>> frac;
    std::vector<double> u;
    for (double s : s_grid) {
        check_s(s, h);
        u.push_back(s - h);
        double radius = complete_radius(orbit, part.center);
        auto sums = cell_sums(orbit, part.center, part, s, radius, kInnerFraction * radius);
        double t = 0.0;
        for (double v : sums) t += v;
        for (double& v : sums) v /= t;
        frac.push_back(std::move(sums));
    }
    std::vector<double> out(part.arcs);
    double t = 0.0;
    for (int c = 0; c < part.arcs; ++c) {
        std::vector<double> v;
        for (const auto& f : frac) v.push_back(f[c]);
        out[c] = std::max(0.0, extrapolate_to_zero(u, v).value);
        t += out[c];
    }
    for (double& v : out) v /= t;
    return out;
}

ShadowArc shadow(const Point& from, const Point& center, double rho) {
    double D = plane::distance(from, center);
    if (!(D > rho)) throw std::invalid_argument("viewpoint lies inside the ball");
    ShadowArc a;
    a.center_angle = plane::direction_to(from, center);
    a.half_angle = std::asin(std::sinh(rho) / std::sinh(D));
    a.left = plane::boundary_in_direction(from, a.center_angle + a.half_angle);
    a.right = plane::boundary_in_direction(from, a.center_angle - a.half_angle);
    return a;
}

double shadow_half_angle_bisection(const Point& from, const Point& center, double rho) {
    double D = plane::distance(from, center);
    if (!(D > rho)) throw std::invalid_argument("viewpoint lies inside the ball");
    double base = plane::direction_to(from, center);
    auto meets = [&](double theta) {
        plane::UnitVector v{from, plane::wrap_angle(base + theta)};
        return plane::distance_to_line(center, plane::backward_endpoint(v), plane::forward_endpoint(v)) < rho;
    };
    double lo = 0.0, hi = kPi / 2;
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        (meets(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ShadowMass shadow_mass(const ArcPartition& part, const std::vector<double>& masses, const Point& x, double rho,
                       double h) {
    if (static_cast<int>(masses.size()) != part.arcs) throw std::invalid_argument("masses do not match the partition");
    ShadowArc arc = shadow(part.center, x, rho);
    double w = part.width();
    double lo = plane::wrap_angle(arc.center_angle - arc.half_angle);
    double len = 2 * arc.half_angle;
    ShadowMass out;
    out.resolved = len > w;
    // Overlap of [lo, lo + len] (mod 2 pi) with each cell, masses spread uniformly in angle.
    for (int c = 0; c < part.arcs; ++c) {
        double a = c * w, b = a + w;
        double overlap = 0.0;
        for (double shift : {-2 * kPi, 0.0, 2 * kPi}) {
            double s0 = lo + shift, s1 = lo + len + shift;
            overlap += std::max(0.0, std::min(b, s1) - std::max(a, s0));
        }
        out.mass += masses[c] * std::min(1.0, overlap / w);
    }
    out.ratio = out.mass * std::exp(h * plane::distance(part.center, x));
    return out;
}

namespace {

// beta_p(xi, eta) = -2 log sin(theta / 2) for visual angle theta at p.
double beta_from_angle(double theta) { return -2.0 * std::log(std::sin(0.5 * theta)); }

double angle_gap(double a, double b) {
    double d = std::abs(plane::wrap_angle(a - b));
    return std::min(d, 2 * kPi - d);
}

}  // namespace

PairMeasure pair_measure(const ArcPartition& part, const std::vector<double>& masses, double h, double weight_cap) {
    if (static_cast<int>(masses.size()) != part.arcs) throw std::invalid_argument("masses do not match the partition");
    PairMeasure pm;
    pm.cells = part.arcs;
    pm.weight.assign(static_cast<std::size_t>(part.arcs) * part.arcs, 0.0);
    for (int i = 0; i < part.arcs; ++i)
        for (int j = 0; j < part.arcs; ++j) {
            if (i == j) {
                ++pm.excluded;
                continue;
            }
            double e = std::exp(h * beta_from_angle(angle_gap(part.mid_angle(i), part.mid_angle(j))));
            if (!(e <= weight_cap)) {
                ++pm.excluded;
                continue;
            }
            pm.weight[static_cast<std::size_t>(i) * part.arcs + j] = e * masses[i] * masses[j];
        }
    return pm;
}

PairInvariance pair_invariance_check(const ArcPartition& part, const PairMeasure& pm, const plane::MobiusMatrix& gamma,
                                     int blocks, int subsamples) {
    if (pm.cells != part.arcs || part.arcs % blocks != 0) throw std::invalid_argument("blocks must divide the arc count");
    if (subsamples < 1) throw std::invalid_argument("need at least one subsample");
    int per = part.arcs / blocks;
    // Block of the image of each sub-sampled direction.
    std::vector<int> image_block(static_cast<std::size_t>(part.arcs) * subsamples);
    for (int c = 0; c < part.arcs; ++c)
        for (int k = 0; k < subsamples; ++k) {
            double angle = (c + (k + 0.5) / subsamples) * part.width();
            Ext xi = gamma.apply(plane::boundary_in_direction(part.center, angle));
            image_block[static_cast<std::size_t>(c) * subsamples + k] = part.cell_of(xi) / per;
        }
    std::vector<double> orig(static_cast<std::size_t>(blocks) * blocks, 0.0), push(orig.size(), 0.0);
    double share = 1.0 / (static_cast<double>(subsamples) * subsamples);
    for (int i = 0; i < part.arcs; ++i)
        for (int j = 0; j < part.arcs; ++j) {
            double w = pm.at(i, j);
            if (w == 0.0) continue;
            orig[static_cast<std::size_t>(i / per) * blocks + j / per] += w;
            for (int a = 0; a < subsamples; ++a)
                for (int b = 0; b < subsamples; ++b) {
                    int bi = image_block[static_cast<std::size_t>(i) * subsamples + a];
                    int bj = image_block[static_cast<std::size_t>(j) * subsamples + b];
                    push[static_cast<std::size_t>(bi) * blocks + bj] += w * share;
                }
        }
    PairInvariance r;
    r.blocks = blocks;
    for (int a = 0; a < blocks; ++a)
        for (int b = 0; b < blocks; ++b) {
            int sep = std::abs(a - b);
            if (std::min(sep, blocks - sep) < 2) continue;
            double o = orig[static_cast<std::size_t>(a) * blocks + b];
            if (!(o > 0)) continue;
            ++r.compared;
            r.max_rel_defect = std::max(r.max_rel_defect, std::abs(push[static_cast<std::size_t>(a) * blocks + b] - o) / o);
        }
    return r;
}

}  // namespace hyplab::ps::plane_ps
