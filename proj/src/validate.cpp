#include "hyplab/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "hyplab/counting.hpp"
#include "hyplab/parallel.hpp"
#include "hyplab/patterson_sullivan.hpp"
#include "hyplab/space.hpp"

namespace hyplab::validate {

namespace {

using report::fmt;
using tree::Word;

const double kLog3 = std::log(3.0);

Record make(std::string id, std::string backend, std::string statement, double measured, double bound,
            std::string exact = {}) {
    Record r{std::move(id), std::move(backend), std::move(statement), measured, bound, measured <= bound,
             std::move(exact), {}};
    return r;
}

std::vector<Word> ball_words(int rank, int radius) {
    std::vector<Word> out;
    tree::ball_enumerate(rank, radius, [&](const Word& w) { out.push_back(w); });
    return out;
}

std::string pt(const plane::Point& p) { return "(" + fmt(p.x) + "," + fmt(p.y) + ")"; }

// ------------------------------------------------------------------ tree

Record tree_growth() {
    std::vector<double> grid;
    for (int R = 0; R <= 14; ++R) grid.push_back(R);
    auto census = counting::orbit_count(counting::GroupSpec::tree(2), SpacePoint::tree(Word()), grid);
    std::string bad;
    for (const auto& e : census.entries) {
        auto R = static_cast<int>(e.R);
        std::uint64_t expect = 2 * static_cast<std::uint64_t>(std::llround(std::pow(3.0, R))) - 1;
        if (e.count != expect && bad.empty()) bad = "R=" + std::to_string(R) + " count=" + std::to_string(e.count);
    }
    auto g = counting::growth_constants(census, kLog3, 4, 14);
    auto r = make("growth-bounds", "tree", "C2/C1 over R in [4,14], h = log 3, counts 2*3^R-1", g.C2 / g.C1, 50.0);
    if (!bad.empty()) {
        r.pass = false;
        r.witness = bad;
    }
    return r;
}

Record tree_fellow(const Options& opt) {
    auto s = tree_fellow_traveling(opt.tree_fellow_length, 2, opt.workers);
    auto r = make("fellow-traveling", "tree", "d(c1(t),c2(t)) <= 3 rho, all segment pairs with rho <= 2",
                  s.worst_ratio, 1.0);
    r.pass = s.violations == 0;
    r.exact = std::to_string(s.violations) + " violations in " + std::to_string(s.pairs) + " pairs";
    r.witness = s.witness;
    return r;
}

std::vector<tree::BoundaryPoint> tree_directions(int rank, int depth) {
    std::vector<tree::BoundaryPoint> out;
    for (const auto& c : ps::tree_ps::cylinders(rank, depth)) out.push_back(ps::tree_ps::representative(rank, c));
    return out;
}

Record tree_asymptotic() {
    // Rays from every pair of base points in B(e, 3) toward every depth-3 direction.
    auto base = ball_words(2, 3);
    auto dirs = tree_directions(2, 3);
    double worst = 0.0;
    std::string witness;
    for (const auto& xi : dirs)
        for (const auto& p1 : base)
            for (const auto& p2 : base) {
                int d0 = tree::distance(p1, p2);
                int sup = 0;
                for (long t = 0; t <= 16; ++t)
                    sup = std::max(sup, tree::distance(tree::ray_point(p1, xi, t), tree::ray_point(p2, xi, t)));
                if (d0 > 0) worst = std::max(worst, static_cast<double>(sup) / (3.0 * d0));
                if (sup > 3 * d0 && witness.empty())
                    witness = "p1=" + tree::to_string(p1) + " p2=" + tree::to_string(p2) + " xi=" + xi.str();
            }
    auto r = make("asymptotic-rays", "tree", "sup_t d(c1(t),c2(t)) <= 19 delta + 3 d(c1(0),c2(0)), delta = 0",
                  worst, 1.0);
    if (!witness.empty()) {
        r.pass = false;
        r.witness = witness;
    }
    return r;
}

Record tree_cocycle() {
    auto pts = ball_words(2, 2);
    auto dirs = tree_directions(2, 3);
    long worst = 0;
    std::string witness;
    for (const auto& xi : dirs)
        for (const auto& p : pts)
            for (const auto& q : pts)
                for (const auto& z : pts) {
                    long d = std::labs(tree::busemann(z, q, xi) - tree::busemann(z, p, xi) + tree::busemann(q, p, xi));
                    if (d > worst) {
                        worst = d;
                        witness = "p=" + tree::to_string(p) + " q=" + tree::to_string(q) + " z=" + tree::to_string(z) +
                                  " xi=" + xi.str();
                    }
                }
    auto r = make("busemann-cocycle", "tree", "b_q(z,xi) = b_p(z,xi) - b_p(q,xi)", static_cast<double>(worst), 0.0,
                  std::to_string(worst));
    if (!r.pass) r.witness = witness;
    return r;
}

Record tree_mass_bounds() {
    // The weakest margin: total - lower + tail and upper + tail - total, over
    // base points in B(e, 2) and s above log 3.
    double worst = -1e300;
    std::string witness;
    for (double s : {kLog3 + 0.5, std::log(6.0), 2 * kLog3})
        for (const auto& p : ball_words(2, 2)) {
            auto m = ps::tree_ps::ps_measure(2, p, s, 10);
            double excess = std::max(m.lower_bound - m.tail - m.total, m.total - m.upper_bound - m.tail);
            if (excess > worst) {
                worst = excess;
                witness = "p=" + tree::to_string(p) + " s=" + fmt(s) + " total=" + fmt(m.total);
            }
        }
    auto r = make("mass-bounds", "tree", "e^{-s d(p,x)} <= nu_{p,x,s}(boundary) <= e^{s d(p,x)} within the tail",
                  worst, 0.0);
    if (!r.pass) r.witness = witness;
    return r;
}

Record tree_conformal() {
    auto pts = ball_words(2, 3);
    double worst = 0.0;
    std::string witness;
    for (const auto& p : pts)
        for (const auto& q : pts) {
            auto c = ps::tree_ps::conformal_check(2, p, q, 5);
            if (c.max_defect > worst) {
                worst = c.max_defect;
                witness = "p=" + tree::to_string(p) + " q=" + tree::to_string(q);
            }
        }
    auto r = make("conformal-density", "tree", "log(nu_q/nu_p) + h b_p(q,xi) = 0 on depth-5 cylinders, |p|,|q| <= 3",
                  worst, 0.0);
    if (!r.pass) r.witness = witness;
    return r;
}

Record tree_shadow() {
    double spread = 0.0;
    std::string witness;
    for (const char* w : {"", "b", "Ba"}) {
        double lo = 1e300, hi = 0.0;
        for (int n = 2; n <= 8; ++n) {
            Word x = tree::parse_word(std::string(w) + std::string(n, 'a'), 2);
            double ratio = ps::tree_ps::shadow_mass(2, Word(), x, 0.5).ratio;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        if (hi / lo > spread) {
            spread = hi / lo;
            witness = std::string("family w=") + (*w ? w : "e") + " ratios in [" + fmt(lo) + "," + fmt(hi) + "]";
        }
    }
    auto r = make("shadow-lemma", "tree", "nu_p(shadow of B(x,rho)) e^{h d(p,x)} constant within factor 2, x = w a^n",
                  spread, 2.0);
    if (!r.pass) r.witness = witness;
    return r;
}

Record tree_pair_invariance() {
    Rational worst(0);
    bool symmetric = true;
    for (const char* g : {"a", "A", "b", "B", "ab"}) {
        auto c = ps::tree_ps::pair_invariance_check(2, 4, tree::parse_word(g, 2));
        if (worst < c.max_abs_defect) worst = c.max_abs_defect;
        symmetric = symmetric && c.symmetric;
    }
    auto r = make("pair-invariance", "tree", "mu-bar(gA x gB) = mu-bar(A x B) on depth-4 cylinders", worst.to_double(),
                  0.0, worst.str());
    if (!symmetric) {
        r.pass = false;
        r.witness = "pair weights not symmetric";
    }
    return r;
}

Record tree_flow_box() {
    double lo = 1e300, hi = 0.0;
    for (int n = 3; n <= 8; ++n) {
        auto m = ps::tree_ps::d_mass(2, Word(), tree::parse_word(std::string(n, 'a'), 2), 2.5, 0.5);
        lo = std::min(lo, m.scaled);
        hi = std::max(hi, m.scaled);
    }
    auto r = make("flow-box-mass", "tree", "mu(D(x,R',R)) e^{h d(p,x)} >= c' > 0 stable within factor 2, x = a^n",
                  hi / lo, 2.0, "c'=" + fmt(lo));
    if (!(lo > 0)) r.pass = false;
    if (!r.pass) r.witness = "scaled masses in [" + fmt(lo) + "," + fmt(hi) + "]";
    return r;
}

Record tree_separated() {
    std::size_t lo = SIZE_MAX, hi = 0;
    Word x = tree::parse_word(std::string(20, 'a'), 2);
    for (int n = 5; n <= 8; ++n) {
        auto s = ps::tree_ps::separated_bound(2, Word(), x, n, 1.0, 8.0, 1.0);
        lo = std::min(lo, s.cardinality);
        hi = std::max(hi, s.cardinality);
    }
    auto r = make("separated-bound", "tree", "(d_n, 2 r0)-separated subsets of D(x,R',R) bounded uniformly in n",
                  lo ? static_cast<double>(hi) / static_cast<double>(lo) : INFINITY, 2.0,
                  std::to_string(lo) + ".." + std::to_string(hi));
    if (!r.pass) r.witness = "cardinalities " + r.exact;
    return r;
}

Record tree_counting(const Options& opt) {
    auto census = counting::geodesic_census(counting::GroupSpec::tree(2), 12, opt.workers);
    auto oracle = counting::necklace_counts_transfer(2, 12);
    std::uint64_t cumulative = 0;
    std::string bad;
    for (int t = 1; t <= 12; ++t) {
        cumulative += oracle[t];
        if (census.P(t) != cumulative && bad.empty())
            bad = "t=" + std::to_string(t) + " census=" + std::to_string(census.P(t)) +
                  " oracle=" + std::to_string(cumulative);
    }
    std::vector<double> grid;
    for (int t = 4; t <= 12; ++t) grid.push_back(t);
    double A = counting::counting_constant(census, kLog3, grid);
    auto r = make("counting-bounds", "tree", "(1/A) e^{ht}/t <= P(t) <= A e^{ht} for t in [4,12]", A, 5.0,
                  std::to_string(census.P(12)));
    if (!bad.empty()) {
        r.pass = false;
        r.witness = bad;
    }
    return r;
}

// ----------------------------------------------------------------- plane

Record plane_fellow(const Options& opt, double delta) {
    auto s = plane_fellow_traveling(delta, opt.pair_samples, opt.radius, opt.seed, opt.workers);
    auto r = make("fellow-traveling", "plane", "thin triangles at delta-hat, d(c1(t),c2(t)) <= 4 delta + 3 rho",
                  s.worst_ratio, 1.0);
    r.pass = s.violations == 0 && s.thin_violations == 0;
    r.exact = "delta=" + fmt(delta) + " max thin defect=" + fmt(s.worst_thin);
    r.witness = s.witness;
    return r;
}

Record plane_asymptotic(const Options& opt, double delta) {
    constexpr std::size_t kChunks = 64;
    const std::uint64_t samples = 2000;
    struct Worst {
        double ratio = 0.0;
        std::string witness;
    };
    auto parts = parallel_chunks(kChunks, opt.workers, [&](std::size_t chunk) {
        std::mt19937_64 rng(chunk_seed(opt.seed ^ 0xa5a5a5a5ULL, chunk));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Worst w;
        for (std::uint64_t i = samples * chunk / kChunks; i < samples * (chunk + 1) / kChunks; ++i) {
            double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng), e = u(rng);
            auto p1 = plane_ball_sample(opt.radius / 2, a1, a2), p2 = plane_ball_sample(opt.radius / 2, b1, b2);
            auto xi = plane::boundary_in_direction(plane::Point{0, 1}, 2 * plane::kPi * e);
            auto r1 = plane::ray_frame(p1, xi), r2 = plane::ray_frame(p2, xi);
            double sup = 0.0;
            for (int k = 0; k <= 600; ++k) sup = std::max(sup, plane::distance(r1.at(0.05 * k), r2.at(0.05 * k)));
            double bound = 19 * delta + 3 * plane::distance(p1, p2);
            if (sup / bound > w.ratio) w = {sup / bound, "p1=" + pt(p1) + " p2=" + pt(p2) + " xi=" + xi.str()};
        }
        return w;
    });
    Worst worst;
    for (const auto& w : parts)
        if (w.ratio > worst.ratio) worst = w;
    auto r = make("asymptotic-rays", "plane", "sup_t d(c1(t),c2(t)) <= 19 delta + 3 d(c1(0),c2(0))", worst.ratio, 1.0);
    if (!r.pass) r.witness = worst.witness;
    return r;
}

Record plane_cocycle(const Options& opt) {
    std::mt19937_64 rng(chunk_seed(opt.seed ^ 0x5a5a5a5aULL, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::string witness;
    for (int i = 0; i < 5000; ++i) {
        plane::Point v[3];
        for (auto& p : v) {
            double u1 = u(rng), u2 = u(rng);
            p = plane_ball_sample(opt.radius / 2, u1, u2);
        }
        auto xi = BoundaryPoint::plane(plane::boundary_in_direction(plane::Point{0, 1}, 2 * plane::kPi * u(rng)));
        double d = busemann_cocycle_check(SpacePoint::plane(v[0].x, v[0].y), SpacePoint::plane(v[1].x, v[1].y),
                                          SpacePoint::plane(v[2].x, v[2].y), xi);
        if (d > worst) {
            worst = d;
            witness = "p=" + pt(v[0]) + " q=" + pt(v[1]) + " z=" + pt(v[2]) + " xi=" + xi.str();
        }
    }
    auto r = make("busemann-cocycle", "plane", "|b_q(z,xi) - b_p(z,xi) + b_p(q,xi)| <= 1e-8", worst, 1e-8);
    if (!r.pass) r.witness = witness;
    return r;
}

struct PlaneData {
    plane::Point x{0, 2};
    ps::plane_ps::Orbit orbit;
    std::vector<double> grid = ps::geometric_s_grid(1.0, 0.4, 0.5, 3);
    ps::plane_ps::ArcPartition part{plane::Point{0, 2}, 256};
    std::vector<double> masses;
};

Record plane_mass_bounds() {
    auto orbit = ps::plane_ps::modular_orbit(plane::Point{0, 2}, 8);
    double worst = -1e300;
    std::string witness;
    for (double s : {1.2, 1.5, 2.0})
        for (plane::Point p : {plane::Point{0, 2}, plane::Point{0.3, 1.5}, plane::Point{-0.4, 3.0}}) {
            auto m = ps::plane_ps::ps_measure(orbit, p, s);
            double excess = std::max(m.lower_bound - m.tail - m.total, m.total - m.upper_bound - m.tail);
            if (excess > worst) {
                worst = excess;
                witness = "p=" + pt(p) + " s=" + fmt(s) + " total=" + fmt(m.total);
            }
        }
    auto r = make("mass-bounds", "plane", "e^{-s d(p,x)} <= nu_{p,x,s}(boundary) <= e^{s d(p,x)} within the tail",
                  worst, 0.0);
    if (!r.pass) r.witness = witness;
    return r;
}

Record plane_conformal(const PlaneData& d) {
    auto c = ps::plane_ps::conformal_check(d.orbit, d.x, plane::Point{0.3, 1.5}, d.part, d.grid);
    auto r = make("conformal-density", "plane", "|log(nu_q/nu_p) + h b_p(q,xi)| < 0.1 at 256 arcs", c.max_defect, 0.1);
    if (!r.pass) r.witness = "p=" + pt(d.x) + " q=(0.3,1.5)";
    return r;
}

Record plane_shadow(const PlaneData& d) {
    double lo = 1e300, hi = 0.0;
    for (int n = 1; n <= 5; ++n) {
        auto s = ps::plane_ps::shadow_mass(d.part, d.masses, plane::Point{0, 2 * std::exp(n + 1.0)}, 1.0);
        lo = std::min(lo, s.ratio);
        hi = std::max(hi, s.ratio);
    }
    double b = std::max(hi, 1.0 / lo);
    auto r = make("shadow-lemma", "plane", "shadow mass ratios in [1/b, b], b <= 20, x = (0, 2e^{n+1})", b, 20.0,
                  "ratios in [" + fmt(lo) + "," + fmt(hi) + "]");
    if (!r.pass) r.witness = r.exact;
    return r;
}

Record plane_pair_invariance(const PlaneData& d) {
    auto pm = ps::plane_ps::pair_measure(d.part, d.masses);
    auto c = ps::plane_ps::pair_invariance_check(d.part, pm, plane::MobiusMatrix{1, 1, 0, 1});
    auto r = make("pair-invariance", "plane", "block-aggregated mu-bar defect under z -> z+1 below 5%",
                  c.max_rel_defect, 0.05);
    if (!r.pass) r.witness = "gamma=[[1,1],[0,1]] blocks=" + std::to_string(c.blocks);
    return r;
}

}  // namespace

TreeFellowSummary tree_fellow_traveling(int max_length, int max_rho, unsigned workers) {
    // The group acts transitively on vertices, so c1 may start at e.
    auto near_origin = ball_words(2, max_rho);
    auto targets = ball_words(2, max_length);
    constexpr std::size_t kChunks = 64;
    auto parts = parallel_chunks(kChunks, workers, [&](std::size_t chunk) {
        TreeFellowSummary s;
        for (std::size_t i = chunk; i < targets.size(); i += kChunks) {
            const Word& y1 = targets[i];
            long T = static_cast<long>(y1.size());
            for (const auto& x2 : near_origin)
                for (const auto& dy : near_origin) {
                    Word y2 = tree::multiply(y1, dy);
                    if (tree::distance(x2, y2) != T) continue;
                    int rho = std::max(static_cast<int>(x2.size()), tree::distance(y1, y2));
                    int dev = 0;
                    for (long t = 0; t <= T; ++t)
                        dev = std::max(dev, tree::distance(tree::segment_point(Word(), y1, t),
                                                           tree::segment_point(x2, y2, t)));
                    ++s.pairs;
                    if (rho > 0) s.worst_ratio = std::max(s.worst_ratio, dev / (3.0 * rho));
                    if (dev > 3 * rho) {
                        if (s.violations++ == 0)
                            s.witness = "c1=[e," + tree::to_string(y1) + "] c2=[" + tree::to_string(x2) + "," +
                                        tree::to_string(y2) + "] deviation=" + std::to_string(dev);
                    }
                }
        }
        return s;
    });
    TreeFellowSummary out;
    for (const auto& p : parts) {
        out.pairs += p.pairs;
        out.violations += p.violations;
        out.worst_ratio = std::max(out.worst_ratio, p.worst_ratio);
        if (out.witness.empty()) out.witness = p.witness;
    }
    return out;
}

PlaneFellowSummary plane_fellow_traveling(double delta, std::uint64_t samples, double radius, std::uint64_t seed,
                                          unsigned workers, double thin_slack) {
    constexpr std::size_t kChunks = 64;
    auto triangle = [](const plane::Point& a, const plane::Point& b, const plane::Point& c) {
        return "triangle " + pt(a) + " " + pt(b) + " " + pt(c);
    };
    auto parts = parallel_chunks(kChunks, workers, [&](std::size_t chunk) {
        std::mt19937_64 rng(chunk_seed(seed ^ 0x3c3c3c3cULL, chunk));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        PlaneFellowSummary s;
        std::string thin_witness, dev_witness;
        for (std::uint64_t i = samples * chunk / kChunks; i < samples * (chunk + 1) / kChunks; ++i) {
            double u1 = u(rng), u2 = u(rng), u3 = u(rng), u4 = u(rng);
            auto p1 = plane_ball_sample(radius, u1, u2), q1 = plane_ball_sample(radius, u3, u4);
            double T = plane::distance(p1, q1);
            // c2 starts within 2 of p1 and heads for a point within 2 of q1,
            // run for the same length T.
            double r0 = 2 * u(rng), a0 = 2 * plane::kPi * u(rng);
            double r1 = 2 * u(rng), a1 = 2 * plane::kPi * u(rng);
            auto p2 = plane::geodesic_flow({p1, a0}, r0).base;
            auto aim = plane::geodesic_flow({q1, a1}, r1).base;
            auto q2 = plane::geodesic_flow({p2, plane::direction_to(p2, aim)}, T).base;
            ++s.samples;
            for (const auto& tri : {std::array{p1, q1, p2}, std::array{p2, q1, q2}}) {
                double defect = plane_triangle_defect(tri[0], tri[1], tri[2]);
                s.worst_thin = std::max(s.worst_thin, defect);
                if (defect > delta + thin_slack && s.thin_violations++ == 0)
                    thin_witness = triangle(tri[0], tri[1], tri[2]) + " defect=" + fmt(defect);
            }
            double rho = std::max(plane::distance(p1, p2), plane::distance(q1, q2));
            auto c1 = connect(SpacePoint::plane(p1.x, p1.y), SpacePoint::plane(q1.x, q1.y));
            auto c2 = connect(SpacePoint::plane(p2.x, p2.y), SpacePoint::plane(q2.x, q2.y));
            double Tc = std::min(c1.t_max, c2.t_max);
            double dev = fellow_traveling_deviation(c1, c2, Tc);
            double bound = 4 * delta + 3 * rho;
            s.worst_ratio = std::max(s.worst_ratio, bound > 0 ? dev / bound : (dev > 0 ? INFINITY : 0.0));
            if (dev > bound + 1e-9 && s.violations++ == 0)
                dev_witness = "c1=[" + pt(p1) + "," + pt(q1) + "] c2=[" + pt(p2) + "," + pt(q2) +
                              "] deviation=" + fmt(dev) + " bound=" + fmt(bound);
        }
        s.witness = !thin_witness.empty() ? thin_witness : dev_witness;
        return s;
    });
    PlaneFellowSummary out;
    out.delta = delta;
    for (const auto& p : parts) {
        out.samples += p.samples;
        out.violations += p.violations;
        out.thin_violations += p.thin_violations;
        out.worst_ratio = std::max(out.worst_ratio, p.worst_ratio);
        out.worst_thin = std::max(out.worst_thin, p.worst_thin);
        if (out.witness.empty()) out.witness = p.witness;
    }
    return out;
}

std::vector<Record> run(const Options& opt) {
    if (opt.suite != "tree" && opt.suite != "plane" && opt.suite != "all")
        throw std::invalid_argument("unknown suite '" + opt.suite + "' (tree, plane, all)");
    std::vector<Record> out;
    if (opt.suite != "plane") {
        out.push_back(tree_growth());
        out.push_back(tree_fellow(opt));
        out.push_back(tree_asymptotic());
        out.push_back(tree_cocycle());
        out.push_back(tree_mass_bounds());
        out.push_back(tree_conformal());
        out.push_back(tree_shadow());
        out.push_back(tree_pair_invariance());
        out.push_back(tree_flow_box());
        out.push_back(tree_separated());
        out.push_back(tree_counting(opt));
    }
    if (opt.suite != "tree") {
        double delta = 0.0;
        if (!opt.corrupt_delta)
            delta = estimate_delta(Backend::Plane, opt.delta_samples, opt.radius, opt.seed, opt.workers).delta;
        PlaneData d;
        d.orbit = ps::plane_ps::modular_orbit(d.x, 12);
        d.masses = ps::plane_ps::limit_cell_masses(d.orbit, d.part, d.grid);
        out.push_back(plane_fellow(opt, delta));
        out.push_back(plane_asymptotic(opt, delta));
        out.push_back(plane_cocycle(opt));
        out.push_back(plane_mass_bounds());
        out.push_back(plane_conformal(d));
        out.push_back(plane_shadow(d));
        out.push_back(plane_pair_invariance(d));
    }
    return out;
}

report::Json to_json(const std::vector<Record>& records) {
    report::Json arr = report::Json::array();
    bool all = true;
    for (const auto& r : records) {
        all = all && r.pass;
        report::Json j;
        j["id"] = r.id;
        j["backend"] = r.backend;
        j["statement"] = r.statement;
        j["measured"] = report::num(r.measured);
        j["bound"] = report::num(r.bound);
        j["pass"] = r.pass;
        if (!r.exact.empty()) j["exact"] = r.exact;
        if (!r.witness.empty()) j["witness"] = r.witness;
        arr.push_back(std::move(j));
    }
    report::Json out;
    out["pass"] = all;
    out["records"] = std::move(arr);
    return out;
}

report::Table to_table(const std::vector<Record>& records) {
    report::Table t;
    t.columns = {"id", "backend", "measured", "bound", "pass", "exact", "witness"};
    for (const auto& r : records)
        t.add({r.id, r.backend, fmt(r.measured), fmt(r.bound), r.pass ? "1" : "0", r.exact, r.witness});
    return t;
}

}  // namespace hyplab::validate
