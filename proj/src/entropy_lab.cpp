#include "hyplab/entropy_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include "hyplab/parallel.hpp"

namespace hyplab::entropy {

using plane::kPi;
using tree::Letter;
using tree::Word;

TreeFlowPoint TreeFlowPoint::make(int rank, Word base, std::vector<Letter> forward, std::vector<Letter> backward) {
    auto check = [&](const std::vector<Letter>& w) {
        if (!tree::is_reduced(w)) throw tree::InvalidWord("flow window is not reduced");
        for (Letter l : w)
            if (tree::generator_index(l) >= rank) throw tree::InvalidWord("letter outside the rank");
    };
    check(forward);
    check(backward);
    if (!forward.empty() && !backward.empty() && forward[0] == backward[0])
        throw tree::InvalidWord("forward and backward windows leave through the same edge");
    TreeFlowPoint p;
    p.rank = rank;
    p.base = std::move(base);
    p.forward = std::move(forward);
    p.backward = std::move(backward);
    return p;
}

long TreeFlowPoint::window() const { return static_cast<long>(std::min(forward.size(), backward.size())); }

Word TreeFlowPoint::at(long t) const {
    const auto& side = t >= 0 ? forward : backward;
    auto n = static_cast<std::size_t>(t >= 0 ? t : -t);
    if (n > side.size()) throw WindowExceeded("time outside the stored window");
    std::vector<Letter> v = base.letters();
    v.insert(v.end(), side.begin(), side.begin() + static_cast<long>(n));
    return Word(v);
}

TreeFlowPoint TreeFlowPoint::shifted(long t) const {
    if (t == 0) return *this;
    auto n = static_cast<std::size_t>(t > 0 ? t : -t);
    const auto& ahead = t > 0 ? forward : backward;
    const auto& behind = t > 0 ? backward : forward;
    if (n > ahead.size()) throw WindowExceeded("shift outside the stored window");
    TreeFlowPoint p;
    p.rank = rank;
    p.base = at(t);
    std::vector<Letter> front(ahead.begin() + static_cast<long>(n), ahead.end());
    // Walking back retraces the inverses of the crossed letters, then the old other side.
    std::vector<Letter> back;
    for (std::size_t i = n; i-- > 0;) back.push_back(tree::inverse(ahead[i]));
    back.insert(back.end(), behind.begin(), behind.end());
    if (t > 0) {
        p.forward = std::move(front);
        p.backward = std::move(back);
    } else {
        p.forward = std::move(back);
        p.backward = std::move(front);
    }
    return p;
}

flat::Point FlatFlowPoint::at(double t) const {
    auto wrap = [](double a) { return a - std::floor(a); };
    return {wrap(x + t * std::cos(angle)), wrap(y + t * std::sin(angle))};
}

double torus_distance(const flat::Point& a, const flat::Point& b) {
    auto gap = [](double d) {
        d = std::abs(d - std::round(d));
        return d;
    };
    return std::hypot(gap(a.x - b.x), gap(a.y - b.y));
}

long dyn_metric(const TreeFlowPoint& v, const TreeFlowPoint& w, long k) {
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    if (k > v.window() || k > w.window()) throw WindowExceeded("k exceeds the usable window");
    long m = 0;
    for (long t = 0; t <= k; ++t) m = std::max<long>(m, tree::distance(v.at(t), w.at(t)));
    return m;
}

namespace {

template <class F>
double sampled_max(double k, double step, F&& f) {
    if (k < 0 || !(step > 0)) throw std::invalid_argument("need k >= 0 and a positive step");
    double m = 0.0;
    auto steps = static_cast<long>(std::floor(k / step));
    for (long i = 0; i <= steps; ++i) m = std::max(m, f(i * step));
    return std::max(m, f(k));
}

}  // namespace

double dyn_metric(const FlatFlowPoint& v, const FlatFlowPoint& w, double k, double step) {
    // The displacement c_w(t) - c_v(t) moves linearly.
    double dx = w.x - v.x, dy = w.y - v.y;
    double ux = std::cos(w.angle) - std::cos(v.angle), uy = std::sin(w.angle) - std::sin(v.angle);
    return sampled_max(k, step, [&](double t) {
        double gx = dx + t * ux, gy = dy + t * uy;
        gx -= std::round(gx);
        gy -= std::round(gy);
        return std::hypot(gx, gy);
    });
}

double dyn_metric(const plane::UnitVector& v, const plane::UnitVector& w, double k, double step) {
    // In the frame of v, c_v(t) = i e^t.
    plane::MobiusMatrix rel = plane::frame(v).inverse() * plane::frame(w);
    return sampled_max(k, step, [&](double t) {
        plane::Point a{0.0, std::exp(t)};
        return plane::distance(a, rel.apply(a));
    });
}

std::vector<TreeFlowPoint> tree_universe(int rank, int n, int window) {
    if (n < 1 || window < n) throw std::invalid_argument("need 1 <= n <= window");
    std::vector<TreeFlowPoint> out;
    tree::ball_enumerate(rank, n, [&](const Word& w) {
        if (static_cast<int>(w.size()) != n) return;
        std::vector<Letter> f = w.letters();
        while (static_cast<int>(f.size()) < window) f.push_back(f.back());
        Letter b = tree::letter_from_order(0);
        for (int o = 0; o < 2 * rank; ++o) {
            b = tree::letter_from_order(o);
            if (b != f[0]) break;
        }
        out.push_back(TreeFlowPoint::make(rank, Word{}, std::move(f), std::vector<Letter>(window, b)));
    });
    return out;
}

std::vector<FlatFlowPoint> flat_universe(int grid, int directions) {
    if (grid < 1 || directions < 1) throw std::invalid_argument("empty flat universe");
    std::vector<FlatFlowPoint> out;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            for (int a = 0; a < directions; ++a)
                out.push_back({(i + 0.5) / grid, (j + 0.5) / grid, 2 * kPi * a / directions});
    return out;
}

namespace {

// Greedy cover by closed balls d <= delta and a greedy maximal set with
// pairwise d > 2 delta; the second never exceeds the minimal cover size.
std::pair<std::size_t, std::size_t> sandwich(std::size_t N, double delta,
                                             const std::function<double(std::size_t, std::size_t)>& d) {
    std::vector<char> covered(N, 0);
    std::size_t centers = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (covered[i]) continue;
        ++centers;
        for (std::size_t j = 0; j < N; ++j)
            if (!covered[j] && d(i, j) <= delta) covered[j] = 1;
    }
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < N; ++i) {
        bool ok = true;
        for (std::size_t c : chosen)
            if (!(d(i, c) > 2 * delta)) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(i);
    }
    return {chosen.size(), centers};
}

}  // namespace

SpanningReport spanning_count(const std::vector<TreeFlowPoint>& universe, int n, double delta) {
    SpanningReport r;
    r.n = n;
    r.delta = delta;
    if (universe.empty()) return r;
    bool common = std::all_of(universe.begin(), universe.end(), [&](const TreeFlowPoint& p) {
        return p.base == universe[0].base && static_cast<long>(p.forward.size()) >= n;
    });
    if (common) {
        // Same base: two forward paths splitting after j common letters are
        // 2 (n - j) apart at time n, the maximum over [0, n]. Both relations
        // d <= delta and d <= 2 delta are then "same prefix of a fixed length",
        // so the greedy counts are exactly the numbers of distinct prefixes.
        auto distinct = [&](double len) {
            auto L = static_cast<std::size_t>(std::clamp(std::ceil(len - 1e-12), 0.0, static_cast<double>(n)));
            std::set<std::vector<Letter>> seen;
            for (const auto& p : universe) seen.emplace(p.forward.begin(), p.forward.begin() + L);
            return seen.size();
        };
        r.upper = distinct(n - delta / 2);
        r.lower = distinct(n - delta);
    } else {
        auto [lo, hi] = sandwich(universe.size(), delta, [&](std::size_t a, std::size_t b) {
            return static_cast<double>(dyn_metric(universe[a], universe[b], n));
        });
        r.lower = lo;
        r.upper = hi;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "tree rank %d, %zu flow points, window %ld", universe[0].rank, universe.size(),
                  universe[0].window());
    r.universe = buf;
    return r;
}

SpanningReport spanning_count(const std::vector<FlatFlowPoint>& universe, int n, double delta) {
    SpanningReport r;
    r.n = n;
    r.delta = delta;
    if (universe.empty()) return r;
    std::size_t N = universe.size();
    std::vector<double> dist(N * N, 0.0);
    auto rows = parallel_chunks(N, default_workers(), [&](std::size_t i) {
        std::vector<double> row(N, 0.0);
        for (std::size_t j = i + 1; j < N; ++j) row[j] = dyn_metric(universe[i], universe[j], n, 0.1);
        return row;
    });
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) dist[i * N + j] = dist[j * N + i] = rows[i][j];
    auto [lo, hi] = sandwich(N, delta, [&](std::size_t a, std::size_t b) { return dist[a * N + b]; });
    r.lower = lo;
    r.upper = hi;
    r.universe = "flat torus, " + std::to_string(N) + " flow points";
    return r;
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

HtopEstimate estimate_htop(FlowBackend backend, int rank, const std::vector<int>& n_grid,
                           const std::vector<double>& delta_grid, std::optional<double> volume_entropy) {
    if (n_grid.size() < 2 || delta_grid.empty()) throw std::invalid_argument("need two n values and one delta");
    std::vector<double> deltas = delta_grid;
    std::sort(deltas.rbegin(), deltas.rend());
    HtopEstimate est;
    std::vector<FlatFlowPoint> flat_pts;
    if (backend == FlowBackend::Flat) flat_pts = flat_universe(4, 32);
    for (double delta : deltas) {
        SlopeFit fit;
        fit.delta = delta;
        std::vector<double> xs, ys;
        for (int n : n_grid) {
            SpanningReport r = backend == FlowBackend::Tree ? spanning_count(tree_universe(rank, n), n, delta)
                                                            : spanning_count(flat_pts, n, delta);
            xs.push_back(n);
            ys.push_back(std::log(static_cast<double>(r.upper)));
            fit.reports.push_back(std::move(r));
        }
        fit.slope = ls_slope(xs, ys);
        est.fits.push_back(std::move(fit));
    }
    est.h = est.fits.back().slope;
    if (est.fits.size() >= 2) {
        double a = est.fits[est.fits.size() - 2].slope;
        est.stabilized = std::abs(est.h - a) <= 0.1 * std::max(std::abs(est.h), 0.05);
    }
    if (volume_entropy) {
        est.volume_entropy = volume_entropy;
        est.gap = std::abs(est.h - *volume_entropy);
    }
    return est;
}

std::string to_string(ZClass z) {
    switch (z) {
        case ZClass::ExpansiveAtScale: return "EXPANSIVE-AT-SCALE";
        case ZClass::NonExpansiveWitness: return "NON-EXPANSIVE-WITNESS";
        case ZClass::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

ZSetReport z_set_probe(const TreeFlowPoint& v, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    (void)v;
    ZSetReport r;
    r.classification = ZClass::ExpansiveAtScale;
    r.certified = true;
    r.certificate =
        "tree lines at bounded distance share both ends, and a tree line is determined by its ends; "
        "so every w with d(c_v(t), c_w(t)) <= rho for all t is a time shift of v";
    if (rho < 1.0) r.certificate += " (at rho < 1 the shift is 0: distinct vertices are at distance >= 1)";
    return r;
}

ZSetReport z_set_probe(const FlatFlowPoint& v, double rho, double horizon) {
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    ZSetReport r;
    // Parallel line at normal offset 0.75 rho stays exactly that far away.
    double off = 0.75 * rho;
    FlatFlowPoint w{v.x - off * std::sin(v.angle), v.y + off * std::cos(v.angle), v.angle};
    w.x -= std::floor(w.x);
    w.y -= std::floor(w.y);
    double far = std::max(dyn_metric(v, w, horizon, 0.05), 0.0);
    // Backward times: same offset by translation invariance; sample anyway.
    FlatFlowPoint vb{v.x, v.y, v.angle + kPi}, wb{w.x, w.y, w.angle + kPi};
    far = std::max(far, dyn_metric(vb, wb, horizon, 0.05));
    r.samples = 1;
    r.closest = far;
    if (far <= rho) {
        r.classification = ZClass::NonExpansiveWitness;
        r.certified = true;
        char buf[160];
        std::snprintf(buf, sizeof buf, "{\"x\":%.12g,\"y\":%.12g,\"angle\":%.12g,\"offset\":%.12g}", w.x, w.y, w.angle,
                      off);
        r.witnesses.push_back(buf);
        r.certificate = "parallel lines in a flat strip stay at constant distance";
    }
    return r;
}

ZSetReport z_set_probe(const plane::UnitVector& v, double rho, double horizon, std::size_t budget, std::uint64_t seed) {
    if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
    constexpr std::size_t kChunks = 32;
    struct Best {
        double closest = std::numeric_limits<double>::infinity();
        std::vector<std::string> found;
    };
    auto parts = parallel_chunks(kChunks, default_workers(), [&](std::size_t chunk) {
        Best b;
        std::mt19937_64 rng(chunk_seed(seed, chunk));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = chunk; i < budget; i += kChunks) {
            // Base point within rho of v's, direction perturbed by up to rho.
            double r = rho * unit(rng), dir = 2 * kPi * unit(rng);
            plane::UnitVector w = plane::geodesic_flow(plane::UnitVector{v.base, dir}, r);
            w.angle = plane::wrap_angle(v.angle + rho * (2 * unit(rng) - 1));
            double fwd = dyn_metric(v, w, horizon, 0.05);
            plane::UnitVector vb{v.base, plane::wrap_angle(v.angle + kPi)};
            plane::UnitVector wb{w.base, plane::wrap_angle(w.angle + kPi)};
            double d = std::max(fwd, dyn_metric(vb, wb, horizon, 0.05));
            b.closest = std::min(b.closest, d);
            if (d <= rho) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "{\"x\":%.12g,\"y\":%.12g,\"angle\":%.12g}", w.base.x, w.base.y,
                              w.angle);
                b.found.push_back(buf);
            }
        }
        return b;
    });
    ZSetReport r;
    r.samples = budget;
    r.closest = std::numeric_limits<double>::infinity();
    for (auto& b : parts) {
        r.closest = std::min(r.closest, b.closest);
        for (auto& s : b.found) r.witnesses.push_back(std::move(s));
    }
    if (r.witnesses.empty()) {
        r.classification = ZClass::ExpansiveAtScale;
        r.certificate = "sampled: no candidate stayed within rho over the horizon";
    } else {
        // Finite horizons cannot separate slowly diverging candidates.
        r.classification = ZClass::Unknown;
        r.certificate = "candidates within rho up to the horizon";
    }
    return r;
}

FiberReport endpoint_fiber_probe(const tree::BoundaryPoint& xi, const tree::BoundaryPoint& eta) {
    if (xi == eta) throw std::invalid_argument("fiber probe needs distinct endpoints");
    FiberReport r;
    r.count = 1;
    r.certificate = "a tree line is the union of the two rays from the branch vertex; it is unique";
    std::string path;
    for (long t = -2; t <= 2; ++t) path += (t > -2 ? " " : "") + tree::to_string(tree::line_point(xi, eta, t));
    r.representatives.push_back(path);
    return r;
}

FiberReport endpoint_fiber_probe(const plane::Ext& xi, const plane::Ext& eta) {
    if (plane::approx_equal(xi, eta, 0.0)) throw std::invalid_argument("fiber probe needs distinct endpoints");
    FiberReport r;
    r.count = 1;
    r.certificate = "the geodesic joining two boundary points is the unique orthogonal circle or vertical line";
    auto top = plane::line_frame(xi, eta).at(0.0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "through (%.12g,%.12g)", top.x, top.y);
    r.representatives.push_back(buf);
    return r;
}

FiberReport endpoint_fiber_probe(double xi_angle, double eta_angle, std::size_t budget) {
    FiberReport r;
    double gap = plane::wrap_angle(eta_angle - xi_angle);
    if (std::abs(gap - kPi) > 1e-12) {
        r.certificate = "no Euclidean line joins non-opposite directions";
        return r;
    }
    // Every translate of the line through the origin joins the same ends.
    std::size_t k = std::max<std::size_t>(budget, 2);
    for (std::size_t i = 0; i < k; ++i) {
        double off = static_cast<double>(i) / static_cast<double>(k);
        char buf[128];
        std::snprintf(buf, sizeof buf, "origin (%.12g,%.12g) angle %.12g", -off * std::sin(eta_angle),
                      off * std::cos(eta_angle), eta_angle);
        r.representatives.push_back(buf);
    }
    r.count = r.representatives.size();
    r.continuum = true;
    r.certificate = "parallel translates form a flat strip of connecting lines";
    return r;
}

}  // namespace hyplab::entropy
