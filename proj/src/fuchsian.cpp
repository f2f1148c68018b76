#include "hyplab/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "hyplab/parallel.hpp"

namespace hyplab::fuchsian {

using plane::Ext;
using plane::Point;

IntMatrix IntMatrix::canonical(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    std::int64_t first = a != 0 ? a : (b != 0 ? b : (c != 0 ? c : d));
    if (first < 0) return {-a, -b, -c, -d};
    return {a, b, c, d};
}

IntMatrix operator*(const IntMatrix& m, const IntMatrix& n) {
    return IntMatrix::canonical(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
                                m.c * n.b + m.d * n.d);
}

MobiusMatrix IntMatrix::to_float() const {
    return MobiusMatrix::normalized(static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                                    static_cast<double>(d));
}

std::string IntMatrix::str() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "[[%lld,%lld],[%lld,%lld]]", static_cast<long long>(a),
                  static_cast<long long>(b), static_cast<long long>(c), static_cast<long long>(d));
    return buf;
}

IntMatrix rl_word_matrix(const std::string& word) {
    IntMatrix m = IntMatrix::identity();
    for (char ch : word) {
        if (ch == 'R') m = m * kR;
        else if (ch == 'L') m = m * kL;
        else throw std::invalid_argument(std::string("invalid R/L letter '") + ch + "'");
    }
    return m;
}

FuchsianGroup FuchsianGroup::modular() {
    FuchsianGroup g;
    g.name = "modular";
    g.exact_integer = true;
    g.int_generators = {kS, IntMatrix{1, 1, 0, 1}, IntMatrix{1, -1, 0, 1}};
    for (const auto& m : g.int_generators) g.generators.push_back(m.to_float());
    return g;
}

FuchsianGroup FuchsianGroup::from_generators(const std::vector<MobiusMatrix>& gens, double dedup_tol) {
    FuchsianGroup g;
    g.name = "custom";
    g.dedup_tol = dedup_tol;
    for (const auto& raw : gens) {
        MobiusMatrix m = MobiusMatrix::normalized(raw.a, raw.b, raw.c, raw.d);
        for (const auto& existing : g.generators)
            if (plane::approx_equal(existing, m, dedup_tol))
                throw std::invalid_argument("duplicate generator " + m.str());
        g.generators.push_back(m);
    }
    // Formal inverses close the generating set.
    std::size_t n = g.generators.size();
    for (std::size_t i = 0; i < n; ++i) {
        MobiusMatrix inv = g.generators[i].inverse();
        bool present = false;
        for (const auto& existing : g.generators) present = present || plane::approx_equal(existing, inv, dedup_tol);
        if (!present) g.generators.push_back(inv);
    }
    return g;
}

double translation_length_from_trace(double abs_trace) { return 2.0 * std::acosh(abs_trace / 2.0); }

TranslationLength translation_length(const MobiusMatrix& m, double tol) {
    if (plane::approx_equal(m, MobiusMatrix::identity(), tol))
        throw std::invalid_argument("identity has no translation length");
    double t = std::abs(m.trace());
    if (std::abs(t - 2.0) <= tol) return {0.0, IsometryKind::Parabolic};
    if (t < 2.0) return {0.0, IsometryKind::Elliptic};
    return {translation_length_from_trace(t), IsometryKind::Hyperbolic};
}

std::string to_string(Completeness c) {
    switch (c) {
        case Completeness::Certified: return "certified";
        case Completeness::LinearBound: return "linear-bound";
        case Completeness::Incomplete: return "incomplete";
    }
    return "?";
}

namespace {

using BucketKey = std::tuple<long long, long long, long long, long long>;

BucketKey bucket(const MobiusMatrix& m, double cell) {
    return {std::llround(m.a / cell), std::llround(m.b / cell), std::llround(m.c / cell), std::llround(m.d / cell)};
}

}  // namespace

GroupBall group_ball(const FuchsianGroup& g, const Point& p, double radius, int word_cap) {
    if (!(radius > 0)) throw std::invalid_argument("group_ball radius must be positive");
    GroupBall out;
    out.word_cap = word_cap;

    struct Node {
        MobiusMatrix m;
        IntMatrix im;
    };
    std::vector<Node> frontier{{MobiusMatrix::identity(), IntMatrix::identity()}};
    std::set<IntMatrix> seen_int{IntMatrix::identity()};
    std::map<BucketKey, int> seen_float;
    const double cell = std::max(g.dedup_tol * 1e3, 1e-9);
    seen_float[bucket(MobiusMatrix::identity(), cell)] = 0;

    auto record = [&](const MobiusMatrix& m, int len) {
        double disp = plane::distance(p, m.apply(p));
        if (disp <= radius + 1e-12) {
            out.elements.push_back(m);
            out.word_lengths.push_back(len);
            out.displacements.push_back(disp);
            if (len == word_cap && len > 0) out.cap_binding = true;
        }
        return disp;
    };
    record(MobiusMatrix::identity(), 0);

    double min_last_ratio = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> all;  // (word length, displacement) of every enumerated element
    for (int len = 1; len <= word_cap; ++len) {
        std::vector<Node> next;
        for (const auto& node : frontier) {
            for (std::size_t k = 0; k < g.generators.size(); ++k) {
                Node n;
                if (g.exact_integer) {
                    n.im = node.im * g.int_generators[k];
                    if (!seen_int.insert(n.im).second) continue;
                    n.m = n.im.to_float();
                } else {
                    n.m = node.m * g.generators[k];
                    auto key = bucket(n.m, cell);
                    if (seen_float.count(key)) continue;
                    seen_float[key] = len;
                }
                double disp = record(n.m, len);
                all.emplace_back(len, disp);
                if (len == word_cap) min_last_ratio = std::min(min_last_ratio, disp / len);
                next.push_back(n);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }

    // Measured linear comparison d(p, gamma p) >= kappa |w| - kappa'.
    if (std::isfinite(min_last_ratio) && min_last_ratio > 0) {
        out.kappa = min_last_ratio;
        double off = 0.0;
        for (auto [len, disp] : all) off = std::max(off, out.kappa * len - disp);
        out.kappa_offset = off;
        if (!out.cap_binding && out.kappa * (word_cap + 1) - out.kappa_offset > radius)
            out.completeness = Completeness::LinearBound;
    }
    if (frontier.empty() && !out.cap_binding) out.completeness = Completeness::Certified;  // finite group exhausted
    return out;
}

namespace {

// Extended Euclid: returns (g, x, y) with a x + b y = g.
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    return {old_r, old_s, old_t};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

std::vector<IntMatrix> modular_ball(const Point& p, double radius) {
    if (!(radius >= 0)) throw std::invalid_argument("modular_ball radius must be nonnegative");
    // g = [[sqrt y, x/sqrt y],[0, 1/sqrt y]] maps i to p; ||gamma|| <= cond(g) sqrt(2 cosh R).
    double sy = std::sqrt(p.y);
    double ga = sy, gb = p.x / sy, gd = 1.0 / sy;
    double fro2 = ga * ga + gb * gb + gd * gd;
    double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0));
    double smax = std::sqrt(0.5 * (fro2 + disc)), smin = 1.0 / smax;
    double bound = (smax / smin) * std::sqrt(2.0 * std::cosh(radius));
    std::int64_t B = static_cast<std::int64_t>(std::floor(bound)) + 1;

    std::vector<IntMatrix> out;
    auto consider = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        IntMatrix m = IntMatrix::canonical(a, b, c, d);
        if (plane::distance(p, m.to_float().apply(p)) <= radius + 1e-12) out.push_back(m);
    };
    // c = 0: translations z -> z + b.
    for (std::int64_t b = -B; b <= B; ++b) consider(1, b, 0, 1);
    for (std::int64_t c = 1; c <= B; ++c) {
        for (std::int64_t d = -B; d <= B; ++d) {
            auto [g, x, y] = ext_gcd(d, c);  // d x + c y = g
            if (g != 1 && g != -1) continue;
            // a d - b c = 1 with a = x0 + k c, b = b0 + k d.
            std::int64_t a0 = x * g, b0 = -y * g;
            // k range from |a| <= B: -B <= a0 + k c <= B.
            std::int64_t klo = ceil_div(-B - a0, c), khi = floor_div(B - a0, c);
            for (std::int64_t k = klo; k <= khi; ++k) {
                std::int64_t a = a0 + k * c, b = b0 + k * d;
                if (b < -B || b > B) continue;
                consider(a, b, c, d);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

bool is_lyndon(const std::string& w) {
    std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r) {
        // strictly smaller than every proper rotation
        int cmp = 0;
        for (std::size_t k = 0; k < n && cmp == 0; ++k) {
            char x = w[k], y = w[(r + k) % n];
            if (x != y) cmp = x < y ? -1 : 1;
        }
        if (cmp >= 0) return false;
    }
    return true;
}

struct RlSearch {
    std::int64_t trace_bound;
    std::size_t word_cap;
    std::vector<ConjClass>* out;

    void dfs(std::string& w, const IntMatrix& m) {
        if (w.front() == 'R') return;  // Lyndon words over L < R with both letters start with L
        bool has_r = w.find('R') != std::string::npos;
        if (has_r && is_lyndon(w)) {
            ConjClass c;
            c.word = w;
            c.int_representative = m;
            c.representative = m.to_float();
            c.trace = static_cast<double>(m.trace());
            c.length = translation_length_from_trace(c.trace);
            c.primitive = true;
            out->push_back(c);
        }
        if (w.size() >= word_cap) return;
        for (char ch : {'R', 'L'}) {
            IntMatrix n = m * (ch == 'R' ? kR : kL);
            if (n.trace() > trace_bound) continue;  // traces of positive products only grow
            w.push_back(ch);
            dfs(w, n);
            w.pop_back();
        }
    }
};

}  // namespace

std::vector<ConjClass> enumerate_conj_classes_modular(double T, std::optional<int> word_cap, unsigned workers) {
    if (!(T > 0)) throw std::invalid_argument("census length must be positive");
    double tb = 2.0 * std::cosh(T / 2.0);
    auto trace_bound = static_cast<std::int64_t>(std::floor(tb + 1e-9));
    // A word with both letters and length n has trace >= n + 1.
    std::size_t cap = word_cap ? static_cast<std::size_t>(*word_cap) : static_cast<std::size_t>(trace_bound);

    // Partition by the run of leading L's: prefixes L^k R.
    std::vector<std::size_t> heads;
    for (std::size_t k = 1; k + 1 <= cap; ++k) {
        IntMatrix m = IntMatrix::identity();
        for (std::size_t i = 0; i < k; ++i) m = m * kL;
        m = m * kR;
        if (m.trace() > trace_bound) break;
        heads.push_back(k);
    }
    auto parts = parallel_chunks(heads.size(), workers, [&](std::size_t i) {
        std::vector<ConjClass> local;
        RlSearch s{trace_bound, cap, &local};
        std::string w(heads[i], 'L');
        w.push_back('R');
        IntMatrix m = rl_word_matrix(w);
        s.dfs(w, m);
        return local;
    });
    std::vector<ConjClass> out;
    for (auto& part : parts)
        for (auto& c : part)
            if (c.length <= T) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const ConjClass& x, const ConjClass& y) {
        if (x.int_representative.trace() != y.int_representative.trace())
            return x.int_representative.trace() < y.int_representative.trace();
        return x.word < y.word;
    });
    return out;
}

ClosedGeodesic closed_geodesic_path(const MobiusMatrix& m) {
    auto tl = translation_length(m);
    if (tl.kind != IsometryKind::Hyperbolic) throw std::invalid_argument("closed geodesic needs a hyperbolic element");
    Ext f1, f2;
    double tr = m.trace();
    double s = std::sqrt(tr * tr - 4.0);
    if (std::abs(m.c) < 1e-300) {
        f1 = Ext::inf();
        f2 = Ext::at(m.b / (m.d - m.a));
    } else {
        f1 = Ext::at((m.a - m.d + s) / (2 * m.c));
        f2 = Ext::at((m.a - m.d - s) / (2 * m.c));
    }
    // Attracting fixed point has |derivative| = 1/|c z + d|^2 < 1.
    auto derivative = [&](const Ext& e) {
        if (e.infinite) return m.c == 0 ? m.d * m.d : std::numeric_limits<double>::infinity();
        double den = m.c * e.x + m.d;
        return 1.0 / (den * den);
    };
    ClosedGeodesic g;
    if (derivative(f1) < 1.0) {
        g.attracting = f1;
        g.repelling = f2;
    } else {
        g.attracting = f2;
        g.repelling = f1;
    }
    g.axis = plane::line_frame(g.repelling, g.attracting);
    g.period = tl.length;
    return g;
}

ClosedGeodesic closed_geodesic_path(const ConjClass& c) { return closed_geodesic_path(c.representative); }

namespace {

bool nonnegative(const IntMatrix& m) { return m.a >= 0 && m.b >= 0 && m.c >= 0 && m.d >= 0; }

std::string factor_positive(IntMatrix m) {
    std::string rev;
    while (!(m == IntMatrix::identity())) {
        if (m.a >= m.b && m.c >= m.d) {
            m = IntMatrix::canonical(m.a - m.b, m.b, m.c - m.d, m.d);
            rev.push_back('L');
        } else if (m.b >= m.a && m.d >= m.c) {
            m = IntMatrix::canonical(m.a, m.b - m.a, m.c, m.d - m.c);
            rev.push_back('R');
        } else {
            throw std::logic_error("matrix is not in the positive monoid");
        }
        if (rev.size() > 100000) throw std::logic_error("R/L factorization did not terminate");
    }
    return {rev.rbegin(), rev.rend()};
}

std::string least_rotation(const std::string& w) {
    std::string best = w;
    for (std::size_t r = 1; r < w.size(); ++r) best = std::min(best, w.substr(r) + w.substr(0, r));
    return best;
}

}  // namespace

std::optional<std::string> rl_cyclic_word(const IntMatrix& input) {
    IntMatrix m = input;
    if (m.trace() < 0) m = {-m.a, -m.b, -m.c, -m.d};
    if (m.trace() <= 2) return std::nullopt;
    // Breadth-first search over conjugations by R^{+-1}, L^{+-1} for a
    // nonnegative conjugate; positive hyperbolic matrices factor uniquely.
    const std::vector<IntMatrix> moves{kR, kR.inverse(), kL, kL.inverse()};
    std::vector<IntMatrix> frontier{m};
    std::set<IntMatrix> seen{m};
    auto positive_trace = [](IntMatrix x) {
        if (x.trace() < 0) x = {-x.a, -x.b, -x.c, -x.d};
        return x;
    };
    for (int depth = 0; depth < 64 && !frontier.empty(); ++depth) {
        std::vector<IntMatrix> next;
        for (const auto& x : frontier) {
            IntMatrix px = positive_trace(x);
            if (nonnegative(px) && !(px == IntMatrix::identity())) return least_rotation(factor_positive(px));
            for (const auto& g : moves) {
                IntMatrix y = g * x * g.inverse();
                if (seen.insert(y).second) next.push_back(y);
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::vector<ConjClass> heuristic_conj_classes(const FuchsianGroup& g, double T, int word_cap) {
    // Elements with translation length <= T displace the base point i by at most
    // T + 2 * (distance from i to the axis); the word cap bounds that search.
    GroupBall ball = group_ball(g, Point{0.0, 1.0}, T + 8.0, word_cap);
    GroupBall conj = group_ball(g, Point{0.0, 1.0}, 1e9, std::min(word_cap, 6));
    std::vector<ConjClass> out;
    std::vector<MobiusMatrix> keys;
    for (const auto& m : ball.elements) {
        double t = std::abs(m.trace());
        if (t <= 2.0 + g.dedup_tol) continue;
        double len = translation_length_from_trace(t);
        if (len > T) continue;
        // Canonical key: lexicographically least conjugate by short words.
        MobiusMatrix best = m;
        for (const auto& c : conj.elements) {
            MobiusMatrix k = c * m * c.inverse();
            if (std::tie(k.a, k.b, k.c, k.d) < std::tie(best.a, best.b, best.c, best.d)) best = k;
        }
        bool dup = false;
        for (const auto& k : keys) dup = dup || plane::approx_equal(k, best, 1e-6);
        if (dup) continue;
        keys.push_back(best);
        ConjClass c;
        c.representative = m;
        c.trace = t;
        c.length = len;
        c.primitive = true;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const ConjClass& a, const ConjClass& b) { return a.length < b.length; });
    // Drop classes whose length is a multiple of a shorter class's length (power heuristic).
    std::vector<ConjClass> prim;
    for (const auto& c : out) {
        bool power = false;
        for (const auto& q : prim) {
            double r = c.length / q.length;
            if (r > 1.5 && std::abs(r - std::round(r)) < 1e-7) power = true;
        }
        if (!power) prim.push_back(c);
    }
    return prim;
}

}  // namespace hyplab::fuchsian
