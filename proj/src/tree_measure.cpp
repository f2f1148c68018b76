#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "hyplab/patterson_sullivan.hpp"

namespace hyplab::ps::tree_ps {

using tree::Letter;
using tree::Word;

namespace {

std::vector<Letter> alphabet(int rank) {
    std::vector<Letter> out;
    for (int o = 0; o < 2 * rank; ++o) out.push_back(tree::letter_from_order(o));
    return out;
}

Word append(const Word& w, Letter l) {
    std::vector<Letter> v = w.letters();
    v.push_back(l);
    return Word::unchecked(std::move(v));
}

std::vector<Word> children(int rank, const Word& c) {
    std::vector<Word> out;
    for (Letter l : alphabet(rank))
        if (c.empty() || l != tree::inverse(c.back())) out.push_back(append(c, l));
    return out;
}

bool is_prefix(const Word& a, const Word& b) { return a.size() <= b.size() && tree::common_prefix(a, b) == a.size(); }

void check_rank(int rank) {
    if (rank < 1) throw std::invalid_argument("tree rank must be at least 1");
}

void check_word(const Word& w, int rank) {
    for (Letter l : w.letters())
        if (tree::generator_index(l) >= rank) throw tree::InvalidWord("letter outside the rank");
}

double sphere(int rank, int n) {
    if (n == 0) return 1.0;
    return 2.0 * rank * std::pow(2.0 * rank - 1.0, n - 1);
}

}  // namespace

double critical_exponent(int rank) { return std::log(2.0 * rank - 1.0); }

double poincare_closed_form(int rank, double s) {
    double h = critical_exponent(rank);
    if (!(s > h)) throw DivergenceError("Poincare series diverges for s <= h");
    double x = std::exp(-s);
    return 1.0 + 2.0 * rank * x / (1.0 - (2.0 * rank - 1.0) * x);
}

SeriesValue poincare_series(int rank, double s, const Word& p, const Word& q, int cap) {
    check_rank(rank);
    check_word(p, rank);
    check_word(q, rank);
    SeriesValue v;
    v.s = s;
    v.h = critical_exponent(rank);
    v.cap = cap;
    if (!(s > v.h))
        throw DivergenceError("Poincare series diverges for s <= h (s = " + std::to_string(s) +
                              ", h = " + std::to_string(v.h) + ")");
    if (cap < 0) throw std::invalid_argument("cap must be nonnegative");
    // gamma -> p^-1 gamma q is a bijection, so the shells of d(p, gamma q) are spheres.
    for (int n = 0; n <= cap; ++n) v.partial += sphere(rank, n) * std::exp(-s * n);
    v.growth_constant = 2.0 * rank / (2.0 * rank - 1.0);
    double u = s - v.h;
    double bound = v.growth_constant * std::exp(-u * (cap + 1)) / (-std::expm1(-u));
    // Allowance for rounding in the partial sum.
    v.tail = bound * (1.0 + 1e-9) + 8.0 * std::numeric_limits<double>::epsilon() * v.partial;
    return v;
}

double poincare_series_enumerated(int rank, double s, const Word& p, const Word& q, int cap) {
    double h = critical_exponent(rank);
    if (!(s > h)) throw DivergenceError("Poincare series diverges for s <= h");
    double sum = 0.0;
    int reach = cap + static_cast<int>(p.size() + q.size());
    tree::ball_enumerate(rank, reach, [&](const Word& g) {
        int d = tree::distance(p, tree::multiply(g, q));
        if (d <= cap) sum += std::exp(-s * d);
    });
    return sum;
}

AtomicMeasure ps_measure(int rank, const Word& p, double s, int cap) {
    SeriesValue series = poincare_series(rank, s, p, Word{}, cap);
    double P = poincare_closed_form(rank, s);
    AtomicMeasure m;
    m.s = s;
    m.cap = cap;
    m.p = tree::to_string(p);
    m.x = "e";
    tree::ball_enumerate(rank, cap + static_cast<int>(p.size()), [&](const Word& g) {
        int d = tree::distance(p, g);
        if (d > cap) return;
        double w = std::exp(-s * d) / P;
        m.atoms.push_back({tree::to_string(g), w});
        m.total += w;
    });
    m.tail = series.tail / P;
    m.lower_bound = std::exp(-s * static_cast<double>(p.size()));
    m.upper_bound = std::exp(s * static_cast<double>(p.size()));
    return m;
}

namespace {

// Sum over words w extending c of e^{-s d(p, w)}.
double extension_sum(int rank, const Word& p, const Word& c, double s) {
    double x = std::exp(-s);
    double q = 2.0 * rank - 1.0;
    std::size_t j = tree::common_prefix(c, p);
    auto G = [&](const Word& w) { return std::pow(x, static_cast<double>(w.size())) / (1.0 - q * x); };
    if (j == p.size()) return std::exp(s * static_cast<double>(p.size())) * G(c);
    if (j < c.size()) return std::exp(-s * (static_cast<double>(p.size()) - 2.0 * j)) * G(c);
    double sum = std::exp(-s * tree::distance(p, c));
    for (const Word& ch : children(rank, c)) sum += extension_sum(rank, p, ch, s);
    return sum;
}

}  // namespace

double cylinder_mass(int rank, const Word& p, const Word& c, double s) {
    check_rank(rank);
    if (c.empty()) throw std::invalid_argument("cylinder prefix must be nonempty");
    double P = poincare_closed_form(rank, s);
    double sum = extension_sum(rank, p, c, s);
    if (is_prefix(c, p))
        for (std::size_t i = c.size(); i <= p.size(); ++i) sum -= std::exp(-s * static_cast<double>(p.size() - i));
    return sum / P;
}

Rational exact_cylinder_measure(int rank, const Word& p, const Word& c) {
    check_rank(rank);
    std::int64_t q = 2 * rank - 1;
    if (c.empty() || (c.size() < p.size() && is_prefix(c, p))) {
        Rational sum(0);
        for (const Word& ch : children(rank, c)) sum += exact_cylinder_measure(rank, p, ch);
        return sum;
    }
    auto j = static_cast<int>(tree::common_prefix(c, p));
    int b = static_cast<int>(p.size()) - 2 * j;  // b_e(p, xi) on the cylinder
    return Rational::pow(q, -b) * tree::boundary_cylinder_measure(c, rank);
}

LimitCylinder ps_limit_cylinder(int rank, const Word& p, const Word& c, const std::vector<double>& s_grid) {
    double h = critical_exponent(rank);
    std::vector<double> u, v;
    for (double s : s_grid) {
        if (!(s > h)) throw DivergenceError("s grid must lie above h");
        u.push_back(s - h);
        v.push_back(cylinder_mass(rank, p, c, s));
    }
    LimitCylinder out;
    out.extrapolated = extrapolate_to_zero(u, v);
    out.exact = exact_cylinder_measure(rank, p, c);
    out.s_min = *std::min_element(s_grid.begin(), s_grid.end());
    return out;
}

std::vector<Word> cylinders(int rank, int depth) {
    check_rank(rank);
    if (depth < 1) throw std::invalid_argument("cylinder depth must be at least 1");
    std::vector<Word> level{Word{}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Word> next;
        for (const Word& w : level)
            for (Word& ch : children(rank, w)) next.push_back(std::move(ch));
        level = std::move(next);
    }
    return level;
}

tree::BoundaryPoint representative(int rank, const Word& c) {
    for (Letter l : alphabet(rank))
        if (c.empty() || l != tree::inverse(c.back())) return tree::BoundaryPoint(c, Word::unchecked({l}));
    throw std::logic_error("no continuation letter");
}

ConformalReport conformal_check(int rank, const Word& p, const Word& q, int depth, const std::vector<double>& s_grid) {
    ConformalReport r;
    double h = critical_exponent(rank);
    std::int64_t base = 2 * rank - 1;
    for (const Word& c : cylinders(rank, depth)) {
        ++r.cells;
        Rational np = exact_cylinder_measure(rank, p, c), nq = exact_cylinder_measure(rank, q, c);
        if (np.num() == 0 || nq.num() == 0) {
            ++r.excluded;
            continue;
        }
        tree::BoundaryPoint xi = representative(rank, c);
        long b = tree::busemann(q, p, xi);
        if (!(nq == np * Rational::pow(base, static_cast<int>(-b))))
            r.max_defect = std::max(r.max_defect, std::abs(std::log(nq.to_double() / np.to_double()) + h * b));
        if (!s_grid.empty()) {
            double ep = ps_limit_cylinder(rank, p, c, s_grid).extrapolated.value;
            double eq = ps_limit_cylinder(rank, q, c, s_grid).extrapolated.value;
            r.max_defect_extrapolated = std::max(r.max_defect_extrapolated, std::abs(std::log(eq / ep) + h * b));
        }
    }
    return r;
}

bool ray_meets_ball(const Word& from, const tree::BoundaryPoint& xi, const Word& center, double rho) {
    // Past the projection of the center the distance only grows.
    long horizon = static_cast<long>(from.size() + center.size()) + static_cast<long>(std::ceil(rho)) + 2;
    for (long t = 0; t <= horizon; ++t)
        if (tree::distance(center, tree::ray_point(from, xi, t)) < rho) return true;
    return false;
}

namespace {

// Cylinders on which "the ray from `from` meets B(center, rho)" is constant,
// refined only along the paths to `from` and `center`.
void shadow_cells(int rank, const Word& from, const Word& center, double rho, const Word& c,
                  const std::function<void(const Word&)>& emit) {
    std::size_t deep = std::max(from.size(), center.size());
    bool on_path = is_prefix(c, from) || is_prefix(c, center);
    if (c.empty() || (c.size() < deep && on_path)) {
        for (const Word& ch : children(rank, c)) shadow_cells(rank, from, center, rho, ch, emit);
        return;
    }
    if (ray_meets_ball(from, representative(rank, c), center, rho)) emit(c);
}

}  // namespace

std::vector<Word> shadow(int rank, const Word& from, const Word& center, double rho, int depth) {
    std::vector<Word> out;
    for (const Word& c : cylinders(rank, depth))
        if (ray_meets_ball(from, representative(rank, c), center, rho)) out.push_back(c);
    return out;
}

ShadowMass shadow_mass(int rank, const Word& p, const Word& x, double rho) {
    if (!(tree::distance(p, x) > rho)) throw std::invalid_argument("shadow needs d(p, x) > rho");
    ShadowMass out;
    shadow_cells(rank, p, x, rho, Word{}, [&](const Word& c) { out.mass += exact_cylinder_measure(rank, p, c); });
    out.ratio = out.mass.to_double() * std::pow(2.0 * rank - 1.0, tree::distance(p, x));
    return out;
}

Rational shadow_mass_from(int rank, const Word& p, const Word& x, double rho) {
    if (!(tree::distance(p, x) > rho)) throw std::invalid_argument("shadow needs d(p, x) > rho");
    Rational mass(0);
    shadow_cells(rank, x, p, rho, Word{}, [&](const Word& c) { mass += exact_cylinder_measure(rank, p, c); });
    return mass;
}

Rational pair_weight(int rank, const Word& c1, const Word& c2) {
    std::size_t j = tree::common_prefix(c1, c2);
    if (j >= c1.size() || j >= c2.size()) throw std::invalid_argument("pair weight needs disjoint cylinders");
    return Rational::pow(2 * rank - 1, 2 * static_cast<int>(j)) * tree::boundary_cylinder_measure(c1, rank) *
           tree::boundary_cylinder_measure(c2, rank);
}

PairInvariance pair_invariance_check(int rank, int depth, const Word& g) {
    if (static_cast<int>(g.size()) >= depth)
        throw std::invalid_argument("cylinder depth must exceed the word length of the group element");
    auto cells = cylinders(rank, depth);
    std::vector<Word> images;
    for (const Word& c : cells) images.push_back(tree::act(g, tree::BoundaryPoint::cylinder(c)).prefix());
    PairInvariance r;
    r.max_abs_defect = Rational(0);
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (i == j) continue;
            ++r.pairs;
            Rational w = pair_weight(rank, cells[i], cells[j]);
            if (!(w == pair_weight(rank, cells[j], cells[i]))) r.symmetric = false;
            Rational d = pair_weight(rank, images[i], images[j]) - w;
            if (d < Rational(0)) d = -d;
            if (r.max_abs_defect < d) r.max_abs_defect = d;
        }
    return r;
}

namespace {

struct DMassRun {
    int rank;
    Word x;  // center translated so that the base point is the identity
    double R_prime, R;

    double pair(const Word& A, const Word& B) const {
        if (A == B) {
            if (static_cast<double>(A.size()) >= R_prime) return 0.0;
            double sum = 0.0;
            auto ch = children(rank, A);
            for (const Word& a : ch)
                for (const Word& b : ch) sum += pair(a, b);
            return sum;
        }
        auto j = static_cast<double>(tree::common_prefix(A, B));
        if (j >= R_prime) return 0.0;
        if (A.size() < x.size() && is_prefix(A, x)) {
            double sum = 0.0;
            for (const Word& a : children(rank, A)) sum += pair(a, B);
            return sum;
        }
        if (B.size() < x.size() && is_prefix(B, x)) {
            double sum = 0.0;
            for (const Word& b : children(rank, B)) sum += pair(A, b);
            return sum;
        }
        // Line from the A end to the B end, time 0 at the branch vertex.
        double xs = static_cast<double>(x.size());
        double tx;
        if (is_prefix(x, B) && j <= xs) tx = xs - j;
        else if (is_prefix(x, A) && j <= xs) tx = -(xs - j);
        else return 0.0;  // the line misses x, hence B(x, R) for R <= 1
        double half = R_prime - j;
        double leb = std::max(0.0, std::min(half, tx + R) + half);
        double w = std::pow(2.0 * rank - 1.0, 2.0 * j) * tree::boundary_cylinder_measure(A, rank).to_double() *
                   tree::boundary_cylinder_measure(B, rank).to_double();
        return w * leb;
    }
};

}  // namespace

DMass d_mass(int rank, const Word& p, const Word& x, double R_prime, double R) {
    check_rank(rank);
    if (!(R > 0) || R > 1.0) throw std::invalid_argument("d_mass needs 0 < R <= 1");
    if (!(tree::distance(p, x) > R)) throw std::invalid_argument("d_mass needs d(p, x) > R");
    DMassRun run{rank, tree::multiply(tree::inverse(p), x), R_prime, R};
    DMass out;
    auto first = children(rank, Word{});
    for (const Word& a : first)
        for (const Word& b : first) out.mass += run.pair(a, b);
    out.scaled = out.mass * std::pow(2.0 * rank - 1.0, tree::distance(p, x));
    return out;
}

SeparatedReport separated_bound(int rank, const Word& p, const Word& x, int n, double rho, double R_prime, double R) {
    check_rank(rank);
    if (!(rho > 0) || !(R > 0) || R > 1.0) throw std::invalid_argument("separated_bound needs rho > 0, 0 < R <= 1");
    if (static_cast<double>(tree::distance(p, x)) < n + R + R_prime)
        throw std::invalid_argument("separated_bound needs d(x, p) >= n + R + R'");
    double sep = 2.0 * 3.0 * rho;  // 2 r0 with r0 = 4 delta + 3 rho and delta = 0
    std::vector<std::vector<Word>> paths;
    int reach = static_cast<int>(std::ceil(R_prime)) - 1;
    if (static_cast<double>(reach + 1) < R_prime) ++reach;
    std::vector<Word> base;
    tree::ball_enumerate(rank, std::max(reach, 0), [&](const Word& w) {
        if (static_cast<double>(w.size()) < R_prime) base.push_back(w);
    });
    // Outermost base points first, so the greedy pass spreads over the ball.
    std::stable_sort(base.begin(), base.end(), [](const Word& a, const Word& b) { return a.size() > b.size(); });
    for (const Word& w : base) {
        Word u = tree::multiply(p, w);
        std::vector<Word> path;
        for (int t = 0; t <= n; ++t) path.push_back(tree::segment_point(u, x, t));
        paths.push_back(std::move(path));
    }
    SeparatedReport r;
    r.sample_size = paths.size();
    std::vector<const std::vector<Word>*> chosen;
    for (const auto& path : paths) {
        bool separated = true;
        for (const auto* other : chosen) {
            int dn = 0;
            for (int t = 0; t <= n; ++t) dn = std::max(dn, tree::distance(path[t], (*other)[t]));
            if (!(dn > sep)) {
                separated = false;
                break;
            }
        }
        if (separated) chosen.push_back(&path);
    }
    r.cardinality = chosen.size();
    return r;
}

}  // namespace hyplab::ps::tree_ps
