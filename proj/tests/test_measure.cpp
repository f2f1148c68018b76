#include <doctest.h>

#include <cmath>

#include "hyplab/patterson_sullivan.hpp"

using namespace hyplab;
using namespace hyplab::ps;
using tree::Word;

namespace {

Word W(const char* s) { return tree::parse_word(s, 2); }

// nu_p(c) from the conformal density formula, refining c until the Busemann
// function b_e(p, .) is constant on each piece.
double conformal_oracle(const Word& p, const Word& c) {
    int depth = std::max<int>(c.size(), p.size() + 1);
    double sum = 0.0;
    for (const Word& piece : tree_ps::cylinders(2, depth)) {
        if (tree::common_prefix(piece, c) < c.size()) continue;
        auto xi = tree_ps::representative(2, piece);
        sum += std::pow(3.0, -static_cast<double>(tree::busemann(p, Word(), xi))) *
               tree::boundary_cylinder_measure(piece, 2).to_double();
    }
    return sum;
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("tree Poincare series: shell sum, enumeration and closed form") {
    const double ln6 = std::log(6.0), two_log3 = 2 * std::log(3.0);
    CHECK(tree_ps::poincare_closed_form(2, ln6) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(tree_ps::poincare_closed_form(2, two_log3) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    // Geometric remainders beyond the cap: (4/3) 2^-12 and (2/3) 3^-10. The
    // enumerated sums add ~10^6 terms, so they only agree to rounding.
    double e6 = tree_ps::poincare_series_enumerated(2, ln6, Word(), Word(), 12);
    CHECK(e6 + (4.0 / 3.0) * std::pow(2.0, -12) == doctest::Approx(7.0 / 3.0).epsilon(1e-9));
    double e9 = tree_ps::poincare_series_enumerated(2, two_log3, Word(), Word(), 10);
    CHECK(e9 + (2.0 / 3.0) * std::pow(3.0, -10) == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
    auto sv = tree_ps::poincare_series(2, ln6, Word(), Word(), 12);
    CHECK(sv.partial == doctest::Approx(e6).epsilon(1e-9));
    CHECK(sv.partial + (4.0 / 3.0) * std::pow(2.0, -12) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(sv.partial + sv.tail >= 7.0 / 3.0 - 1e-12);
    // Off-diagonal: shifted base points.
    auto off = tree_ps::poincare_series(2, 1.5, W("a"), W("bA"), 8);
    CHECK(off.partial == doctest::Approx(tree_ps::poincare_series_enumerated(2, 1.5, W("a"), W("bA"), 8)).epsilon(1e-12));
    CHECK_THROWS_AS(tree_ps::poincare_series(2, std::log(3.0), Word(), Word(), 5), DivergenceError);
    CHECK_THROWS_AS(tree_ps::poincare_closed_form(2, 1.0), DivergenceError);
}

TEST_CASE("orbit measures carry the expected total mass") {
    auto m = tree_ps::ps_measure(2, Word(), std::log(6.0), 10);
    CHECK(m.total <= 1.0 + 1e-12);
    CHECK(m.total + m.tail >= 1.0 - 1e-12);
    auto shifted = tree_ps::ps_measure(2, W("ab"), std::log(6.0), 10);
    CHECK(shifted.within_bounds());
    // Depth-one cylinders hold everything except the atom at e.
    double s = 1.3, P = tree_ps::poincare_closed_form(2, s), sum = 0.0;
    for (const Word& c : tree_ps::cylinders(2, 1)) sum += tree_ps::cylinder_mass(2, Word(), c, s);
    CHECK(sum == doctest::Approx((P - 1.0) / P).epsilon(1e-13));
}

TEST_CASE("limit cylinder measures") {
    CHECK(tree_ps::exact_cylinder_measure(2, Word(), W("a")) == Rational(1, 4));
    CHECK(tree_ps::exact_cylinder_measure(2, Word(), W("ab")) == Rational(1, 12));
    for (const char* p : {"", "a", "ab", "bAA"})
        for (const char* c : {"a", "A", "ab", "bA", "bAAb"})
            CHECK(tree_ps::exact_cylinder_measure(2, W(p), W(c)).to_double() ==
                  doctest::Approx(conformal_oracle(W(p), W(c))).epsilon(1e-14));
    auto grid = geometric_s_grid(std::log(3.0), 0.2, 0.5, 6);
    for (const char* c : {"a", "bA", "ab"}) {
        auto lim = tree_ps::ps_limit_cylinder(2, W("a"), W(c), grid);
        CHECK(lim.extrapolated.value == doctest::Approx(lim.exact.to_double()).epsilon(1e-4));
    }
}

TEST_CASE("tree conformality, shadows and pair invariance are exact") {
    auto rep = tree_ps::conformal_check(2, W("a"), W("bA"), 4);
    CHECK(rep.max_defect == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(rep.cells == 108);
    // Shadow of a vertex seen from e with rho < 1 is its cylinder: ratio 3/4.
    for (const char* x : {"a", "ab", "bAAb"}) {
        auto sm = tree_ps::shadow_mass(2, Word(), W(x), 0.5);
        CHECK(sm.mass == tree::boundary_cylinder_measure(W(x), 2));
        CHECK(sm.ratio == doctest::Approx(0.75));
    }
    CHECK(tree_ps::shadow(2, Word(), W("a"), 0.5, 3).size() == 9);
    CHECK(tree_ps::pair_weight(2, W("a"), W("b")) == Rational(1, 16));
    CHECK(tree_ps::pair_weight(2, W("ab"), W("aB")) == Rational(1, 16));
    CHECK_THROWS(tree_ps::pair_weight(2, W("a"), W("ab")));
    auto inv = tree_ps::pair_invariance_check(2, 4, W("ab"));
    CHECK(inv.max_abs_defect == Rational(0));
    CHECK(inv.symmetric);
}

TEST_CASE("flow-box masses scale like e^{-h d(p, x)}") {
    double lo = 1e300, hi = 0.0;
    for (const char* x : {"aaa", "aaaa", "aaaaa", "aaaaaa"}) {
        auto d = tree_ps::d_mass(2, Word(), W(x), 2.5, 0.5);
        CHECK(d.mass > 0.0);
        lo = std::min(lo, d.scaled);
        hi = std::max(hi, d.scaled);
    }
    CHECK(hi / lo <= 2.0);
    CHECK_THROWS(tree_ps::d_mass(2, Word(), W("a"), 2.0, 1.5));
}

TEST_CASE("Neville extrapolation is exact on polynomials") {
    std::vector<double> u{0.4, 0.2, 0.1, 0.05}, v;
    for (double x : u) v.push_back(1.0 + 2.0 * x - 3.0 * x * x);
    auto e = extrapolate_to_zero(u, v);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
    auto g = geometric_s_grid(1.0, 0.4, 0.5, 3);
    CHECK(g == std::vector<double>{1.4, 1.2, 1.1});
}

TEST_CASE("plane shadows: closed-form half-angle against bisection") {
    plane::Point from{0, 1};
    for (auto [x, rho] : {std::pair{plane::Point{1.5, 3.0}, 0.5}, {plane::Point{-2, 0.3}, 1.0}, {plane::Point{0, 9}, 2.0}}) {
        double D = plane::distance(from, x);
        double closed = std::asin(std::sinh(rho) / std::sinh(D));
        CHECK(plane_ps::shadow(from, x, rho).half_angle == doctest::Approx(closed).epsilon(1e-10));
        CHECK(plane_ps::shadow_half_angle_bisection(from, x, rho) == doctest::Approx(closed).epsilon(1e-8));
    }
    CHECK_THROWS(plane_ps::shadow(from, plane::Point{0, 1.2}, 1.0));
}

TEST_CASE("arc partitions and the modular orbit") {
    plane_ps::ArcPartition part{plane::Point{0, 2}, 64};
    for (int c = 0; c < 64; ++c) CHECK(part.cell_of(part.representative(c)) == c);
    plane::Point x{0, 2};
    auto orbit = plane_ps::modular_orbit(x, 7.0);
    CHECK(orbit.points.size() == fuchsian::modular_ball(x, 7.0).size());
    for (const auto& y : orbit.points) CHECK(plane::distance(x, y) <= 7.0 + 1e-9);
    auto a = plane_ps::poincare_series(orbit, x, 1.5);
    auto b = plane_ps::poincare_series(orbit, x, 2.0);
    CHECK(a.partial > b.partial);
    CHECK_THROWS_AS(plane_ps::poincare_series(orbit, x, 1.0), DivergenceError);
    auto m = plane_ps::ps_measure(orbit, plane::Point{0.3, 1.5}, 2.0);
    CHECK(m.within_bounds());
}

TEST_CASE("plane limit masses and the pair measure") {
    plane::Point x{0, 2};
    auto orbit = plane_ps::modular_orbit(x, 9.0);
    plane_ps::ArcPartition part{x, 64};
    auto masses = plane_ps::limit_cell_masses(orbit, part, geometric_s_grid(1.0, 0.4, 0.5, 3));
    double total = 0.0;
    for (double w : masses) {
        CHECK(w >= 0.0);
        total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    auto pm = plane_ps::pair_measure(part, masses);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) CHECK(pm.at(i, j) == doctest::Approx(pm.at(j, i)).epsilon(1e-12));
    CHECK(pm.at(5, 5) == 0.0);
}

}  // TEST_SUITE
