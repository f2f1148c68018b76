#include <doctest.h>

#include <cmath>
#include <random>

#include "hyplab/space.hpp"

using namespace hyplab;

namespace {

// Thin-triangle defect by dense sampling along each side.
double defect_by_sampling(const plane::Point& a, const plane::Point& b, const plane::Point& c, int n = 5000) {
    auto side = [&](const plane::Point& p, const plane::Point& q, const plane::Point& r) {
        auto g = plane::segment_frame(p, q);
        double L = plane::distance(p, q), worst = 0.0;
        for (int i = 0; i <= n; ++i) {
            auto z = g.at(L * i / n);
            worst = std::max(worst, std::min(plane::distance_to_segment(z, p, r), plane::distance_to_segment(z, q, r)));
        }
        return worst;
    };
    return std::max({side(a, b, c), side(b, c, a), side(c, a, b)});
}

SpacePoint T(const char* w) { return SpacePoint::tree(tree::parse_word(w, 2)); }

}  // namespace

TEST_SUITE("space") {

TEST_CASE("distance dispatches by backend and rejects mixed points") {
    CHECK(distance(T("ab"), T("aB")) == 2.0);
    CHECK(distance(SpacePoint::flat(0, 0), SpacePoint::flat(3, 4)) == doctest::Approx(5.0));
    CHECK(distance(SpacePoint::plane(0, 1), SpacePoint::plane(0, std::exp(1.0))) == doctest::Approx(1.0));
    CHECK_THROWS_AS(distance(T("a"), SpacePoint::plane(0, 1)), BackendMismatch);
    CHECK_THROWS_AS(distance(T("a"), SpacePoint::tree(tree::Word(), 3)), BackendMismatch);
}

TEST_CASE("geodesic paths are unit speed and respect their domains") {
    auto seg = connect(T("ab"), T("aBB"));
    CHECK(seg.t_max == 3.0);
    CHECK(to_string(seg.point(1).word) == "a");
    CHECK_THROWS_AS(seg.point(0.5), DomainError);
    CHECK_THROWS_AS(seg.point(4), DomainError);
    auto p = SpacePoint::plane(0.3, 0.8), q = SpacePoint::plane(-2, 3);
    auto g = connect(p, q);
    CHECK(distance(g.point(0.5), p) == doctest::Approx(0.5));
    auto f = line(BoundaryPoint::flat(0.0), BoundaryPoint::flat(plane::kPi));
    CHECK(f.point(-2.0).x == doctest::Approx(2.0));
    CHECK_THROWS(line(BoundaryPoint::flat(0.0), BoundaryPoint::flat(1.0)));
    CHECK(connect(p, p).degenerate);
}

TEST_CASE("Busemann cocycle holds on every backend") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> X(-2, 2), Y(0.2, 3);
    for (int k = 0; k < 100; ++k) {
        auto p = SpacePoint::plane(X(rng), Y(rng)), q = SpacePoint::plane(X(rng), Y(rng)),
             z = SpacePoint::plane(X(rng), Y(rng));
        CHECK(busemann_cocycle_check(p, q, z, BoundaryPoint::plane(plane::Ext::at(X(rng)))) < 1e-9);
        auto fp = SpacePoint::flat(X(rng), X(rng)), fq = SpacePoint::flat(X(rng), X(rng)),
             fz = SpacePoint::flat(X(rng), X(rng));
        CHECK(busemann_cocycle_check(fp, fq, fz, BoundaryPoint::flat(X(rng))) < 1e-12);
    }
    auto xi = BoundaryPoint::tree(tree::BoundaryPoint::parse("bA", "Ab", 2));
    CHECK(busemann_cocycle_check(T("ab"), T("B"), T("bAA"), xi) == 0.0);
}

TEST_CASE("Gromov product on the flat plane is zero for opposite directions") {
    CHECK(gromov_beta(SpacePoint::flat(1, 2), BoundaryPoint::flat(0.0), BoundaryPoint::flat(plane::kPi), 0.7) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("triangle defect matches dense sampling") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 12; ++k) {
        auto a = plane_ball_sample(4.0, U(rng), U(rng));
        auto b = plane_ball_sample(4.0, U(rng), U(rng));
        auto c = plane_ball_sample(4.0, U(rng), U(rng));
        double exact = plane_triangle_defect(a, b, c), sampled = defect_by_sampling(a, b, c);
        CHECK(exact >= sampled - 1e-9);
        CHECK(exact == doctest::Approx(sampled).epsilon(1e-3));
    }
}

TEST_CASE("large equilateral triangles approach the ideal-triangle defect asinh 1") {
    plane::Point v[3];
    for (int i = 0; i < 3; ++i)
        v[i] = plane::geodesic_flow(plane::UnitVector{plane::Point{0, 1}, 2 * plane::kPi * i / 3}, 18.0).base;
    double d = plane_triangle_defect(v[0], v[1], v[2]);
    CHECK(d == doctest::Approx(std::asinh(1.0)).epsilon(1e-4));
}

TEST_CASE("hyperbolicity estimates per backend") {
    auto t = estimate_delta(Backend::Tree, 100, 5.0, 1);
    CHECK(t.delta == 0.0);
    CHECK(t.provenance == HyperbolicityConstant::Provenance::Exact);
    auto f = estimate_delta(Backend::Flat, 100, 4.0, 1);
    CHECK(f.provenance == HyperbolicityConstant::Provenance::UnboundedWitness);
    CHECK(f.delta == doctest::Approx(3.0));  // side 4 sqrt 3, defect side sqrt 3 / 4
    auto p1 = estimate_delta(Backend::Plane, 3000, 8.0, 5, 1);
    auto p3 = estimate_delta(Backend::Plane, 3000, 8.0, 5, 3);
    CHECK(p1.delta == p3.delta);
    CHECK(p1.witness == p3.witness);
    CHECK(p1.delta < std::asinh(1.0));
    CHECK(p1.delta > 0.5);
}

TEST_CASE("fellow-traveling deviation of tree segments") {
    auto c1 = connect(T(""), T("abab"));
    auto c2 = connect(T("B"), T("abaB"));
    // c2 = B, e, a, ab, aba, abaB trails c1 by one step.
    CHECK(fellow_traveling_deviation(c1, c2, 4.0) == 1.0);
    CHECK_THROWS_AS(fellow_traveling_deviation(c1, c2, 5.0), DomainError);
}

TEST_CASE("sampling on the ball is area-weighted") {
    // Fraction of samples within radius 1 of i should be (cosh 1 - 1)/(cosh 3 - 1).
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0, 1);
    int inside = 0, n = 200000;
    for (int k = 0; k < n; ++k)
        if (plane::distance(plane_ball_sample(3.0, U(rng), U(rng)), plane::Point{0, 1}) <= 1.0) ++inside;
    double expect = (std::cosh(1.0) - 1) / (std::cosh(3.0) - 1);
    CHECK(static_cast<double>(inside) / n == doctest::Approx(expect).epsilon(0.03));
}

}  // TEST_SUITE
