#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "hyplab/counting.hpp"

using namespace hyplab;
using namespace hyplab::counting;

namespace {

// Primitive cyclically reduced words up to rotation, by brute force over all reduced words.
std::vector<std::uint64_t> necklaces_brute(int rank, int n_max) {
    std::vector<std::set<tree::Word>> by_len(n_max + 1);
    tree::ball_enumerate(rank, n_max, [&](const tree::Word& w) {
        if (w.empty() || !tree::is_cyclically_reduced(w) || tree::is_proper_power(w)) return;
        by_len[w.size()].insert(tree::least_rotation(w));
    });
    std::vector<std::uint64_t> out;
    for (const auto& s : by_len) out.push_back(s.size());
    return out;
}

// Hyperbolic conjugacy classes of PSL(2,Z) of trace t correspond to cycles of
// reduced indefinite forms of discriminant t^2 - 4 (Gauss reduction).
std::uint64_t form_cycles(std::int64_t D) {
    std::set<std::array<std::int64_t, 3>> forms;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(D)));
    while (r * r > D) --r;
    while ((r + 1) * (r + 1) <= D) ++r;
    for (std::int64_t B = r + 1; B <= D + 1; ++B) {
        if ((B * B - D) % 4) continue;
        std::int64_t N = (B * B - D) / 4;
        for (std::int64_t a = 1; a * a <= N; ++a) {
            if (N % a) continue;
            for (auto [A, C] : {std::pair{a, N / a}, {N / a, a}})
                if (B > A + C) forms.insert({A, B, C});
        }
    }
    std::set<std::array<std::int64_t, 3>> seen;
    std::uint64_t cycles = 0;
    for (const auto& f : forms) {
        if (seen.count(f)) continue;
        ++cycles;
        auto g = f;
        while (!seen.count(g)) {
            seen.insert(g);
            auto [A, B, C] = g;
            auto k = static_cast<std::int64_t>(std::ceil((B + std::sqrt(static_cast<double>(D))) / (2.0 * C)));
            g = {C, -B + 2 * C * k, A - B * k + C * k * k};
        }
    }
    return cycles;
}

// Primitive classes with |trace| <= 2 cosh(T/2), removing powers via Chebyshev traces.
std::uint64_t modular_prime_count(double T) {
    auto tmax = static_cast<std::int64_t>(std::floor(2 * std::cosh(T / 2)));
    std::map<std::int64_t, std::int64_t> prim;
    std::uint64_t total = 0;
    for (std::int64_t t = 3; t <= tmax; ++t) {
        auto p = static_cast<std::int64_t>(form_cycles(t * t - 4));
        for (std::int64_t t2 = 3; t2 < t; ++t2) {
            std::int64_t a = 2, b = t2;
            while (b < t) {
                std::int64_t c = t2 * b - a;
                a = b;
                b = c;
            }
            if (b == t) p -= prim[t2];
        }
        prim[t] = p;
        total += static_cast<std::uint64_t>(p);
    }
    return total;
}

}  // namespace

TEST_SUITE("counting") {

TEST_CASE("tree orbit counts are 2 3^R - 1") {
    std::vector<double> grid;
    for (int R = 0; R <= 10; ++R) grid.push_back(R);
    auto c = orbit_count(GroupSpec::tree(2), SpacePoint::tree(tree::Word()), grid);
    CHECK(c.all_complete());
    for (int R = 0; R <= 10; ++R)
        CHECK(c.entries[R].count == static_cast<std::uint64_t>(2 * std::pow(3, R) - 1));
    auto fit = fit_entropy(c);
    CHECK(fit.h == doctest::Approx(std::log(3.0)).epsilon(2e-3));
    auto gc = growth_constants(c, std::log(3.0), 4, 10);
    CHECK(gc.C2 <= 2.0);
    CHECK(gc.C1 >= 1.9);
}

TEST_CASE("flat orbit counts match a lattice-point scan") {
    for (double R : {0.5, 1.0, 2.5, 7.3}) {
        std::uint64_t n = 0;
        int m = static_cast<int>(R) + 1;
        for (int i = -m; i <= m; ++i)
            for (int j = -m; j <= m; ++j)
                if (i * i + j * j <= R * R) ++n;
        CHECK(flat::lattice_ball_count(R) == n);
    }
    auto c = orbit_count(GroupSpec::flat(), SpacePoint::flat(0.3, 0.1), {10, 20, 40, 80});
    CHECK(fit_entropy(c).h < 0.05);
}

TEST_CASE("modular ball is complete and agrees with word enumeration") {
    plane::Point x{0.0, 2.0};
    auto ball = fuchsian::modular_ball(x, 4.0);
    auto words = fuchsian::group_ball(fuchsian::FuchsianGroup::modular(), x, 4.0, 20);
    CHECK(words.completeness != fuchsian::Completeness::Incomplete);
    CHECK(ball.size() == words.elements.size());
    for (const auto& g : ball) CHECK(plane::distance(x, g.to_float().apply(x)) <= 4.0 + 1e-9);
    // A binding word cap is reported, not hidden.
    auto short_words = fuchsian::group_ball(fuchsian::FuchsianGroup::modular(), x, 4.0, 14);
    CHECK(short_words.cap_binding);
    CHECK(short_words.completeness == fuchsian::Completeness::Incomplete);
}

TEST_CASE("necklace counts: brute force, transfer matrix and enumeration agree") {
    auto brute = necklaces_brute(2, 8);
    auto transfer = necklace_counts_transfer(2, 8);
    auto listed = tree_necklaces(2, 8);
    std::vector<std::uint64_t> by_len(9, 0);
    for (const auto& c : listed) ++by_len[c.canonical.size()];
    for (int n = 1; n <= 8; ++n) {
        CHECK(transfer[n] == brute[n]);
        CHECK(by_len[n] == brute[n]);
    }
    CHECK(brute[1] == 4);
    CHECK(brute[2] == 4);
    auto t3 = necklace_counts_transfer(3, 5);
    auto b3 = necklaces_brute(3, 5);
    for (int n = 1; n <= 5; ++n) CHECK(t3[n] == b3[n]);
}

TEST_CASE("modular prime geodesic counts match the reduced-form oracle") {
    auto census = geodesic_census(GroupSpec::modular(), 10.0);
    for (double T : {6.0, 7.0, 8.0, 9.0, 10.0}) CHECK(census.P(T) == modular_prime_count(T));
    CHECK(census.P(6.0) == 74);
    CHECK(census.P(10.0) == 2451);
    const auto& first = census.entries.front();
    CHECK(first.key == "LR");
    CHECK(first.length == doctest::Approx(2 * std::acosh(1.5)).epsilon(1e-12));
}

TEST_CASE("translation lengths and R/L words") {
    CHECK(fuchsian::translation_length_from_trace(3.0) == doctest::Approx(2 * std::acosh(1.5)));
    auto m = fuchsian::rl_word_matrix("RL");
    CHECK(m.trace() == 3);
    CHECK(*fuchsian::rl_cyclic_word(m) == "LR");
    CHECK(!fuchsian::rl_cyclic_word(fuchsian::kR));
    CHECK(fuchsian::translation_length(fuchsian::kR.to_float()).kind == fuchsian::IsometryKind::Parabolic);
    CHECK(fuchsian::translation_length(fuchsian::kS.to_float()).kind == fuchsian::IsometryKind::Elliptic);
    // Conjugation leaves the cyclic word unchanged.
    auto g = fuchsian::rl_word_matrix("RRLRL");
    auto h = fuchsian::kS * fuchsian::kR;
    CHECK(*fuchsian::rl_cyclic_word(h * g * h.inverse()) == *fuchsian::rl_cyclic_word(g));
}

TEST_CASE("primitivity tests") {
    CHECK(primitive_test(tree::parse_word("abAB", 2)).primitive);
    CHECK(!primitive_test(tree::parse_word("abab", 2)).primitive);
    CHECK(!primitive_test(tree::parse_word("Bababb", 2)).primitive);  // conjugate of (ab)^2
    CHECK(primitive_test(fuchsian::rl_word_matrix("RRL")).primitive);
    CHECK(!primitive_test(fuchsian::rl_word_matrix("RLRL")).primitive);
    CHECK_THROWS(primitive_test(tree::Word()));
}

TEST_CASE("Margulis ratio and counting constant on the tree census") {
    auto census = geodesic_census(GroupSpec::tree(2), 10.0);
    double h = std::log(3.0);
    CHECK(margulis_ratio(census, h, 10.0) ==
          doctest::Approx(census.P(10.0) * h * 10.0 / std::pow(3.0, 10.0)));
    CHECK_THROWS(margulis_ratio(census, h, 11.0));
    std::vector<double> grid{4, 5, 6, 7, 8, 9, 10};
    double A = counting_constant(census, h, grid);
    CHECK(A >= 1.0);
    CHECK(A <= 5.0);
    for (double t : grid) {
        double P = static_cast<double>(census.P(t));
        CHECK(P <= A * std::exp(h * t) * (1 + 1e-12));
        CHECK(P * A * t >= std::exp(h * t) * (1 - 1e-12));
    }
}

}  // TEST_SUITE
