#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "hyplab/tree.hpp"

using namespace hyplab;
using namespace hyplab::tree;

namespace {

Word W(const char* s) { return parse_word(s, 2); }

// Repeatedly scans for an adjacent cancelling pair until none is left.
std::vector<Letter> naive_reduce(std::vector<Letter> v) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            if (v[i] == inverse(v[i + 1])) {
                v.erase(v.begin() + i, v.begin() + i + 2);
                changed = true;
                break;
            }
    }
    return v;
}

// Breadth-first search on the Cayley graph, words as reduced letter vectors.
std::vector<std::uint64_t> bfs_ball_counts(int rank, int radius) {
    std::set<std::vector<Letter>> seen{{}};
    std::vector<std::vector<Letter>> frontier{{}};
    std::vector<std::uint64_t> counts{1};
    for (int r = 1; r <= radius; ++r) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : frontier)
            for (int g = 1; g <= rank; ++g)
                for (Letter l : {static_cast<Letter>(g), static_cast<Letter>(-g)}) {
                    auto v = w;
                    v.push_back(l);
                    v = naive_reduce(v);
                    if (seen.insert(v).second) next.push_back(v);
                }
        frontier = std::move(next);
        counts.push_back(seen.size());
    }
    return counts;
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("reduce examples") {
    CHECK(to_string(Word(parse_letters("a b b^-1 a", 2))) == "aa");
    CHECK(Word(parse_letters("a A", 2)).empty());
    CHECK(to_string(W("a b b⁻¹ a")) == "aa");
    CHECK_THROWS_AS(parse_word("c", 2), InvalidWord);
}

TEST_CASE("reduce matches the repeated-scan reducer on random strings") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Letter> v;
        for (int i = 0; i < 20; ++i) v.push_back(letter_from_order(static_cast<int>(rng() % 4)));
        auto w = reduce(v, 2);
        CHECK(w.letters() == naive_reduce(v));
        CHECK(is_reduced(w.letters()));
        CHECK(reduce(w.letters(), 2) == w);
    }
}

TEST_CASE("distance is |u| + |v| - 2 lcp") {
    CHECK(distance(W("ab"), W("aB")) == 2);
    CHECK(distance(Word(), W("abab")) == 4);
    CHECK(distance(W("ab"), W("ab")) == 0);
}

TEST_CASE("cyclic reduction examples") {
    auto r = cyclic_reduce(W("abA"));
    CHECK(to_string(r.cls.canonical) == "b");
    CHECK(to_string(r.conjugator) == "a");
    CHECK(r.translation_length() == 1);
    auto c = cyclic_reduce(W("abAB"));
    CHECK(c.translation_length() == 4);
    CHECK(cyclic_reduce(Word()).identity);
}

TEST_CASE("translation length equals the brute-force displacement infimum") {
    // min over vertices x with |x| <= 6 of d(x, w x)
    std::vector<Word> xs;
    ball_enumerate(2, 6, [&](const Word& w) { xs.push_back(w); });
    std::vector<Word> ws;
    ball_enumerate(2, 4, [&](const Word& w) { ws.push_back(w); });
    for (const auto& w : ws) {
        if (w.empty()) continue;
        int best = 1 << 30;
        for (const auto& x : xs) best = std::min(best, distance(x, multiply(w, x)));
        CHECK(cyclic_reduce(w).translation_length() == best);
    }
}

TEST_CASE("ball counts match breadth-first search") {
    auto bfs = bfs_ball_counts(2, 6);
    std::vector<std::uint64_t> expect{1, 5, 17, 53, 161, 485, 1457};
    CHECK(bfs == expect);
    for (int r = 0; r <= 6; ++r) CHECK(ball_count(2, r) == bfs[r]);
    std::uint64_t streamed = 0;
    ball_enumerate(2, 10, [&](const Word&) { ++streamed; });
    CHECK(streamed == 118097);
    CHECK(ball_count(3, 4) == bfs_ball_counts(3, 4)[4]);
}

TEST_CASE("sphere counts 2k (2k-1)^(n-1) against the stream") {
    for (int rank : {2, 3}) {
        std::vector<std::uint64_t> by_len(9, 0);
        ball_enumerate(rank, 8, [&](const Word& w) { ++by_len[w.size()]; });
        for (int n = 1; n <= 8; ++n) CHECK(sphere_count(rank, n) == by_len[n]);
    }
}

TEST_CASE("ball stream is length-lexicographic and prefix partitions cover it") {
    std::vector<Word> all;
    ball_enumerate(2, 5, [&](const Word& w) { all.push_back(w); });
    for (std::size_t i = 1; i < all.size(); ++i) {
        const auto &a = all[i - 1], &b = all[i];
        if (a.size() != b.size()) {
            CHECK(a.size() < b.size());
            continue;
        }
        std::vector<int> oa, ob;
        for (auto l : a.letters()) oa.push_back(letter_order(l));
        for (auto l : b.letters()) ob.push_back(letter_order(l));
        CHECK(oa < ob);
    }
    std::set<Word> parts;
    std::uint64_t n = 1 + 4 + 12;  // below the partition depth
    for (const auto& p : partition_prefixes(2, 3))
        ball_enumerate_with_prefix(2, 5, p, [&](const Word& w) {
            if (w.size() >= 3) {
                parts.insert(w);
                ++n;
            }
        });
    CHECK(n == all.size());
    CHECK(parts.size() + 17 == all.size());
}

TEST_CASE("visual measure of cylinders") {
    CHECK(boundary_cylinder_measure(W("a"), 2) == Rational(1, 4));
    CHECK(boundary_cylinder_measure(W("ab"), 2) == Rational(1, 12));
    // Additivity over children down to depth 6.
    std::vector<Word> words;
    ball_enumerate(2, 5, [&](const Word& w) { words.push_back(w); });
    for (const auto& c : words) {
        if (c.empty()) continue;
        Rational kids(0);
        for (int o = 0; o < 4; ++o) {
            Letter l = letter_from_order(o);
            if (l == inverse(c.back())) continue;
            auto v = c.letters();
            v.push_back(l);
            kids += boundary_cylinder_measure(Word::unchecked(v), 2);
        }
        CHECK(kids == boundary_cylinder_measure(c, 2));
    }
}

TEST_CASE("boundary points, rays and lines") {
    auto a_inf = BoundaryPoint::parse("", "a", 2);
    CHECK(to_string(ray_point(Word(), a_inf, 3)) == "aaa");
    // From b the ray toward a^inf passes through e.
    CHECK(ray_point(W("b"), a_inf, 1).empty());
    CHECK(to_string(ray_point(W("b"), a_inf, 3)) == "aa");
    auto A_inf = BoundaryPoint::parse("", "A", 2), b_inf = BoundaryPoint::parse("", "b", 2);
    CHECK(line_point(A_inf, b_inf, 0).empty());
    CHECK(to_string(line_point(A_inf, b_inf, 2)) == "bb");
    CHECK(to_string(line_point(A_inf, b_inf, -2)) == "AA");
    CHECK(BoundaryPoint::parse("aa", "a", 2) == a_inf);
    CHECK(!(BoundaryPoint::parse("ab", "a", 2) == a_inf));
}

TEST_CASE("tree Busemann and Gromov products") {
    auto a_inf = BoundaryPoint::parse("", "a", 2);
    CHECK(busemann(W("ab"), Word(), a_inf) == 0);
    CHECK(busemann(W("a"), Word(), a_inf) == -1);
    CHECK(busemann(W("b"), Word(), a_inf) == 1);
    auto ab_inf = BoundaryPoint::parse("a", "b", 2);
    CHECK(gromov_beta(Word(), ab_inf, a_inf) == 2);
    CHECK(gromov_beta(Word(), a_inf, BoundaryPoint::parse("", "b", 2)) == 0);
}

TEST_CASE("translation length is conjugation and inversion invariant") {
    std::vector<Word> ws;
    ball_enumerate(2, 4, [&](const Word& w) { ws.push_back(w); });
    for (const auto& g : ws) {
        if (g.empty()) continue;
        int l = cyclic_reduce(g).translation_length();
        CHECK(cyclic_reduce(inverse(g)).translation_length() == l);
        for (const auto& a : {W("a"), W("bA"), W("abb")})
            CHECK(cyclic_reduce(multiply(multiply(a, g), inverse(a))).translation_length() == l);
    }
}

}  // TEST_SUITE
