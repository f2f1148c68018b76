#pragma once

// Free group F_k acting on its Cayley tree: exact words, cyclic words,
// ball enumeration and the visual measure on the boundary.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyplab/rational.hpp"

namespace hyplab::tree {

// Generator g (0-based) is encoded as +(g+1), its inverse as -(g+1).
using Letter = std::int8_t;

inline constexpr Letter inverse(Letter l) { return static_cast<Letter>(-l); }
inline constexpr int generator_index(Letter l) { return (l > 0 ? l : -l) - 1; }
// Ordering used for length-lexicographic streams: a < A < b < B < ...
inline constexpr int letter_order(Letter l) { return 2 * generator_index(l) + (l < 0 ? 1 : 0); }
inline constexpr Letter letter_from_order(int o) {
    return static_cast<Letter>((o % 2 == 0) ? (o / 2 + 1) : -(o / 2 + 1));
}

class InvalidWord : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A freely reduced word. The constructor from letters reduces; use
// Word::unchecked only when the letters are known to be reduced.
class Word {
public:
    Word() = default;
    explicit Word(std::span<const Letter> letters);
    static Word unchecked(std::vector<Letter> letters);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter back() const { return letters_.back(); }
    Word prefix(std::size_t n) const;

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

private:
    std::vector<Letter> letters_;
};

// Parses "aBb", "a b^-1 a", "a b b⁻¹ a" style input. Uppercase is the inverse.
Word parse_word(std::string_view text, int rank);
std::vector<Letter> parse_letters(std::string_view text, int rank);
std::string to_string(const Word& w);
std::string letter_string(Letter l);

// Free reduction with a stack; invalid letters (outside the rank) throw.
Word reduce(std::span<const Letter> letters, int rank);
bool is_reduced(std::span<const Letter> letters);

Word multiply(const Word& a, const Word& b);
Word inverse(const Word& w);
std::size_t common_prefix(const Word& a, const Word& b);
// Word metric on the Cayley tree: |u| + |v| - 2 lcp(u, v).
int distance(const Word& u, const Word& v);

bool is_cyclically_reduced(const Word& w);
Word least_rotation(const Word& w);
// True when w equals u^n for some n >= 2.
bool is_proper_power(const Word& w);

// Conjugacy class of a free-group element: cyclically reduced word up to rotation.
struct CyclicWord {
    Word canonical;  // lexicographically least rotation (letter_order)
    friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
    friend auto operator<=>(const CyclicWord&, const CyclicWord&) = default;
};

CyclicWord make_cyclic(const Word& cyclically_reduced);

struct CyclicReduction {
    CyclicWord cls;
    Word core;        // cyclically reduced, before rotation to canonical form
    Word conjugator;  // w = conjugator * core * conjugator^-1
    bool identity = false;
    int translation_length() const { return static_cast<int>(core.size()); }
};

CyclicReduction cyclic_reduce(const Word& w);

// Length-lexicographic stream of all reduced words of length <= radius.
void ball_enumerate(int rank, int radius, const std::function<void(const Word&)>& visit);
// Words of length <= radius that start with `prefix` (prefix included when its
// length is within the radius), length-lexicographic within the partition.
void ball_enumerate_with_prefix(int rank, int radius, const Word& prefix,
                                const std::function<void(const Word&)>& visit);
// Prefixes of the given depth partitioning the ball outside radius < depth.
std::vector<Word> partition_prefixes(int rank, int depth);

std::uint64_t sphere_count(int rank, int n);
std::uint64_t ball_count(int rank, int radius);

// Visual (limiting Patterson-Sullivan) measure of cylinder(prefix) seen from the identity.
Rational boundary_cylinder_measure(const Word& prefix, int rank);

// Boundary point: either an eventually periodic infinite reduced word
// prefix * cycle^infinity, or (cycle empty) the cylinder of all extensions of prefix.
class BoundaryPoint {
public:
    BoundaryPoint() = default;
    BoundaryPoint(Word prefix, Word cycle);
    static BoundaryPoint cylinder(Word prefix);
    static BoundaryPoint parse(std::string_view prefix, std::string_view cycle, int rank);

    const Word& prefix() const { return prefix_; }
    const Word& cycle() const { return cycle_; }
    bool is_cylinder() const { return cycle_.empty(); }
    // i-th letter; throws for cylinders beyond the prefix.
    Letter letter(std::size_t i) const;
    Word head(std::size_t n) const;
    std::string str() const;

    // Equal iff the infinite words coincide (rays at bounded distance).
    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b);

private:
    Word prefix_;
    Word cycle_;
};

// Longest common prefix of a finite word with a boundary point.
std::size_t common_prefix(const Word& w, const BoundaryPoint& xi);
// Longest common prefix of two distinct boundary points; nullopt if equal.
std::optional<std::size_t> common_prefix(const BoundaryPoint& a, const BoundaryPoint& b);

// Vertex at integer time t on the ray from p to xi.
Word ray_point(const Word& p, const BoundaryPoint& xi, long t);
// Vertex at integer time t on the line from xi (t -> -inf) to eta (t -> +inf);
// time 0 is the branch vertex nearest the identity.
Word line_point(const BoundaryPoint& xi, const BoundaryPoint& eta, long t);
// Vertex at integer time t on the segment from p to q.
Word segment_point(const Word& p, const Word& q, long t);

// b_p(q, xi) = lim_t d(q, ray_p(t)) - t, evaluated at a time past which the
// difference is constant.
long busemann(const Word& q, const Word& p, const BoundaryPoint& xi);
// beta_p(xi, eta) evaluated at a point q on the connecting line.
long gromov_beta(const Word& p, const BoundaryPoint& xi, const BoundaryPoint& eta, long q_time = 0);

// Left action of a group element on a boundary point given by prefix/cycle.
BoundaryPoint act(const Word& g, const BoundaryPoint& xi);

}  // namespace hyplab::tree
