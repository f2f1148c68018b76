#pragma once

// Fuchsian groups acting on the upper half-plane. PSL(2,Z) is built in with
// exact integer arithmetic; other groups load float generator matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyplab/plane.hpp"

namespace hyplab::fuchsian {

using plane::MobiusMatrix;

// Integer matrix of determinant 1 modulo sign (first nonzero entry positive).
struct IntMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static IntMatrix identity() { return {1, 0, 0, 1}; }
    static IntMatrix canonical(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
    std::int64_t trace() const { return a + d; }
    std::int64_t det() const { return a * d - b * c; }
    IntMatrix inverse() const { return canonical(d, -b, -c, a); }
    MobiusMatrix to_float() const;
    std::string str() const;

    friend IntMatrix operator*(const IntMatrix& m, const IntMatrix& n);
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
    friend auto operator<=>(const IntMatrix&, const IntMatrix&) = default;
};

inline const IntMatrix kR{1, 1, 0, 1};
inline const IntMatrix kL{1, 0, 1, 1};
inline const IntMatrix kS{0, -1, 1, 0};

// Product of an R/L word ("RLL" etc.).
IntMatrix rl_word_matrix(const std::string& word);

struct FuchsianGroup {
    std::string name;
    std::vector<MobiusMatrix> generators;
    std::vector<IntMatrix> int_generators;  // populated for exact-integer groups
    double dedup_tol = 1e-9;
    bool exact_integer = false;

    static FuchsianGroup modular();
    // Loads float generators; rejects duplicates modulo dedup_tol.
    static FuchsianGroup from_generators(const std::vector<MobiusMatrix>& gens, double dedup_tol = 1e-9);
};

enum class IsometryKind { Hyperbolic, Parabolic, Elliptic };

struct TranslationLength {
    double length = 0.0;
    IsometryKind kind = IsometryKind::Hyperbolic;
};

// 2 arccosh(|tr|/2) for hyperbolic elements; 0 with a kind flag otherwise.
// Throws for +-identity.
TranslationLength translation_length(const MobiusMatrix& m, double tol = 1e-9);
double translation_length_from_trace(double abs_trace);

enum class Completeness { Certified, LinearBound, Incomplete };
std::string to_string(Completeness c);

struct GroupBall {
    std::vector<MobiusMatrix> elements;
    std::vector<int> word_lengths;
    std::vector<double> displacements;
    Completeness completeness = Completeness::Incomplete;
    int word_cap = 0;
    bool cap_binding = false;  // an element within R first appeared at the cap
    double kappa = 0.0, kappa_offset = 0.0;
};

// Breadth-first word enumeration with matrix deduplication.
GroupBall group_ball(const FuchsianGroup& g, const plane::Point& p, double radius, int word_cap);

// All gamma in PSL(2,Z) with d(p, gamma p) <= radius, enumerated by integer
// entry bounds; complete by construction.
std::vector<IntMatrix> modular_ball(const plane::Point& p, double radius);

struct ConjClass {
    MobiusMatrix representative;
    IntMatrix int_representative;
    double trace = 0.0;
    double length = 0.0;
    bool primitive = true;
    std::string word;  // rotation-minimal R/L word (modular only)
};

// Primitive hyperbolic conjugacy classes of PSL(2,Z) with length <= T, as
// Lyndon words over {R, L} containing both letters. Sorted by (length, word).
// `word_cap` limits the word length (defaults to a value that never binds).
std::vector<ConjClass> enumerate_conj_classes_modular(double T, std::optional<int> word_cap = std::nullopt,
                                                      unsigned workers = 1);

struct ClosedGeodesic {
    plane::Ext repelling;
    plane::Ext attracting;
    plane::Geodesic axis;
    double period = 0.0;
};

// Axis of a hyperbolic class oriented so that rep(axis(t)) = axis(t + period).
ClosedGeodesic closed_geodesic_path(const ConjClass& c);
ClosedGeodesic closed_geodesic_path(const MobiusMatrix& m);

// Cyclic R/L word of a hyperbolic element of PSL(2,Z) with positive entries
// (conjugates into the positive monoid first); nullopt if not hyperbolic.
std::optional<std::string> rl_cyclic_word(const IntMatrix& m);

// Heuristic class list for float groups: hyperbolic elements of the group ball,
// deduplicated by trace bucket and conjugation by short words.
std::vector<ConjClass> heuristic_conj_classes(const FuchsianGroup& g, double T, int word_cap);

}  // namespace hyplab::fuchsian
