#pragma once

// Orbit growth, entropy fits, closed-geodesic censuses and Margulis ratios.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyplab/fuchsian.hpp"
#include "hyplab/space.hpp"
#include "hyplab/tree.hpp"

namespace hyplab::counting {

// Which group an experiment runs on.
struct GroupSpec {
    enum class Kind { Tree, Modular, Fuchsian, Flat };
    Kind kind = Kind::Tree;
    int rank = 2;                             // tree
    fuchsian::FuchsianGroup group;            // modular / custom generators
    int word_cap = 16;                        // custom fuchsian groups only
    std::string name() const;

    static GroupSpec tree(int rank);
    static GroupSpec modular();
    static GroupSpec fuchsian(fuchsian::FuchsianGroup g, int word_cap);
    static GroupSpec flat();
};

struct CensusEntry {
    double R = 0.0;
    std::uint64_t count = 0;
    bool complete = true;
};

struct OrbitCensus {
    std::string backend;
    SpacePoint base;
    std::vector<CensusEntry> entries;
    bool all_complete() const;
};

// Card of {gamma : d(x, gamma x) <= R} for each R of an increasing grid.
// Tree counts are exact; modular counts come from the certified integer ball;
// custom groups use the word-capped ball and carry its completeness flag.
OrbitCensus orbit_count(const GroupSpec& g, const SpacePoint& base, const std::vector<double>& R_grid);

struct EntropyEstimate {
    double h = 0.0;
    double R_min = 0.0, R_max = 0.0;
    double residual = 0.0;  // RMS residual of the log-count fit
    double C1 = 0.0, C2 = 0.0;
};

// Least-squares slope of log(count) against R over the upper half of the
// census; C1, C2 are the min and max of count e^{-hR} over that window.
EntropyEstimate fit_entropy(const OrbitCensus& census);
// Same constants for a prescribed h over an explicit window.
EntropyEstimate growth_constants(const OrbitCensus& census, double h, double R_min, double R_max);

struct GeodesicEntry {
    double length = 0.0;
    std::string key;  // canonical cyclic word
    fuchsian::ConjClass cls;
};

struct GeodesicCensus {
    std::string backend;
    double T = 0.0;
    double h = 0.0;
    bool exact = true;  // false for heuristic float-group censuses
    std::vector<GeodesicEntry> entries;  // sorted by (length, key)
    // Right-continuous counting function.
    std::uint64_t P(double t) const;
};

// Primitive oriented necklaces over the 2k letters of F_k, i.e. primitive
// cyclically reduced words up to rotation, with length <= T.
std::vector<tree::CyclicWord> tree_necklaces(int rank, int max_length, unsigned workers = 1);
// Count of primitive cyclically reduced necklaces of each length 1..n by
// Moebius inversion of traces of the non-backtracking transfer matrix.
std::vector<std::uint64_t> necklace_counts_transfer(int rank, int max_length);

GeodesicCensus geodesic_census(const GroupSpec& g, double T, unsigned workers = 1);

// P(t) h t / e^{h t}. Throws beyond the census range.
double margulis_ratio(const GeodesicCensus& census, double h, double t);

struct PrimitiveResult {
    bool primitive = false;
    bool heuristic = false;
    std::string word;
};

PrimitiveResult primitive_test(const tree::Word& w);
PrimitiveResult primitive_test(const fuchsian::IntMatrix& m);
// Generic float element: power heuristic against a class list.
PrimitiveResult primitive_test(const plane::MobiusMatrix& m, const std::vector<fuchsian::ConjClass>& shorter);

// Smallest A with (1/A) e^{ht}/t <= P(t) <= A e^{ht} on the given t grid.
double counting_constant(const GeodesicCensus& census, double h, const std::vector<double>& t_grid);

}  // namespace hyplab::counting
