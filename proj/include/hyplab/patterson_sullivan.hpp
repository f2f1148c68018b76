#pragma once

// Poincare series, orbit measures nu_{p,x,s}, their boundary limits,
// conformality, shadows, the geodesic-current pair measure and the
// flow-box validators, on the tree (exact) and the modular plane (numerical).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyplab/fuchsian.hpp"
#include "hyplab/plane.hpp"
#include "hyplab/rational.hpp"
#include "hyplab/tree.hpp"

namespace hyplab::ps {

// Raised for s <= h, where the Poincare series diverges.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct SeriesValue {
    double s = 0.0;
    double h = 0.0;
    double cap = 0.0;
    double partial = 0.0;  // sum over gamma with d(p, gamma q) <= cap
    double tail = 0.0;     // upper bound for the remaining terms
    double growth_constant = 0.0;  // C2 used in the tail bound
};

// Polynomial (Neville) extrapolation of values sampled at u_i = s_i - h to u = 0.
struct Extrapolation {
    double value = 0.0;
    double error = 0.0;   // difference between the two highest orders
    bool cauchy = true;   // false when the error does not shrink with the order
};
Extrapolation extrapolate_to_zero(const std::vector<double>& u, const std::vector<double>& values);

// Geometric grid s_i = h + u0 * ratio^i.
std::vector<double> geometric_s_grid(double h, double u0, double ratio, int count);

struct Atom {
    std::string label;  // word or coordinates of the orbit point
    double weight = 0.0;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;
    double total = 0.0;
    double tail = 0.0;  // bound on the mass beyond the cap
    double s = 0.0, cap = 0.0;
    std::string p, x;
    double lower_bound = 0.0, upper_bound = 0.0;  // e^{-s d(p,x)}, e^{s d(p,x)}
    bool within_bounds() const { return total >= lower_bound - tail && total <= upper_bound + tail; }
};

// ---------------------------------------------------------------- tree

namespace tree_ps {

double critical_exponent(int rank);

// P(s, p, q) on F_k. The sum depends only on the shell counts of d(p, gamma q),
// which equal the sphere counts; truncated at d <= cap.
SeriesValue poincare_series(int rank, double s, const tree::Word& p, const tree::Word& q, int cap);
// Same partial sum by direct enumeration of the group ball (oracle, small caps).
double poincare_series_enumerated(int rank, double s, const tree::Word& p, const tree::Word& q, int cap);
// 1 + 2k x / (1 - (2k-1) x), x = e^{-s}.
double poincare_closed_form(int rank, double s);

// Atoms gamma x (x = identity) weighted e^{-s d(p, gamma)} / P(s, e, e), |gamma| <= cap.
AtomicMeasure ps_measure(int rank, const tree::Word& p, double s, int cap);

// nu_{p,e,s}(cylinder(c)) with no truncation: atoms w extending c that are not
// prefixes of p (those finitely many atoms carry no boundary mass in the limit).
double cylinder_mass(int rank, const tree::Word& p, const tree::Word& c, double s);

// Exact limit measure nu_p(cylinder(c)) = integral of (2k-1)^{-b_e(p, xi)} d nu_e.
Rational exact_cylinder_measure(int rank, const tree::Word& p, const tree::Word& c);

struct LimitCylinder {
    Extrapolation extrapolated;
    Rational exact;
    double s_min = 0.0;
};
LimitCylinder ps_limit_cylinder(int rank, const tree::Word& p, const tree::Word& c, const std::vector<double>& s_grid);

// All reduced words of the given length (boundary partition into cylinders).
std::vector<tree::Word> cylinders(int rank, int depth);
// Representative boundary point of a cylinder: c followed by a repeated letter.
tree::BoundaryPoint representative(int rank, const tree::Word& c);

struct ConformalReport {
    double max_defect = 0.0;          // exact route, in units of log
    double max_defect_extrapolated = 0.0;
    std::size_t cells = 0;
    std::size_t excluded = 0;         // zero-mass cells
};
// log(nu_q(c) / nu_p(c)) + h b_p(q, xi_c) over all cylinders of the depth.
ConformalReport conformal_check(int rank, const tree::Word& p, const tree::Word& q, int depth,
                                const std::vector<double>& s_grid = {});

// Boundary points whose ray from `from` meets the open ball B(center, rho),
// listed as cylinders of the given depth (exact once depth exceeds
// |from| + |center| + rho).
std::vector<tree::Word> shadow(int rank, const tree::Word& from, const tree::Word& center, double rho, int depth);
bool ray_meets_ball(const tree::Word& from, const tree::BoundaryPoint& xi, const tree::Word& center, double rho);

struct ShadowMass {
    Rational mass;
    double ratio = 0.0;  // mass * e^{h d(p, x)}
};
// nu_p of the shadow of B(x, rho) seen from p.
ShadowMass shadow_mass(int rank, const tree::Word& p, const tree::Word& x, double rho);
// nu_p of the shadow of B(p, rho) seen from x.
Rational shadow_mass_from(int rank, const tree::Word& p, const tree::Word& x, double rho);

// mu-bar(C1 x C2) = (2k-1)^{2 lcp} nu_e(C1) nu_e(C2) for disjoint cylinders.
Rational pair_weight(int rank, const tree::Word& c1, const tree::Word& c2);

struct PairInvariance {
    Rational max_abs_defect;
    std::size_t pairs = 0;
    bool symmetric = true;
};
// Compares mu-bar(A x B) with mu-bar(gA x gB) over all distinct cylinder pairs of the depth.
PairInvariance pair_invariance_check(int rank, int depth, const tree::Word& g);

struct DMass {
    double mass = 0.0;
    double scaled = 0.0;  // mass * e^{h d(p, x)}
};
// Flow-box mass of D(x, R', R): vectors based in B(p, R') whose forward
// geodesic enters B(x, R), under mu-bar x Lebesgue. Requires R <= 1 and d(p, x) > R.
DMass d_mass(int rank, const tree::Word& p, const tree::Word& x, double R_prime, double R);

struct SeparatedReport {
    std::size_t cardinality = 0;
    std::size_t sample_size = 0;
};
// Greedy maximal (d_n, 2 r0)-separated subset of D(x, R', R), r0 = 3 rho,
// sampled exhaustively over vertex base points in B(p, R').
SeparatedReport separated_bound(int rank, const tree::Word& p, const tree::Word& x, int n, double rho,
                                double R_prime, double R);

}  // namespace tree_ps

// --------------------------------------------------------------- plane

namespace plane_ps {

// Boundary partition into arcs of equal visual angle at `center`.
struct ArcPartition {
    plane::Point center;
    int arcs = 256;
    double width() const;
    int cell_of(const plane::Ext& xi) const;
    int cell_of_angle(double angle) const;
    plane::Ext representative(int cell) const;  // midpoint direction
    double mid_angle(int cell) const;
};

// Orbit data shared by the modular-plane measures: the certified ball about x.
struct Orbit {
    plane::Point x;
    double cap = 0.0;
    std::vector<plane::Point> points;  // gamma x
};
Orbit modular_orbit(const plane::Point& x, double cap);

// P(s, p, x) over the orbit, tail bound from the measured growth constant.
SeriesValue poincare_series(const Orbit& orbit, const plane::Point& p, double s, double h = 1.0);

AtomicMeasure ps_measure(const Orbit& orbit, const plane::Point& p, double s, double h = 1.0);

// Unnormalized cell sums of e^{-s d(view, gamma x)} over the atoms with
// inner < d(center, gamma x) <= radius (default radius: the certified range),
// each assigned to the cell containing the direction of gamma x from the
// partition center.
std::vector<double> cell_sums(const Orbit& orbit, const plane::Point& view, const ArcPartition& part, double s,
                              double radius = -1.0, double inner = 0.0);

struct ConformalReport {
    double max_defect = 0.0;
    double mean_defect = 0.0;
    std::size_t cells = 0;
    std::size_t excluded = 0;
};
// Extrapolates log(nu_q(c)/nu_p(c)) along s_grid to s = h and compares with
// -h b_p(q, xi_c) at the cell midpoints.
ConformalReport conformal_check(const Orbit& orbit, const plane::Point& p, const plane::Point& q,
                                const ArcPartition& part, const std::vector<double>& s_grid, double h = 1.0);

// Limit cell masses nu_p(cell) (normalized to total mass 1) by extrapolation in s.
std::vector<double> limit_cell_masses(const Orbit& orbit, const ArcPartition& part,
                                      const std::vector<double>& s_grid, double h = 1.0);

struct ShadowArc {
    double center_angle = 0.0;  // direction from the viewpoint to the ball center
    double half_angle = 0.0;
    plane::Ext left, right;     // boundary endpoints
};
// Shadow of B(center, rho) seen from `from`; throws when from is inside the ball.
ShadowArc shadow(const plane::Point& from, const plane::Point& center, double rho);
// Half-angle found by bisection on the distance from the center to the ray.
double shadow_half_angle_bisection(const plane::Point& from, const plane::Point& center, double rho);

struct ShadowMass {
    double mass = 0.0;
    double ratio = 0.0;  // mass * e^{h d(p, x)}
    bool resolved = true;  // shadow wider than one cell
};
// nu_p(shadow of B(x, rho) from p) with cell masses spread uniformly in angle inside each cell.
ShadowMass shadow_mass(const ArcPartition& part, const std::vector<double>& masses, const plane::Point& x,
                       double rho, double h = 1.0);

struct PairMeasure {
    int cells = 0;
    std::vector<double> weight;  // row-major cells x cells, 0 on the excluded band
    std::size_t excluded = 0;
    double at(int i, int j) const { return weight[static_cast<std::size_t>(i) * cells + j]; }
};
PairMeasure pair_measure(const ArcPartition& part, const std::vector<double>& masses, double h = 1.0,
                         double weight_cap = 1e6);

struct PairInvariance {
    double max_rel_defect = 0.0;
    int blocks = 0;
    std::size_t compared = 0;
};
// Pushes the pair measure forward by gamma (sub-sampled re-binning), aggregates
// both into blocks and compares block pairs at least two blocks apart.
PairInvariance pair_invariance_check(const ArcPartition& part, const PairMeasure& pm,
                                     const plane::MobiusMatrix& gamma, int blocks = 16, int subsamples = 8);

}  // namespace plane_ps

}  // namespace hyplab::ps
