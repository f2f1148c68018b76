#pragma once

// Closed-geodesic measures mu_T on the unit tangent bundle of the modular
// surface, tested against the Liouville measure on position x direction cells.

#include <string>
#include <vector>

#include "hyplab/counting.hpp"
#include "hyplab/plane.hpp"

namespace hyplab::equidist {

// Cell of the fundamental region {|x| <= 1/2, |z| >= 1} times a direction sector.
struct Cell {
    double y_lo = 0.0, y_hi = 0.0;          // height band (y_hi may be +inf)
    double angle_lo = 0.0, angle_hi = 0.0;  // tangent angle sector in [0, 2 pi)
    std::string label() const;
};

// Equal-area height bands times equal angle sectors.
std::vector<Cell> grid_cells(int height_bands, int sectors);

// Moves a unit vector into the fundamental region by the standard reduction.
plane::UnitVector fold(const plane::UnitVector& v);

// Liouville mass of a cell: normalized hyperbolic area (by quadrature in x)
// times the angular fraction.
double liouville_mass(const Cell& c);

struct CellRow {
    Cell cell;
    double mu_T = 0.0;
    double reference = 0.0;
    double gap() const { return mu_T - reference; }
};

struct EquidistributionTable {
    double T = 0.0;
    std::size_t geodesics = 0;
    double total_length = 0.0;
    double step = 0.0;
    std::vector<CellRow> rows;
    double max_gap() const;
};

// Time each class's unit-tangent lift spends in each cell, summed over the
// census and divided by the summed lengths (so that mu_T has mass 1).
EquidistributionTable equidistribution_test(const counting::GeodesicCensus& census, const std::vector<Cell>& cells,
                                            double step = 0.02, unsigned workers = 1);

}  // namespace hyplab::equidist
