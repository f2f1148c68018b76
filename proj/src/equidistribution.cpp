#include "hyplab/equidistribution.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hyplab/fuchsian.hpp"
#include "hyplab/parallel.hpp"

namespace hyplab::equidist {

using plane::kPi;
using plane::MobiusMatrix;
using plane::UnitVector;

std::string Cell::label() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "y[%.6g,%.6g)a[%.6g,%.6g)", y_lo, y_hi, angle_lo, angle_hi);
    return buf;
}

std::vector<Cell> grid_cells(int height_bands, int sectors) {
    if (height_bands < 1 || sectors < 1) throw std::invalid_argument("need at least one band and one sector");
    // Area above height Y >= 1 is 1/Y out of pi/3; the lowest band also holds
    // the part below y = 1, whose area is smaller than one band.
    double quarter = kPi / 3 / height_bands;
    std::vector<double> cuts{0.0};
    for (int i = height_bands - 1; i >= 1; --i) cuts.push_back(1.0 / (i * quarter));
    cuts.push_back(std::numeric_limits<double>::infinity());
    std::vector<Cell> out;
    for (int b = 0; b < height_bands; ++b)
        for (int s = 0; s < sectors; ++s)
            out.push_back({cuts[b], cuts[b + 1], 2 * kPi * s / sectors, 2 * kPi * (s + 1) / sectors});
    return out;
}

UnitVector fold(const UnitVector& v) {
    static const MobiusMatrix S{0, -1, 1, 0};
    UnitVector w = v;
    for (int it = 0; it < 10000; ++it) {
        double n = std::round(w.base.x);
        if (n != 0.0) w.base.x -= n;  // translations keep the angle
        double r2 = w.base.x * w.base.x + w.base.y * w.base.y;
        if (r2 >= 1.0 - 1e-13) return w;
        w = S.apply(w);
    }
    throw std::runtime_error("fundamental-domain reduction did not terminate");
}

double liouville_mass(const Cell& c) {
    // Hyperbolic area of {|x| <= 1/2, y >= max(y_lo, sqrt(1 - x^2)), y < y_hi}
    // by composite Simpson in x.
    auto column = [&](double x) {
        double lo = std::max(c.y_lo, std::sqrt(1.0 - x * x));
        if (!(c.y_hi > lo)) return 0.0;
        return 1.0 / lo - (std::isinf(c.y_hi) ? 0.0 : 1.0 / c.y_hi);
    };
    const int n = 4000;
    double h = 1.0 / n, sum = column(-0.5) + column(0.5);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * column(-0.5 + i * h);
    double area = sum * h / 3.0;
    return area / (kPi / 3) * (c.angle_hi - c.angle_lo) / (2 * kPi);
}

double EquidistributionTable::max_gap() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.gap()));
    return m;
}

namespace {

bool in_cell(const Cell& c, const UnitVector& v) {
    return v.base.y >= c.y_lo && v.base.y < c.y_hi && v.angle >= c.angle_lo && v.angle < c.angle_hi;
}

}  // namespace

EquidistributionTable equidistribution_test(const counting::GeodesicCensus& census, const std::vector<Cell>& cells,
                                            double step, unsigned workers) {
    if (census.backend != "modular") throw std::invalid_argument("equidistribution needs the modular census");
    if (!census.exact) throw std::invalid_argument("census incomplete at T");
    if (!(step > 0)) throw std::invalid_argument("step must be positive");
    EquidistributionTable table;
    table.T = census.T;
    table.step = step;
    table.geodesics = census.entries.size();
    constexpr std::size_t kChunks = 64;
    struct Partial {
        std::vector<double> time;
        double length = 0.0;
    };
    auto parts = parallel_chunks(kChunks, workers, [&](std::size_t chunk) {
        Partial p;
        p.time.assign(cells.size(), 0.0);
        for (std::size_t i = chunk; i < census.entries.size(); i += kChunks) {
            const auto& e = census.entries[i];
            auto g = fuchsian::closed_geodesic_path(e.cls);
            int steps = std::max(1, static_cast<int>(std::ceil(g.period / step)));
            double dt = g.period / steps;
            for (int k = 0; k < steps; ++k) {
                // Midpoint rule along the axis.
                double t = (k + 0.5) * dt;
                UnitVector v = g.axis.frame.apply(UnitVector{plane::Point{0.0, std::exp(t)}, kPi / 2});
                v = fold(v);
                for (std::size_t c = 0; c < cells.size(); ++c)
                    if (in_cell(cells[c], v)) p.time[c] += dt;
            }
            p.length += g.period;
        }
        return p;
    });
    std::vector<double> time(cells.size(), 0.0);
    for (const auto& p : parts) {
        table.total_length += p.length;
        for (std::size_t c = 0; c < cells.size(); ++c) time[c] += p.time[c];
    }
    for (std::size_t c = 0; c < cells.size(); ++c)
        table.rows.push_back({cells[c], table.total_length > 0 ? time[c] / table.total_length : 0.0,
                              liouville_mass(cells[c])});
    return table;
}

}  // namespace hyplab::equidist
