#include "hyplab/patterson_sullivan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyplab::ps {

namespace {

// Value at 0 of the interpolating polynomial through (u[i], v[i]) for i in idx.
double neville_at_zero(const std::vector<double>& u, const std::vector<double>& v, const std::vector<std::size_t>& idx) {
    std::vector<double> p;
    for (std::size_t i : idx) p.push_back(v[i]);
    std::size_t n = idx.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i) {
            double ui = u[idx[i]], uk = u[idx[i + k]];
            p[i] = (uk * p[i] - ui * p[i + 1]) / (uk - ui);
        }
    return p[0];
}

}  // namespace

Extrapolation extrapolate_to_zero(const std::vector<double>& u, const std::vector<double>& values) {
    if (u.size() != values.size() || u.empty()) throw std::invalid_argument("extrapolation needs matching samples");
    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
    std::vector<double> est;
    for (std::size_t m = 1; m <= order.size(); ++m)
        est.push_back(neville_at_zero(u, values, std::vector<std::size_t>(order.begin(), order.begin() + m)));
    Extrapolation e;
    e.value = est.back();
    if (est.size() >= 2) e.error = std::abs(est.back() - est[est.size() - 2]);
    if (est.size() >= 3) {
        double prev = std::abs(est[est.size() - 2] - est[est.size() - 3]);
        e.cauchy = e.error <= prev || e.error <= 1e-12 * std::max(1.0, std::abs(e.value));
    }
    return e;
}

std::vector<double> geometric_s_grid(double h, double u0, double ratio, int count) {
    if (!(u0 > 0) || !(ratio > 0 && ratio < 1) || count < 1) throw std::invalid_argument("bad s grid parameters");
    std::vector<double> s;
    for (int i = 0; i < count; ++i) s.push_back(h + u0 * std::pow(ratio, i));
    return s;
}

}  // namespace hyplab::ps
