#include "hyplab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "hyplab/flat.hpp"
#include "hyplab/parallel.hpp"

namespace hyplab::counting {

std::string GroupSpec::name() const {
    switch (kind) {
        case Kind::Tree: return "tree";
        case Kind::Modular: return "modular";
        case Kind::Fuchsian: return "fuchsian";
        case Kind::Flat: return "flat";
    }
    return "?";
}

GroupSpec GroupSpec::tree(int rank) {
    if (rank < 1) throw std::invalid_argument("tree rank must be at least 1");
    GroupSpec g;
    g.kind = Kind::Tree;
    g.rank = rank;
    return g;
}

GroupSpec GroupSpec::modular() {
    GroupSpec g;
    g.kind = Kind::Modular;
    g.group = fuchsian::FuchsianGroup::modular();
    return g;
}

GroupSpec GroupSpec::fuchsian(fuchsian::FuchsianGroup grp, int word_cap) {
    GroupSpec g;
    g.kind = Kind::Fuchsian;
    g.group = std::move(grp);
    g.word_cap = word_cap;
    return g;
}

GroupSpec GroupSpec::flat() {
    GroupSpec g;
    g.kind = Kind::Flat;
    return g;
}

bool OrbitCensus::all_complete() const {
    return std::all_of(entries.begin(), entries.end(), [](const CensusEntry& e) { return e.complete; });
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("empty radius grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("radius grid must be strictly increasing");
    if (grid.front() < 0) throw std::invalid_argument("radii must be nonnegative");
}

// counts[i] = #{d in sorted displacements : d <= grid[i]}
std::vector<std::uint64_t> cumulative(std::vector<double> disp, const std::vector<double>& grid) {
    std::sort(disp.begin(), disp.end());
    std::vector<std::uint64_t> out;
    for (double R : grid)
        out.push_back(static_cast<std::uint64_t>(std::upper_bound(disp.begin(), disp.end(), R + 1e-12) - disp.begin()));
    return out;
}

}  // namespace

OrbitCensus orbit_count(const GroupSpec& g, const SpacePoint& base, const std::vector<double>& R_grid) {
    check_grid(R_grid);
    OrbitCensus c;
    c.backend = g.name();
    c.base = base;
    double Rmax = R_grid.back();
    std::vector<std::uint64_t> counts;
    std::vector<bool> complete(R_grid.size(), true);
    switch (g.kind) {
        case GroupSpec::Kind::Tree: {
            if (base.backend != Backend::Tree) throw BackendMismatch("tree group needs a tree base point");
            int radius = static_cast<int>(std::floor(Rmax + 1e-9));
            std::vector<std::uint64_t> by_distance(static_cast<std::size_t>(radius) + 1 + 2 * base.word.size(), 0);
            // d(x, gamma x) <= |gamma| + 2|x|, so enumerating |gamma| <= R + 2|x| is complete.
            int reach = radius + 2 * static_cast<int>(base.word.size());
            tree::ball_enumerate(g.rank, reach, [&](const tree::Word& w) {
                int d = base.word.empty() ? static_cast<int>(w.size())
                                          : tree::distance(base.word, tree::multiply(w, base.word));
                if (d <= radius) ++by_distance[static_cast<std::size_t>(d)];
            });
            for (double R : R_grid) {
                std::uint64_t s = 0;
                for (int d = 0; d <= static_cast<int>(std::floor(R + 1e-9)); ++d) s += by_distance[static_cast<std::size_t>(d)];
                counts.push_back(s);
            }
            break;
        }
        case GroupSpec::Kind::Modular: {
            if (base.backend != Backend::Plane) throw BackendMismatch("modular group needs a plane base point");
            auto ball = fuchsian::modular_ball(base.plane_point(), Rmax);
            std::vector<double> disp;
            for (const auto& m : ball) disp.push_back(plane::distance(base.plane_point(), m.to_float().apply(base.plane_point())));
            counts = cumulative(std::move(disp), R_grid);
            break;
        }
        case GroupSpec::Kind::Fuchsian: {
            if (base.backend != Backend::Plane) throw BackendMismatch("fuchsian group needs a plane base point");
            for (std::size_t i = 0; i < R_grid.size(); ++i) {
                if (R_grid[i] <= 0) {
                    counts.push_back(1);
                    continue;
                }
                auto ball = fuchsian::group_ball(g.group, base.plane_point(), R_grid[i], g.word_cap);
                counts.push_back(ball.elements.size());
                complete[i] = ball.completeness != fuchsian::Completeness::Incomplete;
            }
            break;
        }
        case GroupSpec::Kind::Flat: {
            for (double R : R_grid) counts.push_back(flat::lattice_ball_count(R));
            break;
        }
    }
    for (std::size_t i = 0; i < R_grid.size(); ++i) c.entries.push_back({R_grid[i], counts[i], complete[i]});
    return c;
}

EntropyEstimate growth_constants(const OrbitCensus& census, double h, double R_min, double R_max) {
    EntropyEstimate e;
    e.h = h;
    e.R_min = R_min;
    e.R_max = R_max;
    e.C1 = std::numeric_limits<double>::infinity();
    e.C2 = 0.0;
    for (const auto& entry : census.entries) {
        if (entry.R < R_min - 1e-12 || entry.R > R_max + 1e-12) continue;
        double v = static_cast<double>(entry.count) * std::exp(-h * entry.R);
        e.C1 = std::min(e.C1, v);
        e.C2 = std::max(e.C2, v);
    }
    if (e.C2 == 0.0) throw std::invalid_argument("no census points in the window");
    return e;
}

EntropyEstimate fit_entropy(const OrbitCensus& census) {
    std::vector<const CensusEntry*> pts;
    for (const auto& e : census.entries)
        if (e.count > 0) pts.push_back(&e);
    if (pts.size() < 4) throw std::invalid_argument("entropy fit needs at least 4 census points with positive counts");
    std::size_t first = pts.size() / 2;
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = first; i < pts.size(); ++i) {
        double x = pts[i]->R, y = std::log(static_cast<double>(pts[i]->count));
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double den = n * sxx - sx * sx;
    if (!(den > 0)) throw std::invalid_argument("degenerate entropy fit window");
    double slope = (n * sxy - sx * sy) / den;
    double icpt = (sy - slope * sx) / n;
    double rss = 0;
    for (std::size_t i = first; i < pts.size(); ++i) {
        double r = std::log(static_cast<double>(pts[i]->count)) - (icpt + slope * pts[i]->R);
        rss += r * r;
    }
    EntropyEstimate e = growth_constants(census, slope, pts[first]->R, pts.back()->R);
    e.residual = std::sqrt(rss / n);
    return e;
}

std::uint64_t GeodesicCensus::P(double t) const {
    auto it = std::upper_bound(entries.begin(), entries.end(), t + 1e-12,
                               [](double v, const GeodesicEntry& e) { return v < e.length; });
    return static_cast<std::uint64_t>(it - entries.begin());
}

std::vector<tree::CyclicWord> tree_necklaces(int rank, int max_length, unsigned workers) {
    if (rank < 1) throw std::invalid_argument("tree rank must be at least 1");
    std::vector<tree::Letter> letters;
    for (int o = 0; o < 2 * rank; ++o) letters.push_back(tree::letter_from_order(o));
    // A Lyndon word starts with its smallest letter, so partition by first letter.
    auto parts = parallel_chunks(letters.size(), workers, [&](std::size_t i) {
        std::vector<tree::CyclicWord> out;
        std::vector<tree::Letter> w{letters[i]};
        int first_order = tree::letter_order(letters[i]);
        auto visit = [&](auto&& self) -> void {
            const tree::Letter last = w.back();
            if (last != tree::inverse(w.front())) {
                tree::Word word = tree::Word::unchecked(w);
                if (tree::least_rotation(word) == word && !tree::is_proper_power(word))
                    out.push_back(tree::CyclicWord{word});
            }
            if (static_cast<int>(w.size()) >= max_length) return;
            for (tree::Letter l : letters) {
                if (l == tree::inverse(last) || tree::letter_order(l) < first_order) continue;
                w.push_back(l);
                self(self);
                w.pop_back();
            }
        };
        visit(visit);
        return out;
    });
    std::vector<tree::CyclicWord> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end(), [](const tree::CyclicWord& a, const tree::CyclicWord& b) {
        if (a.canonical.size() != b.canonical.size()) return a.canonical.size() < b.canonical.size();
        return a.canonical < b.canonical;
    });
    return all;
}

std::vector<std::uint64_t> necklace_counts_transfer(int rank, int max_length) {
    int m = 2 * rank;
    using Mat = std::vector<std::vector<unsigned __int128>>;
    Mat A(m, std::vector<unsigned __int128>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            A[i][j] = tree::letter_from_order(j) == tree::inverse(tree::letter_from_order(i)) ? 0 : 1;
    std::vector<unsigned __int128> tr(static_cast<std::size_t>(max_length) + 1, 0);
    Mat P = A;
    for (int n = 1; n <= max_length; ++n) {
        for (int i = 0; i < m; ++i) tr[n] += P[i][i];
        Mat Q(m, std::vector<unsigned __int128>(m, 0));
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
                for (int j = 0; j < m; ++j) Q[i][j] += P[i][k] * A[k][j];
        P = std::move(Q);
    }
    auto mobius = [](int n) {
        int mu = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
        if (n > 1) mu = -mu;
        return mu;
    };
    std::vector<std::uint64_t> out(static_cast<std::size_t>(max_length) + 1, 0);
    for (int n = 1; n <= max_length; ++n) {
        __int128 s = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) s += static_cast<__int128>(mobius(d)) * static_cast<__int128>(tr[n / d]);
        out[n] = static_cast<std::uint64_t>(s / n);
    }
    return out;
}

GeodesicCensus geodesic_census(const GroupSpec& g, double T, unsigned workers) {
    if (!(T > 0)) throw std::invalid_argument("census length must be positive");
    GeodesicCensus c;
    c.backend = g.name();
    c.T = T;
    switch (g.kind) {
        case GroupSpec::Kind::Tree: {
            c.h = std::log(2.0 * g.rank - 1.0);
            for (auto& cw : tree_necklaces(g.rank, static_cast<int>(std::floor(T + 1e-9)), workers))
                c.entries.push_back({static_cast<double>(cw.canonical.size()), tree::to_string(cw.canonical), {}});
            break;
        }
        case GroupSpec::Kind::Modular: {
            c.h = 1.0;
            for (auto& cls : fuchsian::enumerate_conj_classes_modular(T, std::nullopt, workers))
                c.entries.push_back({cls.length, cls.word, cls});
            break;
        }
        case GroupSpec::Kind::Fuchsian: {
            c.exact = false;
            c.h = 1.0;
            for (auto& cls : fuchsian::heuristic_conj_classes(g.group, T, g.word_cap))
                c.entries.push_back({cls.length, cls.representative.str(), cls});
            break;
        }
        case GroupSpec::Kind::Flat:
            throw std::invalid_argument("the flat torus has no isolated closed geodesics to count");
    }
    std::stable_sort(c.entries.begin(), c.entries.end(), [](const GeodesicEntry& a, const GeodesicEntry& b) {
        if (a.length != b.length) return a.length < b.length;
        return a.key < b.key;
    });
    return c;
}

double margulis_ratio(const GeodesicCensus& census, double h, double t) {
    if (t > census.T + 1e-12) throw std::out_of_range("t beyond the census range");
    if (!(h > 0)) throw std::invalid_argument("margulis ratio needs h > 0");
    return static_cast<double>(census.P(t)) * h * t / std::exp(h * t);
}

namespace {

bool string_is_power(const std::string& s) {
    std::size_t n = s.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool rep = true;
        for (std::size_t i = d; i < n && rep; ++i) rep = s[i] == s[i - d];
        if (rep) return true;
    }
    return false;
}

}  // namespace

PrimitiveResult primitive_test(const tree::Word& w) {
    auto red = tree::cyclic_reduce(w);
    if (red.identity) throw std::invalid_argument("identity is not a hyperbolic element");
    return {!tree::is_proper_power(red.core), false, tree::to_string(red.cls.canonical)};
}

PrimitiveResult primitive_test(const fuchsian::IntMatrix& m) {
    auto word = fuchsian::rl_cyclic_word(m);
    if (!word) throw std::invalid_argument("element is not hyperbolic");
    return {!string_is_power(*word), false, *word};
}

PrimitiveResult primitive_test(const plane::MobiusMatrix& m, const std::vector<fuchsian::ConjClass>& shorter) {
    auto tl = fuchsian::translation_length(m);
    if (tl.kind != fuchsian::IsometryKind::Hyperbolic) throw std::invalid_argument("element is not hyperbolic");
    bool power = false;
    for (const auto& c : shorter) {
        double r = tl.length / c.length;
        if (r > 1.5 && std::abs(r - std::round(r)) < 1e-7) power = true;
    }
    return {!power, true, m.str()};
}

double counting_constant(const GeodesicCensus& census, double h, const std::vector<double>& t_grid) {
    double A = 1.0;
    for (double t : t_grid) {
        if (t > census.T + 1e-12) throw std::out_of_range("t beyond the census range");
        double P = static_cast<double>(census.P(t));
        if (P == 0) return std::numeric_limits<double>::infinity();
        A = std::max({A, P / std::exp(h * t), std::exp(h * t) / (t * P)});
    }
    return A;
}

}  // namespace hyplab::counting
