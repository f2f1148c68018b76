// hyplab: command-line driver for the counting, measure, entropy and
// validate experiments. Every run writes config.txt (the effective,
// canonical configuration) next to its CSV/JSON outputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyplab/counting.hpp"
#include "hyplab/entropy_lab.hpp"
#include "hyplab/equidistribution.hpp"
#include "hyplab/parallel.hpp"
#include "hyplab/patterson_sullivan.hpp"
#include "hyplab/report.hpp"
#include "hyplab/validate.hpp"

using namespace hyplab;
using report::Config;
using report::fmt;
using report::Json;
using report::Table;

namespace {

enum Exit { kPass = 0, kUsage = 1, kViolation = 2, kIncomplete = 3 };

struct Run {
    Config cfg;
    std::string out = "out";
    unsigned workers = 1;

    std::string path(const std::string& name) const { return (std::filesystem::path(out) / name).string(); }

    void csv(const std::string& name, const Table& t, const std::vector<std::string>& ids) const {
        report::write_file(path(name), t.to_csv(cfg.hash(), ids));
    }
    void json(const std::string& name, const Json& payload, const std::vector<std::string>& ids) const {
        Json j = report::envelope(cfg.hash(), ids);
        for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = it.value();
        report::write_file(path(name), j.dump(2) + "\n");
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw report::ConfigError("not a number: '" + s + "'");
    return v;
}

// "1..10" or "1,2,5"
std::vector<int> int_range(const std::string& s) {
    auto dots = s.find("..");
    std::vector<int> out;
    if (dots != std::string::npos) {
        int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
        for (int i = lo; i <= hi; ++i) out.push_back(i);
    } else {
        for (const auto& t : split(s, ',')) out.push_back(std::stoi(t));
    }
    if (out.empty()) throw report::ConfigError("empty range '" + s + "'");
    return out;
}

std::vector<double> double_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(to_double(t));
    if (out.empty()) throw report::ConfigError("empty list '" + s + "'");
    return out;
}

plane::Point plane_point(const std::string& s) {
    auto v = double_list(s);
    if (v.size() != 2 || !(v[1] > 0)) throw report::ConfigError("plane point must be 'x,y' with y > 0: " + s);
    return {v[0], v[1]};
}

plane::Ext plane_ext(const std::string& s) {
    if (s == "inf" || s == "infinity") return plane::Ext::inf();
    return plane::Ext::at(to_double(s));
}

tree::Word word(const std::string& s, int rank) {
    if (s.empty() || s == "e") return {};
    return tree::parse_word(s, rank);
}

// "prefix/cycle", e.g. "ab/a" for ab a a a ...
tree::BoundaryPoint tree_boundary(const std::string& s, int rank) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw report::ConfigError("tree boundary point must be 'prefix/cycle': " + s);
    auto prefix = s.substr(0, slash);
    return tree::BoundaryPoint::parse(prefix == "e" ? "" : prefix, s.substr(slash + 1), rank);
}

plane::MobiusMatrix matrix(const std::string& s) {
    auto v = double_list(s);
    if (v.size() != 4) throw report::ConfigError("matrix must be 'a,b,c,d': " + s);
    return plane::MobiusMatrix::normalized(v[0], v[1], v[2], v[3]);
}

counting::GroupSpec group_spec(const Config& c) {
    auto b = c.get("backend", "tree");
    if (b == "tree") return counting::GroupSpec::tree(static_cast<int>(c.get_int("rank", 2)));
    if (b == "modular") return counting::GroupSpec::modular();
    if (b == "flat") return counting::GroupSpec::flat();
    if (b == "fuchsian") {
        std::vector<plane::MobiusMatrix> gens;
        for (const auto& g : split(c.get("generators", ""), ';')) gens.push_back(matrix(g));
        if (gens.empty()) throw report::ConfigError("fuchsian backend needs generators = a,b,c,d; ...");
        return counting::GroupSpec::fuchsian(fuchsian::FuchsianGroup::from_generators(gens),
                                             static_cast<int>(c.get_int("word_cap", 16)));
    }
    throw report::ConfigError("unknown backend '" + b + "'");
}

// ------------------------------------------------------------------ count

int cmd_count(const Run& run) {
    const Config& c = run.cfg;
    auto g = group_spec(c);
    auto kind = g.kind;
    using K = counting::GroupSpec::Kind;
    double Rmax = c.get_double("Rmax", kind == K::Flat ? 100.0 : (kind == K::Tree ? 12.0 : 10.0));
    double dR = c.get_double("dR", kind == K::Modular ? 0.5 : 1.0);
    std::vector<double> grid;
    for (int i = 0; i * dR <= Rmax + 1e-12; ++i) grid.push_back(i * dR);
    SpacePoint base = kind == K::Tree ? SpacePoint::tree({}, g.rank)
                      : kind == K::Flat ? SpacePoint::flat(0, 0)
                                        : [&] {
                                              auto p = plane_point(c.get("base", "0,2"));
                                              return SpacePoint::plane(p.x, p.y);
                                          }();
    auto census = counting::orbit_count(g, base, grid);
    Table t;
    t.columns = {"R", "count", "complete"};
    for (const auto& e : census.entries) t.add({fmt(e.R), std::to_string(e.count), e.complete ? "1" : "0"});
    run.csv("orbit_census.csv", t, {"growth-bounds"});

    auto fit = counting::fit_entropy(census);
    Json fj;
    fj["backend"] = census.backend;
    fj["h_fit"] = report::num(fit.h);
    fj["R_min"] = report::num(fit.R_min);
    fj["R_max"] = report::num(fit.R_max);
    fj["residual"] = report::num(fit.residual);
    fj["C1"] = report::num(fit.C1);
    fj["C2"] = report::num(fit.C2);
    fj["complete"] = census.all_complete();
    run.json("entropy_fit.json", fj, {"growth-bounds"});
    std::printf("h_fit = %s\n", fmt(fit.h).c_str());

    bool complete = census.all_complete();
    if (kind != K::Flat) {
        double T = c.get_double("T", kind == K::Tree ? 12.0 : 10.0);
        auto gc = counting::geodesic_census(g, T, run.workers);
        double h = kind == K::Tree ? std::log(2.0 * g.rank - 1.0) : 1.0;
        if (kind == K::Fuchsian) h = fit.h;
        Table ct;
        ct.columns = {"length", "class"};
        for (const auto& e : gc.entries) ct.add({fmt(e.length), e.key});
        run.csv("geodesic_census.csv", ct, {"counting-bounds"});
        Table mt;
        mt.columns = {"t", "P", "ratio"};
        for (int ti = 1; ti <= static_cast<int>(std::floor(T)); ++ti)
            mt.add({std::to_string(ti), std::to_string(gc.P(ti)), fmt(counting::margulis_ratio(gc, h, ti))});
        run.csv("margulis_ratio.csv", mt, {"counting-bounds", "margulis-ratio"});
        complete = complete && gc.exact;
        std::printf("P(%s) = %llu\n", fmt(T).c_str(), static_cast<unsigned long long>(gc.P(T)));
    }
    if (!complete) {
        std::cerr << "enumeration incomplete without a certificate (word cap binding)\n";
        return kIncomplete;
    }
    return kPass;
}

// ---------------------------------------------------------------- measure

int tree_measure(const Run& run) {
    const Config& c = run.cfg;
    int rank = static_cast<int>(c.get_int("rank", 2));
    auto cells_spec = c.get("cells", "depth=4");
    int depth = std::stoi(cells_spec.rfind("depth=", 0) == 0 ? cells_spec.substr(6) : cells_spec);
    auto p = word(c.get("p", "e"), rank), q = word(c.get("q", "a"), rank);
    auto check = c.get("check", "all");
    double h = ps::tree_ps::critical_exponent(rank);
    bool pass = true;

    Json mj;
    mj["backend"] = "tree";
    mj["p"] = tree::to_string(p);
    mj["depth"] = depth;
    Json cells = Json::object();
    if (c.has("s")) {
        double s = c.get_double("s", 0);
        int cap = static_cast<int>(c.get_int("cap", 10));
        auto m = ps::tree_ps::ps_measure(rank, p, s, cap);
        mj["s"] = report::num(s);
        mj["cap"] = cap;
        mj["total"] = report::num(m.total);
        mj["tail"] = report::num(m.tail);
        mj["lower_bound"] = report::num(m.lower_bound);
        mj["upper_bound"] = report::num(m.upper_bound);
        mj["within_bounds"] = m.within_bounds();
        for (const auto& cyl : ps::tree_ps::cylinders(rank, depth))
            cells[tree::to_string(cyl)] = report::num(ps::tree_ps::cylinder_mass(rank, p, cyl, s));
    } else {
        mj["s"] = "limit";
        for (const auto& cyl : ps::tree_ps::cylinders(rank, depth))
            cells[tree::to_string(cyl)] = ps::tree_ps::exact_cylinder_measure(rank, p, cyl).str();
    }
    mj["cells"] = cells;
    run.json("measure.json", mj, {"mass-bounds"});

    if (check == "conformal" || check == "all") {
        Table t;
        t.columns = {"cell", "nu_p", "nu_q", "busemann", "defect"};
        double worst = 0.0;
        for (const auto& cyl : ps::tree_ps::cylinders(rank, depth)) {
            auto np = ps::tree_ps::exact_cylinder_measure(rank, p, cyl);
            auto nq = ps::tree_ps::exact_cylinder_measure(rank, q, cyl);
            long b = tree::busemann(q, p, ps::tree_ps::representative(rank, cyl));
            // Exact: nu_q / nu_p = (2k-1)^{-b}.
            bool exact = nq == np * Rational::pow(2 * rank - 1, static_cast<int>(-b));
            double defect = exact ? 0.0 : std::abs(std::log(nq.to_double() / np.to_double()) + h * b);
            worst = std::max(worst, defect);
            t.add({tree::to_string(cyl), np.str(), nq.str(), std::to_string(b), fmt(defect)});
        }
        run.csv("conformal.csv", t, {"conformal-density"});
        std::printf("conformal max defect = %s\n", fmt(worst).c_str());
        pass = pass && worst == 0.0;
    }
    if (check == "shadow" || check == "all") {
        Table t;
        t.columns = {"n", "x", "mass", "ratio"};
        double lo = 1e300, hi = 0.0;
        for (int n = 2; n <= 8; ++n) {
            auto x = word(std::string(n, 'a'), rank);
            auto m = ps::tree_ps::shadow_mass(rank, p, x, c.get_double("rho", 0.5));
            lo = std::min(lo, m.ratio);
            hi = std::max(hi, m.ratio);
            t.add({std::to_string(n), tree::to_string(x), m.mass.str(), fmt(m.ratio)});
        }
        run.csv("shadow_bounds.csv", t, {"shadow-lemma"});
        std::printf("shadow ratios in [%s, %s]\n", fmt(lo).c_str(), fmt(hi).c_str());
        pass = pass && hi / lo <= 2.0;
    }
    if (check == "pair-invariance" || check == "all") {
        auto g = word(c.get("gamma", "a"), rank);
        auto r = ps::tree_ps::pair_invariance_check(rank, depth, g);
        Table t;
        t.columns = {"gamma", "depth", "pairs", "max_abs_defect", "symmetric"};
        t.add({tree::to_string(g), std::to_string(depth), std::to_string(r.pairs), r.max_abs_defect.str(),
               r.symmetric ? "1" : "0"});
        run.csv("pair_invariance.csv", t, {"pair-invariance"});
        std::printf("pair-invariance defect = %s\n", r.max_abs_defect.str().c_str());
        pass = pass && r.max_abs_defect == Rational(0) && r.symmetric;
    }
    if (check == "flow-box" || check == "all") {
        Table t;
        t.columns = {"n", "mass", "scaled"};
        double lo = 1e300, hi = 0.0;
        for (int n = 3; n <= 8; ++n) {
            auto m = ps::tree_ps::d_mass(rank, {}, word(std::string(n, 'a'), rank), c.get_double("R_prime", 2.5),
                                         c.get_double("R", 0.5));
            lo = std::min(lo, m.scaled);
            hi = std::max(hi, m.scaled);
            t.add({std::to_string(n), fmt(m.mass), fmt(m.scaled)});
        }
        Table st;
        st.columns = {"n", "cardinality", "sample_size"};
        for (int n = 5; n <= 8; ++n) {
            auto s = ps::tree_ps::separated_bound(rank, {}, word(std::string(20, 'a'), rank), n, 1.0, 8.0, 1.0);
            st.add({std::to_string(n), std::to_string(s.cardinality), std::to_string(s.sample_size)});
        }
        run.csv("flow_box_mass.csv", t, {"flow-box-mass"});
        run.csv("separated_bound.csv", st, {"separated-bound"});
        pass = pass && lo > 0 && hi / lo <= 2.0;
    }
    return pass ? kPass : kViolation;
}

int modular_measure(const Run& run) {
    const Config& c = run.cfg;
    bool pass = true;
    if (c.get("equidist", "0") == "1") {
        double T = c.get_double("T", 10.0);
        int ncells = static_cast<int>(c.get_int("cells", 16));
        int bands = static_cast<int>(std::lround(std::sqrt(ncells)));
        if (bands * bands != ncells) throw report::ConfigError("equidistribution cells must be a square (bands x sectors)");
        auto census = counting::geodesic_census(counting::GroupSpec::modular(), T, run.workers);
        auto table = equidist::equidistribution_test(census, equidist::grid_cells(bands, bands),
                                                     c.get_double("step", 0.02), run.workers);
        Table t;
        t.columns = {"cell", "mu_T", "liouville", "gap"};
        for (const auto& r : table.rows) t.add({r.cell.label(), fmt(r.mu_T), fmt(r.reference), fmt(r.gap())});
        run.csv("equidistribution.csv", t, {"equidistribution"});
        std::printf("geodesics %zu, max gap = %s\n", table.geodesics, fmt(table.max_gap()).c_str());
        return kPass;
    }
    auto x = plane_point(c.get("p", "0,2"));
    auto q = plane_point(c.get("q", "0.3,1.5"));
    int arcs = static_cast<int>(c.get_int("cells", 256));
    auto orbit = ps::plane_ps::modular_orbit(x, c.get_double("cap", 12.0));
    auto grid = ps::geometric_s_grid(1.0, 0.4, 0.5, 3);
    ps::plane_ps::ArcPartition part{x, arcs};
    auto check = c.get("check", "all");

    Json mj;
    mj["backend"] = "modular";
    mj["p"] = "(" + fmt(x.x) + "," + fmt(x.y) + ")";
    mj["arcs"] = arcs;
    mj["cap"] = report::num(orbit.cap);
    if (c.has("s")) {
        auto m = ps::plane_ps::ps_measure(orbit, x, c.get_double("s", 0));
        mj["s"] = report::num(m.s);
        mj["total"] = report::num(m.total);
        mj["tail"] = report::num(m.tail);
        mj["within_bounds"] = m.within_bounds();
    } else {
        mj["s"] = "limit";
    }
    auto masses = ps::plane_ps::limit_cell_masses(orbit, part, grid);
    Json cells = Json::object();
    for (int i = 0; i < arcs; ++i) cells[fmt(part.mid_angle(i))] = report::num(masses[i]);
    mj["cells"] = cells;
    run.json("measure.json", mj, {"mass-bounds"});

    if (check == "conformal" || check == "all") {
        Table t;
        t.columns = {"arcs", "max_defect", "mean_defect", "excluded"};
        for (int a : {arcs, 2 * arcs}) {
            auto r = ps::plane_ps::conformal_check(orbit, x, q, {x, a}, grid);
            t.add({std::to_string(a), fmt(r.max_defect), fmt(r.mean_defect), std::to_string(r.excluded)});
            if (a == arcs) pass = pass && r.max_defect < 0.1;
        }
        run.csv("conformal.csv", t, {"conformal-density"});
    }
    if (check == "shadow" || check == "all") {
        Table t;
        t.columns = {"n", "x", "mass", "ratio", "resolved"};
        double lo = 1e300, hi = 0.0;
        for (int n = 1; n <= 5; ++n) {
            plane::Point xn{0, 2 * std::exp(n + 1.0)};
            auto m = ps::plane_ps::shadow_mass(part, masses, xn, c.get_double("rho", 1.0));
            lo = std::min(lo, m.ratio);
            hi = std::max(hi, m.ratio);
            t.add({std::to_string(n), fmt(xn.y), fmt(m.mass), fmt(m.ratio), m.resolved ? "1" : "0"});
        }
        run.csv("shadow_bounds.csv", t, {"shadow-lemma"});
        double b = std::max(hi, 1.0 / lo);
        std::printf("shadow b = %s\n", fmt(b).c_str());
        pass = pass && b <= 20.0;
    }
    if (check == "pair-invariance" || check == "all") {
        auto gamma = matrix(c.get("gamma", "1,1,0,1"));
        auto pm = ps::plane_ps::pair_measure(part, masses);
        auto r = ps::plane_ps::pair_invariance_check(part, pm, gamma);
        Table t;
        t.columns = {"gamma", "blocks", "compared", "excluded", "max_rel_defect"};
        t.add({gamma.str(), std::to_string(r.blocks), std::to_string(r.compared), std::to_string(pm.excluded),
               fmt(r.max_rel_defect)});
        run.csv("pair_invariance.csv", t, {"pair-invariance"});
        std::printf("pair-invariance defect = %s\n", fmt(r.max_rel_defect).c_str());
        pass = pass && r.max_rel_defect < 0.05;
    }
    return pass ? kPass : kViolation;
}

int cmd_measure(const Run& run) {
    auto b = run.cfg.get("backend", "tree");
    if (b == "tree") return tree_measure(run);
    if (b == "modular" || b == "plane") return modular_measure(run);
    throw report::ConfigError("measure supports backend tree or modular, not '" + b + "'");
}

// ---------------------------------------------------------------- entropy

Json zset_json(const entropy::ZSetReport& z) {
    Json j;
    j["classification"] = entropy::to_string(z.classification);
    j["certified"] = z.certified;
    j["certificate"] = z.certificate;
    j["samples"] = z.samples;
    j["closest"] = report::num(z.closest);
    j["witnesses"] = z.witnesses;
    return j;
}

Json fiber_json(const entropy::FiberReport& f) {
    Json j;
    j["count"] = f.count;
    j["continuum"] = f.continuum;
    j["certificate"] = f.certificate;
    j["representatives"] = f.representatives;
    return j;
}

int cmd_entropy(const Run& run) {
    const Config& c = run.cfg;
    auto b = c.get("backend", "tree");
    int rank = static_cast<int>(c.get_int("rank", 2));
    auto probe = c.get("probe", "none");
    double rho = c.get_double("rho", 0.4);

    if (probe == "z-set") {
        entropy::ZSetReport z;
        if (b == "tree") {
            std::vector<tree::Letter> fwd(32, 1), bwd(32, 2);
            z = entropy::z_set_probe(entropy::TreeFlowPoint::make(rank, {}, fwd, bwd), rho);
        } else if (b == "flat") {
            z = entropy::z_set_probe(entropy::FlatFlowPoint{0.1, 0.2, 0.3}, rho, c.get_double("horizon", 20.0));
        } else if (b == "plane") {
            z = entropy::z_set_probe(plane::UnitVector{{0, 1}, plane::kPi / 2}, rho, c.get_double("horizon", 10.0),
                                     static_cast<std::size_t>(c.get_int("budget", 2000)),
                                     static_cast<std::uint64_t>(c.get_int("seed", 1)));
        } else {
            throw report::ConfigError("z-set probe supports tree, flat, plane");
        }
        Json j;
        j["backend"] = b;
        j["rho"] = report::num(rho);
        j["z_set"] = zset_json(z);
        run.json("probe.json", j, {"expansivity"});
        std::printf("%s\n", entropy::to_string(z.classification).c_str());
        return kPass;
    }
    if (probe == "fiber") {
        entropy::FiberReport f;
        if (b == "tree")
            f = entropy::endpoint_fiber_probe(tree_boundary(c.get("xi", "e/a"), rank),
                                              tree_boundary(c.get("eta", "e/b"), rank));
        else if (b == "plane")
            f = entropy::endpoint_fiber_probe(plane_ext(c.get("xi", "0")), plane_ext(c.get("eta", "inf")));
        else if (b == "flat")
            f = entropy::endpoint_fiber_probe(c.get_double("xi", 0.0), c.get_double("eta", plane::kPi),
                                              static_cast<std::size_t>(c.get_int("budget", 8)));
        else
            throw report::ConfigError("fiber probe supports tree, flat, plane");
        Json j;
        j["backend"] = b;
        j["fiber"] = fiber_json(f);
        run.json("probe.json", j, {"expansivity"});
        std::printf("fiber count %zu%s\n", f.count, f.continuum ? " (continuum)" : "");
        return kPass;
    }
    if (probe != "none") throw report::ConfigError("unknown probe '" + probe + "' (z-set, fiber)");

    entropy::FlowBackend fb;
    counting::GroupSpec g;
    SpacePoint base;
    if (b == "tree") {
        fb = entropy::FlowBackend::Tree;
        g = counting::GroupSpec::tree(rank);
        base = SpacePoint::tree({}, rank);
    } else if (b == "flat") {
        fb = entropy::FlowBackend::Flat;
        g = counting::GroupSpec::flat();
        base = SpacePoint::flat(0, 0);
    } else {
        throw report::ConfigError("entropy slopes support tree or flat, not '" + b + "'");
    }
    auto n_grid = int_range(c.get("n", b == "tree" ? "1..10" : "1..8"));
    auto deltas = double_list(c.get("delta", "0.5"));
    std::vector<double> R;
    double Rmax = b == "tree" ? 12 : 100;
    for (double r = 0; r <= Rmax; r += 1.0) R.push_back(r);
    double h_vol = counting::fit_entropy(counting::orbit_count(g, base, R)).h;
    auto est = entropy::estimate_htop(fb, rank, n_grid, deltas, h_vol);

    Table t;
    t.columns = {"n", "delta", "lower", "upper", "slope", "universe"};
    for (const auto& f : est.fits)
        for (const auto& r : f.reports)
            t.add({std::to_string(r.n), fmt(r.delta), std::to_string(r.lower), std::to_string(r.upper), fmt(f.slope),
                   r.universe});
    run.csv("spanning.csv", t, {"entropy-consistency"});
    Json j;
    j["backend"] = b;
    j["h_top"] = report::num(est.h);
    j["stabilized"] = est.stabilized;
    j["h_vol"] = report::num(h_vol);
    j["gap"] = report::num(est.gap.value_or(NAN));
    Json slopes = Json::array();
    for (const auto& f : est.fits) slopes.push_back({{"delta", report::num(f.delta)}, {"slope", report::num(f.slope)}});
    j["slopes"] = slopes;
    run.json("htop.json", j, {"entropy-consistency"});
    std::printf("h_top = %s, h_vol = %s\n", fmt(est.h).c_str(), fmt(h_vol).c_str());
    return kPass;
}

// --------------------------------------------------------------- validate

int cmd_validate(const Run& run) {
    const Config& c = run.cfg;
    validate::Options o;
    o.suite = c.get("suite", "all");
    o.seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
    o.delta_samples = static_cast<std::uint64_t>(c.get_int("delta_samples", 20000));
    o.pair_samples = static_cast<std::uint64_t>(c.get_int("pair_samples", 20000));
    o.radius = c.get_double("radius", 10.0);
    o.tree_fellow_length = static_cast<int>(c.get_int("tree_fellow_length", 6));
    o.corrupt_delta = c.get("corrupt_delta", "0") == "1";
    o.workers = run.workers;
    auto records = validate::run(o);
    std::vector<std::string> ids;
    for (const auto& r : records)
        if (std::find(ids.begin(), ids.end(), r.id) == ids.end()) ids.push_back(r.id);
    run.json("validate.json", validate::to_json(records), ids);
    run.csv("validate.csv", validate::to_table(records), ids);
    bool pass = true;
    for (const auto& r : records) {
        std::printf("%-5s %-6s %-18s measured %s bound %s\n", r.pass ? "PASS" : "FAIL", r.backend.c_str(),
                    r.id.c_str(), fmt(r.measured).c_str(), fmt(r.bound).c_str());
        if (!r.pass) {
            pass = false;
            std::cerr << "violation " << r.backend << "/" << r.id << ": " << r.witness << "\n";
        }
    }
    return pass ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyplab: negative-curvature experiments on trees, the hyperbolic plane and the flat torus"};
    app.require_subcommand(1);
    std::string config_path, out = "out";
    unsigned workers = 1;
    std::map<std::string, std::string> flags;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
    };
    // Flags override the config file entry of the same key.
    auto key = [&](CLI::App* sub, const std::string& flag, const std::string& k, const std::string& help) {
        sub->add_option_function<std::string>(flag, [&flags, k](const std::string& v) { flags[k] = v; }, help);
    };
    auto backend_flags = [&](CLI::App* sub) {
        key(sub, "--backend", "backend", "tree | modular | flat | fuchsian | plane");
        key(sub, "--rank", "rank", "free group rank");
        key(sub, "--seed", "seed", "64-bit seed");
    };

    auto* count = app.add_subcommand("count", "orbit growth, entropy fit and closed-geodesic census");
    common(count);
    backend_flags(count);
    key(count, "--Rmax", "Rmax", "largest orbit radius");
    key(count, "--dR", "dR", "orbit radius step");
    key(count, "--T", "T", "closed-geodesic length bound");
    key(count, "--base", "base", "plane base point x,y");
    key(count, "--generators", "generators", "fuchsian generators a,b,c,d;...");
    key(count, "--word-cap", "word_cap", "word cap for float groups");

    auto* measure = app.add_subcommand("measure", "Patterson-Sullivan measures and their checks");
    common(measure);
    backend_flags(measure);
    key(measure, "--cells", "cells", "tree: depth=N; modular: arc count (equidistribution: cell count)");
    key(measure, "--check", "check", "conformal | shadow | pair-invariance | flow-box | all");
    key(measure, "--gamma", "gamma", "tree word or matrix a,b,c,d");
    key(measure, "--p", "p", "base point");
    key(measure, "--q", "q", "second point for the conformal check");
    key(measure, "--s", "s", "finite exponent s > h");
    key(measure, "--cap", "cap", "orbit radius cap");
    key(measure, "--rho", "rho", "shadow ball radius");
    key(measure, "--T", "T", "equidistribution length bound");
    measure->add_flag_function("--equidist", [&](std::int64_t) { flags["equidist"] = "1"; },
                               "equidistribution table (modular)");

    auto* ent = app.add_subcommand("entropy", "spanning sets, entropy slopes and expansivity probes");
    common(ent);
    backend_flags(ent);
    key(ent, "--n", "n", "time range, e.g. 1..10");
    key(ent, "--delta", "delta", "scales, comma separated");
    key(ent, "--probe", "probe", "z-set | fiber");
    key(ent, "--rho", "rho", "probe scale");
    key(ent, "--xi", "xi", "first endpoint");
    key(ent, "--eta", "eta", "second endpoint");
    key(ent, "--horizon", "horizon", "z-set horizon");
    key(ent, "--budget", "budget", "sample budget");

    auto* val = app.add_subcommand("validate", "run the inequality suite");
    common(val);
    key(val, "--seed", "seed", "64-bit seed");
    key(val, "--suite", "suite", "tree | plane | all");
    key(val, "--delta-samples", "delta_samples", "triangles for the delta estimate");
    key(val, "--pair-samples", "pair_samples", "plane segment pairs");
    key(val, "--radius", "radius", "sampling ball radius");
    key(val, "--tree-fellow-length", "tree_fellow_length", "longest tree segment");
    val->add_flag_function("--corrupt-delta", [&](std::int64_t) { flags["corrupt_delta"] = "1"; },
                           "test hook: force the plane delta to 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        Run run;
        if (!config_path.empty()) run.cfg = Config::load(config_path);
        for (const auto& [k, v] : flags) run.cfg.set(k, v);
        run.out = out;
        run.workers = workers;
        set_default_workers(workers);
        std::filesystem::create_directories(out);
        CLI::App* sub = app.get_subcommands().front();
        run.cfg.set("command", sub->get_name());
        report::write_file(run.path("config.txt"), run.cfg.canonical());
        if (sub == count) return cmd_count(run);
        if (sub == measure) return cmd_measure(run);
        if (sub == ent) return cmd_entropy(run);
        return cmd_validate(run);
    } catch (const ps::DivergenceError& e) {
        std::cerr << "error: " << e.what() << " (the Poincare series converges only for s > h)\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
