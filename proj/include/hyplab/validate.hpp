#pragma once

// The invariant suite behind `validate`: one record per named inequality,
// with the measured constant, the bound it is held to and a witness when it fails.

#include <cstdint>
#include <string>
#include <vector>

#include "hyplab/report.hpp"

namespace hyplab::validate {

struct Record {
    std::string id;         // stable inequality identifier, e.g. "fellow-traveling"
    std::string backend;
    std::string statement;  // the checked inequality in words
    double measured = 0.0;  // compared with bound as measured <= bound
    double bound = 0.0;
    bool pass = false;
    std::string exact;      // exact value when the backend provides one ("p/q")
    std::string witness;    // serialized violating instance, empty on pass
};

struct Options {
    std::string suite = "all";  // tree | plane | all
    std::uint64_t seed = 1;
    std::uint64_t delta_samples = 20000;
    std::uint64_t pair_samples = 20000;
    double radius = 10.0;
    int tree_fellow_length = 6;
    bool corrupt_delta = false;  // test hook: plane delta forced to 0
    unsigned workers = 1;
};

std::vector<Record> run(const Options& opt);

report::Json to_json(const std::vector<Record>& records);
report::Table to_table(const std::vector<Record>& records);

// Exhaustive tree check: c1 = [e, y] with |y| <= max_length, c2 any segment of
// the same length with endpoints within max_rho of those of c1.
struct TreeFellowSummary {
    std::uint64_t pairs = 0;
    std::uint64_t violations = 0;
    double worst_ratio = 0.0;  // max of deviation / (3 rho), rho > 0
    std::string witness;
};
TreeFellowSummary tree_fellow_traveling(int max_length, int max_rho, unsigned workers = 1);

// Monte-Carlo plane check of the thin-triangle premise (defect <= delta + slack)
// and of d(c1(t), c2(t)) <= 4 delta + 3 rho for equal-length segment pairs.
struct PlaneFellowSummary {
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::uint64_t thin_violations = 0;
    double delta = 0.0;
    double worst_ratio = 0.0;  // max of deviation / (4 delta + 3 rho)
    double worst_thin = 0.0;   // largest thin-triangle defect seen
    std::string witness;
};
PlaneFellowSummary plane_fellow_traveling(double delta, std::uint64_t samples, double radius, std::uint64_t seed,
                                          unsigned workers = 1, double thin_slack = 0.01);

}  // namespace hyplab::validate
