#ifndef HJBFLOW_VERIFY_HPP
#define HJBFLOW_VERIFY_HPP

#include <string>
#include <vector>

#include "hjbflow/io.hpp"

namespace hjbflow {

/// One measured quantity against its pinned threshold. `cmp` is the
/// human-readable pass condition ("<=", ">=", "in") for the report.
struct Check {
    std::string label;
    double measured = 0.0;
    double threshold = 0.0;
    std::string cmp = "<=";
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;

    bool pass() const;
};

/// suite in {propagator, hjb, sensitivity, mfg, all}.
std::vector<CriterionResult> run_verify_suite(const std::string& suite,
                                              unsigned long long seed = 0);

/// criteria.csv (one row per check) + verify.json. Timing deliberately
/// excluded so repeated runs are byte-identical.
void write_verify_artifacts(const std::string& out_dir,
                            const std::vector<CriterionResult>& results);

std::string render_verify_table(const std::vector<CriterionResult>& results);

}  // namespace hjbflow

#endif
