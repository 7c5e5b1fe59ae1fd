// Acceptance harness: runs every verification criterion and prints one
// PASS/FAIL line per criterion with the key measured numbers. Criterion 12
// (reproducibility) is exercised end to end by invoking the installed CLI
// twice and byte-comparing the artifacts.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hjbflow/verify.hpp"

namespace fs = std::filesystem;
using namespace hjbflow;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_line(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d %-34s %s  %s\n", id, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

// Criterion 12: the same verify suite run twice through the CLI into two
// fresh directories must produce byte-identical criteria.csv, verify.json
// and manifest.json.
bool run_reproducibility(std::string* detail) {
    const char* cli = std::getenv("HJBFLOW_CLI_PATH");
    if (!cli) {
        *detail = "HJBFLOW_CLI_PATH not set";
        return false;
    }
    fs::path base = fs::temp_directory_path() / "hjbflow_acceptance_repro";
    fs::remove_all(base);
    fs::create_directories(base);
    fs::path d1 = base / "run1", d2 = base / "run2";
    for (const fs::path& d : {d1, d2}) {
        std::string cmd = std::string(cli) + " verify --suite hjb --out " + d.string() +
                          " > " + (d.string() + ".log") + " 2>&1";
        int status = std::system(cmd.c_str());
        if (status != 0) {
            *detail = "CLI verify exited nonzero for " + d.string();
            return false;
        }
    }
    for (const char* f : {"criteria.csv", "verify.json", "manifest.json"}) {
        if (slurp(d1 / f) != slurp(d2 / f)) {
            *detail = std::string(f) + " differs between identical reruns";
            return false;
        }
    }
    *detail = "byte-identical criteria.csv, verify.json, manifest.json";
    return true;
}

}  // namespace

int main() {
    std::vector<CriterionResult> results;
    try {
        results = run_verify_suite("all", 0);
    } catch (const std::exception& e) {
        std::printf("verify suite threw: %s\n", e.what());
        return 1;
    }

    bool all_pass = true;
    for (const auto& r : results) {
        std::ostringstream detail;
        for (std::size_t i = 0; i < r.checks.size(); ++i) {
            const auto& c = r.checks[i];
            if (i) detail << ", ";
            detail << c.label << "=" << c.measured << " (" << c.cmp << " "
                   << c.threshold << ")";
        }
        print_line(r.id, r.name, r.pass(), detail.str());
        all_pass = all_pass && r.pass();
    }

    std::string detail;
    bool repro = run_reproducibility(&detail);
    print_line(12, "reproducible-artifacts", repro, detail);
    all_pass = all_pass && repro;

    std::printf("acceptance: %s\n", all_pass ? "ALL PASS" : "FAILURES PRESENT");
    return all_pass ? 0 : 1;
}
