#pragma once

#include <string>
#include <vector>

namespace flatcount {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    double tol_torus = 0.02;
    double tol_windtree = 0.15;
    int threads = 1;
    std::string cli_path;  // for the determinism check at process level (optional)
};

std::vector<CheckResult> verify_constants();                              // criteria 1, 2, 3
std::vector<CheckResult> verify_enumeration(const VerifyOptions& opt);    // criteria 4, 5
std::vector<CheckResult> verify_covers(const VerifyOptions& opt);         // criterion 6
std::vector<CheckResult> verify_windtree(const VerifyOptions& opt);       // criterion 7
std::vector<CheckResult> verify_counterexample(const VerifyOptions& opt);  // criterion 8
std::vector<CheckResult> verify_determinism(const VerifyOptions& opt);    // criterion 9

std::vector<CheckResult> verify_suite(const std::string& suite, const VerifyOptions& opt);

}  // namespace flatcount
