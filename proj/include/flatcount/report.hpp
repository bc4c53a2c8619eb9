#pragma once

#include "flatcount/enumerate.hpp"

namespace flatcount {

/// Parses a filter spec: "all" | "profile=pq" | "wpair" | "wpair=a,b" | "joins=a,b".
CylinderFilter parse_filter(const FlatSurface& s, const std::string& spec);

struct CountOptions {
    Scalar L;
    std::string filter = "all";
    int threads = 1;
    int csv_rows = 20;
};

struct CountReport {
    std::string jsonl;        // one record per cylinder (filtered)
    std::string csv;          // convergence table L,N,N/(pi L^2),normalized
    Scalar count;             // N(X, L) over the filter, exact
    double final_ratio = 0;   // N/(pi L^2)
    double final_normalized = 0;  // N * Area / (pi L^2)
};

CountReport make_count_report(const FlatSurface& s, const CountOptions& opt);

/// Wind-tree convergence CSV: L, raw count, normalized estimate, target 1/(3 pi^2), rel. error.
std::string windtree_report_csv(const FlatSurface& lab, const Scalar& L, const std::string& w1,
                                const std::string& w2, int threads, int rows);

std::string format_double(double x);

}  // namespace flatcount
