#pragma once

#include <string>
#include <vector>

#include "dimerwave/linear.hpp"
#include "dimerwave/solver.hpp"

namespace dimerwave {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Writes content to path via a temp file + rename (atomic on POSIX).
void write_atomic(const std::string& path, const std::string& content);

// JSON serialization (text out; schemas documented in docs/formats.md).
std::string field_to_json(const PeriodicField& f);
PeriodicField field_from_json(const std::string& text);
std::string lineardata_to_json(const LinearData& d);
std::string branch_point_to_json(const BranchPoint& pt);
std::string branch_to_json(const Branch& br);
std::string longwave_to_json(const std::vector<LongWaveBranch>& lw);

struct ResidualReport {
    double phi_residual_l2 = 0.0;
    double derivative_orthogonality = 0.0;
    double nu0_orthogonality = 0.0;
    double jc_variation = 0.0;
    double lattice_residual_max = 0.0;
};
std::string residual_report_to_json(const ResidualReport& r);

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};
std::string verify_report_to_json(const std::vector<CriterionResult>& results);

/// CSV with the given header row and shortest round-trip number formatting.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace dimerwave
