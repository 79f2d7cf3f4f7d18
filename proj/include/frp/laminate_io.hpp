#pragma once

/**
 * @file laminate_io.hpp
 * @brief JSON and CSV formats for laminate specs, stiffness reports and sweeps.
 *
 * Report CSV:  plane,theta_deg,vf,vsf,fiber_count,vf_phase,vm_phase,clme,ctme
 *              followed by SUM and MEAN rows.
 * Sweep CSV:   theta_deg,mean_clme,mean_ctme
 *
 * CSV numbers are written in shortest round-trip form so a parse of the
 * output reproduces the doubles exactly.
 */

#include "frp/laminate.hpp"

#include <json.hpp>

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace frp::laminate {

/// Throws ValidationError("bad_spec") with a JSON-path-like locator.
LaminateSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const LaminateSpec& spec);
/// Reads and parses a spec file; IoError if unreadable.
LaminateSpec load_spec(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const StiffnessReport& report);
nlohmann::ordered_json to_json(std::span<const SweepRow> rows);

inline constexpr std::string_view kReportCsvHeader =
    "plane,theta_deg,vf,vsf,fiber_count,vf_phase,vm_phase,clme,ctme";
inline constexpr std::string_view kSweepCsvHeader = "theta_deg,mean_clme,mean_ctme";

void write_report_csv(std::ostream& out, const StiffnessReport& report);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Parsed form of a report CSV: data rows plus the SUM and MEAN rows.
struct ReportTable {
    std::vector<PlaneResult> rows;  ///< clme_gpa/ctme_gpa are not in the CSV and stay 0
    ColumnStats sums;
    ColumnStats means;
};

ReportTable parse_report_csv(std::istream& in);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

/**
 * @brief Expand "start:stop:step" into angles.
 *
 * Inclusive of stop when (stop − start) is a multiple of step. Throws
 * ValidationError("malformed_range") if stop < start, step ≤ 0 or an
 * endpoint falls outside [0, 90].
 */
std::vector<double> parse_theta_range(std::string_view expr);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace frp::laminate
