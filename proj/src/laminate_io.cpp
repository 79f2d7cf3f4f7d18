#include "frp/laminate_io.hpp"

#include "frp/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace frp::laminate {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_spec(const std::string& message, const std::string& where) {
    throw ValidationError("bad_spec", message, where);
}

const json& member(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) bad_spec("missing '" + where + "'", where);
    return *it;
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_number()) bad_spec("'" + where + "' must be a number", where);
    return v.get<double>();
}

const json& object_at(const json& obj, const std::string& key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_object()) bad_spec("'" + where + "' must be an object", where);
    return v;
}

ordered_json stats_json(const ColumnStats& s) {
    return {{"theta_deg", s.theta_deg},
            {"vf", s.vf},
            {"vsf", s.vsf},
            {"fiber_count", s.fiber_count},
            {"vf_phase", s.fiber_phase_volume},
            {"vm_phase", s.matrix_phase_volume},
            {"clme", s.clme},
            {"ctme", s.ctme}};
}

void write_fields(std::ostream& out, std::string_view label, std::initializer_list<double> values) {
    out << label;
    for (double v : values) out << ',' << format_double(v);
    out << '\n';
}

[[noreturn]] void bad_csv(const std::string& message) {
    throw ValidationError("malformed_csv", message);
}

std::vector<double> numbers_of(const detail::CsvLine& line, std::size_t first, std::size_t count) {
    if (line.fields.size() != first + count)
        bad_csv("row " + std::to_string(line.row) + ": expected " + std::to_string(first + count) +
                " fields");
    std::vector<double> out;
    for (std::size_t i = first; i < first + count; ++i) {
        auto v = detail::parse_number(line.fields[i]);
        if (!v) bad_csv("row " + std::to_string(line.row) + ": bad number '" + line.fields[i] + "'");
        out.push_back(*v);
    }
    return out;
}

std::string join_header(const std::vector<std::string>& header) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) s += ',';
        s += header[i];
    }
    return s;
}

ColumnStats stats_from(const std::vector<double>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return std::to_string(value);
    return std::string(buf, ptr);
}

LaminateSpec spec_from_json(const json& j) {
    if (!j.is_object()) bad_spec("laminate spec must be a JSON object", "");
    LaminateSpec spec;
    spec.plane_volume = number_at(j, "plane_volume_cm3", "plane_volume_cm3");
    const json& fiber = object_at(j, "fiber", "fiber");
    spec.fiber.length = number_at(fiber, "length", "fiber.length");
    spec.fiber.diameter = number_at(fiber, "diameter", "fiber.diameter");
    spec.fiber.modulus = number_at(fiber, "modulus_gpa", "fiber.modulus_gpa");
    const json& matrix = object_at(j, "matrix", "matrix");
    spec.matrix_modulus = number_at(matrix, "modulus_gpa", "matrix.modulus_gpa");
    const json& planes = member(j, "planes", "planes");
    if (!planes.is_array()) bad_spec("'planes' must be an array", "planes");
    for (std::size_t i = 0; i < planes.size(); ++i) {
        const std::string at = "planes[" + std::to_string(i) + "]";
        if (!planes[i].is_object()) bad_spec("'" + at + "' must be an object", at);
        spec.planes.push_back(
            {number_at(planes[i], "vf", at + ".vf"), number_at(planes[i], "theta_deg", at + ".theta_deg")});
    }
    validate(spec);
    return spec;
}

ordered_json to_json(const LaminateSpec& spec) {
    ordered_json planes = ordered_json::array();
    for (const auto& p : spec.planes) planes.push_back({{"vf", p.vf}, {"theta_deg", p.theta_deg}});
    return {{"plane_volume_cm3", spec.plane_volume},
            {"fiber",
             {{"length", spec.fiber.length},
              {"diameter", spec.fiber.diameter},
              {"modulus_gpa", spec.fiber.modulus}}},
            {"matrix", {{"modulus_gpa", spec.matrix_modulus}}},
            {"planes", planes}};
}

LaminateSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'", path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        bad_spec("'" + path.string() + "' is not valid JSON: " + e.what(), path.string());
    }
    return spec_from_json(doc);
}

ordered_json to_json(const StiffnessReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"plane", r.index},
                        {"theta_deg", r.plane.theta_deg},
                        {"vf", r.plane.vf},
                        {"vsf", r.accounting.vsf},
                        {"fiber_count", r.accounting.fiber_count},
                        {"vf_phase", r.accounting.fiber_phase_volume},
                        {"vm_phase", r.accounting.matrix_phase_volume},
                        {"clme", r.clme},
                        {"ctme", r.ctme},
                        {"clme_gpa", r.clme_gpa},
                        {"ctme_gpa", r.ctme_gpa}});
    }
    return {{"rows", rows},
            {"sums", stats_json(report.sums)},
            {"means", stats_json(report.means)},
            {"mean_clme", report.mean_clme},
            {"mean_ctme", report.mean_ctme}};
}

ordered_json to_json(std::span<const SweepRow> rows) {
    ordered_json out = ordered_json::array();
    for (const auto& r : rows)
        out.push_back({{"theta_deg", r.theta_deg}, {"mean_clme", r.mean_clme}, {"mean_ctme", r.mean_ctme}});
    return {{"rows", out}};
}

void write_report_csv(std::ostream& out, const StiffnessReport& report) {
    out << kReportCsvHeader << '\n';
    for (const auto& r : report.rows) {
        write_fields(out, std::to_string(r.index),
                     {r.plane.theta_deg, r.plane.vf, r.accounting.vsf, r.accounting.fiber_count,
                      r.accounting.fiber_phase_volume, r.accounting.matrix_phase_volume, r.clme,
                      r.ctme});
    }
    for (const auto& [label, s] : {std::pair{"SUM", report.sums}, std::pair{"MEAN", report.means}}) {
        write_fields(out, label,
                     {s.theta_deg, s.vf, s.vsf, s.fiber_count, s.fiber_phase_volume,
                      s.matrix_phase_volume, s.clme, s.ctme});
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows)
        out << format_double(r.theta_deg) << ',' << format_double(r.mean_clme) << ','
            << format_double(r.mean_ctme) << '\n';
}

ReportTable parse_report_csv(std::istream& in) {
    const auto table = detail::read_csv(in);
    if (join_header(table.header) != kReportCsvHeader) bad_csv("unexpected report header");
    ReportTable out;
    bool have_sum = false;
    bool have_mean = false;
    for (const auto& line : table.rows) {
        if (line.fields.empty()) continue;
        const std::string label(detail::trim(line.fields[0]));
        const auto v = numbers_of(line, 1, 8);
        if (label == "SUM") {
            out.sums = stats_from(v);
            have_sum = true;
        } else if (label == "MEAN") {
            out.means = stats_from(v);
            have_mean = true;
        } else {
            auto index = detail::parse_number(label);
            if (!index || have_sum || have_mean)
                bad_csv("row " + std::to_string(line.row) + ": unexpected plane label '" + label + "'");
            PlaneResult r;
            r.index = static_cast<std::size_t>(*index);
            r.plane = {v[1], v[0]};
            r.accounting = {v[2], v[3], v[4], v[5]};
            r.clme = v[6];
            r.ctme = v[7];
            out.rows.push_back(r);
        }
    }
    if (!have_sum || !have_mean) bad_csv("report lacks SUM/MEAN rows");
    return out;
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
    const auto table = detail::read_csv(in);
    if (join_header(table.header) != kSweepCsvHeader) bad_csv("unexpected sweep header");
    std::vector<SweepRow> rows;
    for (const auto& line : table.rows) {
        const auto v = numbers_of(line, 0, 3);
        rows.push_back({v[0], v[1], v[2]});
    }
    return rows;
}

std::vector<double> parse_theta_range(std::string_view expr) {
    auto fail = [&](const std::string& why) -> std::vector<double> {
        throw ValidationError("malformed_range",
                              "malformed range '" + std::string(expr) + "': " + why, std::string(expr));
    };
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = expr.find(':', start);
        const auto piece = expr.substr(start, colon == std::string_view::npos ? expr.size() - start
                                                                              : colon - start);
        auto v = detail::parse_number(piece);
        if (!v || !std::isfinite(*v)) return fail("expected start:stop:step numbers");
        parts.push_back(*v);
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) return fail("expected start:stop:step");
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts[2];
    if (hi < lo) return fail("stop is below start");
    if (!(step > 0.0)) return fail("step must be > 0");
    if (lo < 0.0 || hi > 90.0) return fail("angles must lie in [0, 90]");

    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> thetas;
    thetas.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        thetas.push_back(std::min(lo + static_cast<double>(k) * step, hi));
    return thetas;
}

}  // namespace frp::laminate
