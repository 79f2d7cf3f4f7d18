#include "frp/laminate.hpp"

#include "frp/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace frp::laminate {

namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Orientation factors for the longitudinal and transverse terms.
double cos_factor(double theta_deg) { return std::cos(radians(theta_deg)); }
double one_minus_sin(double theta_deg) { return 1.0 - std::sin(radians(theta_deg)); }

void bad_spec(const std::string& message, const std::string& where) {
    throw ValidationError("bad_spec", message, where);
}

void check_positive(double x, const std::string& where) {
    if (!(x > 0.0) || !std::isfinite(x)) bad_spec(where + " must be a finite number > 0", where);
}

void check_fraction(double vf, const std::string& where) {
    if (!(vf >= 0.0 && vf <= 1.0)) bad_spec(where + " must be in [0, 1]", where);
}

void check_angle(double theta, const std::string& where) {
    if (!(theta >= 0.0 && theta <= 90.0)) bad_spec(where + " must be in [0, 90] degrees", where);
}

const PlaneSpec& plane_at(const LaminateSpec& spec, std::size_t plane) {
    if (plane >= spec.planes.size())
        throw ValidationError("bad_spec", "plane index " + std::to_string(plane) + " out of range");
    return spec.planes[plane];
}

// Bracketed terms of the plane CLME/CTME expressions, before orientation.
double clme_at_zero(const LaminateSpec& spec, const PlaneAccounting& acc) {
    return spec.matrix_modulus * (spec.plane_volume - acc.fiber_phase_volume) +
           spec.fiber.modulus * acc.fiber_phase_volume;
}

double ctme_at_zero(const LaminateSpec& spec, const PlaneAccounting& acc) {
    const double ef = spec.fiber.modulus;
    const double em = spec.matrix_modulus;
    return ef * em / (acc.matrix_phase_volume * ef + em * acc.fiber_phase_volume);
}

}  // namespace

void validate(const LaminateSpec& spec) {
    check_positive(spec.plane_volume, "plane_volume_cm3");
    check_positive(spec.fiber.length, "fiber.length");
    check_positive(spec.fiber.diameter, "fiber.diameter");
    check_positive(spec.fiber.modulus, "fiber.modulus_gpa");
    check_positive(spec.matrix_modulus, "matrix.modulus_gpa");
    if (spec.planes.empty()) bad_spec("laminate needs at least one plane", "planes");
    for (std::size_t i = 0; i < spec.planes.size(); ++i) {
        const std::string at = "planes[" + std::to_string(i) + "]";
        check_fraction(spec.planes[i].vf, at + ".vf");
        check_angle(spec.planes[i].theta_deg, at + ".theta_deg");
    }
}

double longitudinal_modulus(double matrix_modulus, double fiber_modulus, double vf) {
    check_fraction(vf, "vf");
    return matrix_modulus * (1.0 - vf) + fiber_modulus * vf;
}

double transverse_modulus(double matrix_modulus, double fiber_modulus, double vf) {
    check_fraction(vf, "vf");
    const double denom = (1.0 - vf) * fiber_modulus + vf * matrix_modulus;
    if (denom == 0.0) throw ValidationError("bad_spec", "transverse modulus denominator is zero");
    return fiber_modulus * matrix_modulus / denom;
}

double oriented_longitudinal(double matrix_modulus, double fiber_modulus, double vf,
                             double theta_deg) {
    check_angle(theta_deg, "theta_deg");
    return cos_factor(theta_deg) * longitudinal_modulus(matrix_modulus, fiber_modulus, vf);
}

double oriented_transverse(double matrix_modulus, double fiber_modulus, double vf,
                           double theta_deg) {
    check_angle(theta_deg, "theta_deg");
    return one_minus_sin(theta_deg) * transverse_modulus(matrix_modulus, fiber_modulus, vf);
}

PlaneAccounting plane_accounting(const LaminateSpec& spec, std::size_t plane) {
    const double vf = plane_at(spec, plane).vf;
    PlaneAccounting acc;
    acc.fiber_phase_volume = spec.plane_volume * vf;
    acc.matrix_phase_volume = spec.plane_volume - acc.fiber_phase_volume;
    // Single-fiber volume scales with the plane's fiber fraction.
    acc.vsf = spec.fiber.length * spec.fiber.diameter * vf;
    acc.fiber_count = acc.vsf > 0.0 ? acc.fiber_phase_volume / acc.vsf : 0.0;
    return acc;
}

double plane_clme(const LaminateSpec& spec, std::size_t plane, double theta_deg) {
    check_angle(theta_deg, "theta_deg");
    return cos_factor(theta_deg) * clme_at_zero(spec, plane_accounting(spec, plane));
}

double plane_ctme(const LaminateSpec& spec, std::size_t plane, double theta_deg) {
    check_angle(theta_deg, "theta_deg");
    return one_minus_sin(theta_deg) * ctme_at_zero(spec, plane_accounting(spec, plane));
}

double mean_clme_fixed_theta(const LaminateSpec& spec, double theta_deg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.n_planes(); ++i) sum += plane_clme(spec, i, theta_deg);
    return sum / static_cast<double>(spec.n_planes());
}

double mean_ctme_fixed_theta(const LaminateSpec& spec, double theta_deg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.n_planes(); ++i) sum += plane_ctme(spec, i, theta_deg);
    return sum / static_cast<double>(spec.n_planes());
}

double mean_clme_per_plane_theta(const LaminateSpec& spec) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.n_planes(); ++i)
        sum += plane_clme(spec, i, spec.planes[i].theta_deg);
    return sum / static_cast<double>(spec.n_planes());
}

double mean_ctme_per_plane_theta(const LaminateSpec& spec) {
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.n_planes(); ++i)
        sum += plane_ctme(spec, i, spec.planes[i].theta_deg);
    return sum / static_cast<double>(spec.n_planes());
}

StiffnessReport analyze(const LaminateSpec& spec) {
    validate(spec);
    StiffnessReport report;
    report.rows.reserve(spec.n_planes());
    for (std::size_t i = 0; i < spec.n_planes(); ++i) {
        PlaneResult row;
        row.index = i + 1;
        row.plane = spec.planes[i];
        row.accounting = plane_accounting(spec, i);
        row.clme = plane_clme(spec, i, row.plane.theta_deg);
        row.ctme = plane_ctme(spec, i, row.plane.theta_deg);
        row.clme_gpa = row.clme / spec.plane_volume;
        row.ctme_gpa = row.ctme * spec.plane_volume;

        auto& s = report.sums;
        s.theta_deg += row.plane.theta_deg;
        s.vf += row.plane.vf;
        s.vsf += row.accounting.vsf;
        s.fiber_count += row.accounting.fiber_count;
        s.fiber_phase_volume += row.accounting.fiber_phase_volume;
        s.matrix_phase_volume += row.accounting.matrix_phase_volume;
        s.clme += row.clme;
        s.ctme += row.ctme;
        report.rows.push_back(row);
    }
    const double n = static_cast<double>(spec.n_planes());
    const auto& s = report.sums;
    report.means = {s.theta_deg / n,          s.vf / n,
                    s.vsf / n,                s.fiber_count / n,
                    s.fiber_phase_volume / n, s.matrix_phase_volume / n,
                    s.clme / n,               s.ctme / n};
    report.mean_clme = report.means.clme;
    report.mean_ctme = report.means.ctme;
    return report;
}

std::vector<SweepRow> sweep_orientations(const LaminateSpec& spec, std::span<const double> thetas) {
    validate(spec);
    std::vector<SweepRow> rows;
    rows.reserve(thetas.size());
    for (double theta : thetas)
        rows.push_back({theta, mean_clme_fixed_theta(spec, theta), mean_ctme_fixed_theta(spec, theta)});
    return rows;
}

}  // namespace frp::laminate
