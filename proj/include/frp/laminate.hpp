#pragma once

/**
 * @file laminate.hpp
 * @brief Rule-of-mixtures stiffness for single plies and N-plane laminates.
 *
 * Single ply (fractions, GPa):
 *   E_L(θ) = cos θ · (E_m (1 − v_f) + E_f v_f)
 *   E_T(θ) = (1 − sin θ) · E_f E_m / ((1 − v_f) E_f + v_f E_m)
 *
 * Laminate plane i (phase volumes, volume-weighted GPa·cm³):
 *   V_f(i) = V_c v(i),  V_m(i) = V_c − V_f(i)
 *   vsf(i) = l · d · v(i),  fn(i) = V_f(i) / vsf(i)
 *   CLME(i, θ) = cos θ · (E_m (V_c − V_f(i)) + E_f V_f(i))
 *   CTME(i, θ) = (1 − sin θ) · E_f E_m / (V_m(i) E_f + E_m V_f(i))
 *
 * CLME/CTME are volume-weighted, so they carry V_c as a scale factor;
 * PlaneResult also reports the fraction-based GPa values (clme / V_c,
 * ctme · V_c). Angles are degrees in [0, 90].
 */

#include <cstddef>
#include <span>
#include <vector>

namespace frp::laminate {

struct PlaneSpec {
    double vf = 0.0;         ///< fiber volume fraction in [0, 1]
    double theta_deg = 0.0;  ///< fiber orientation, degrees in [0, 90]

    double vm() const { return 1.0 - vf; }

    bool operator==(const PlaneSpec&) const = default;
};

struct FiberGeometry {
    double length = 0.0;    ///< l, any length unit consistent with diameter
    double diameter = 0.0;  ///< d
    double modulus = 0.0;   ///< E_f, GPa

    bool operator==(const FiberGeometry&) const = default;
};

struct LaminateSpec {
    double plane_volume = 0.0;  ///< V_c per plane, cm³
    FiberGeometry fiber;
    double matrix_modulus = 0.0;  ///< E_m, GPa
    std::vector<PlaneSpec> planes;

    std::size_t n_planes() const { return planes.size(); }
    double total_volume() const { return plane_volume * static_cast<double>(planes.size()); }

    bool operator==(const LaminateSpec&) const = default;
};

/// Throws ValidationError("bad_spec") with a locator such as "planes[2].vf".
void validate(const LaminateSpec& spec);

// ----------------------------------------------------------------------------
// Single ply
// ----------------------------------------------------------------------------

double longitudinal_modulus(double matrix_modulus, double fiber_modulus, double vf);
double transverse_modulus(double matrix_modulus, double fiber_modulus, double vf);
double oriented_longitudinal(double matrix_modulus, double fiber_modulus, double vf,
                             double theta_deg);
double oriented_transverse(double matrix_modulus, double fiber_modulus, double vf,
                           double theta_deg);

// ----------------------------------------------------------------------------
// Planes
// ----------------------------------------------------------------------------

struct PlaneAccounting {
    double vsf = 0.0;                  ///< single-fiber volume
    double fiber_count = 0.0;          ///< fn, not integerized
    double fiber_phase_volume = 0.0;   ///< V_f(i)
    double matrix_phase_volume = 0.0;  ///< V_m(i)
};

/// A plane with v_f = 0 has zero fibers rather than a division by zero.
PlaneAccounting plane_accounting(const LaminateSpec& spec, std::size_t plane);

double plane_clme(const LaminateSpec& spec, std::size_t plane, double theta_deg);
double plane_ctme(const LaminateSpec& spec, std::size_t plane, double theta_deg);

/// All planes at one orientation θ.
double mean_clme_fixed_theta(const LaminateSpec& spec, double theta_deg);
double mean_ctme_fixed_theta(const LaminateSpec& spec, double theta_deg);

/// Each plane at its own θ(i).
double mean_clme_per_plane_theta(const LaminateSpec& spec);
double mean_ctme_per_plane_theta(const LaminateSpec& spec);

// ----------------------------------------------------------------------------
// Reports
// ----------------------------------------------------------------------------

struct PlaneResult {
    std::size_t index = 0;  ///< 1-based plane number
    PlaneSpec plane;
    PlaneAccounting accounting;
    double clme = 0.0;      ///< volume-weighted
    double ctme = 0.0;      ///< volume-weighted
    double clme_gpa = 0.0;  ///< clme / V_c
    double ctme_gpa = 0.0;  ///< ctme · V_c
};

/// Column totals (or means) over the report rows.
struct ColumnStats {
    double theta_deg = 0.0;
    double vf = 0.0;
    double vsf = 0.0;
    double fiber_count = 0.0;
    double fiber_phase_volume = 0.0;
    double matrix_phase_volume = 0.0;
    double clme = 0.0;
    double ctme = 0.0;
};

struct StiffnessReport {
    std::vector<PlaneResult> rows;
    ColumnStats sums;
    ColumnStats means;
    double mean_clme = 0.0;  ///< per-plane-θ mean longitudinal value
    double mean_ctme = 0.0;  ///< per-plane-θ mean transverse value
};

StiffnessReport analyze(const LaminateSpec& spec);

struct SweepRow {
    double theta_deg = 0.0;
    double mean_clme = 0.0;
    double mean_ctme = 0.0;

    bool operator==(const SweepRow&) const = default;
};

/// One row per θ, all planes at that θ. Output order follows input order.
std::vector<SweepRow> sweep_orientations(const LaminateSpec& spec, std::span<const double> thetas);

}  // namespace frp::laminate
