#pragma once

/**
 * @file fiberclass.hpp
 * @brief Critical fiber length, short/medium/long classification and
 *        in-class fiber selection.
 *
 *   l_c = σ_f · d / (2 τ_c)
 *
 *   Short   l ≤ l_c
 *   Medium  l_c < l ≤ 15 l_c
 *   Long    l > 15 l_c
 *
 * τ_c is the matrix shear yield strength (PolymerRecord::shear_strength)
 * unless the caller overrides it.
 */

#include "frp/fuzzysim.hpp"
#include "frp/records.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace frp::fiberclass {

enum class FiberClass { Short, Medium, Long };

std::string_view to_string(FiberClass c);

inline constexpr double kLongFiberRatio = 15.0;

struct CriticalLengthInput {
    double sigma_f = 0.0;  ///< fiber tensile strength, MPa
    double d = 0.0;        ///< fiber diameter, mm
    double tau_c = 0.0;    ///< fiber-matrix bond strength, MPa
};

/// Result in the unit of `d`. Throws ValidationError for non-positive inputs
/// ("invalid_bond_strength" when tau_c ≤ 0).
double critical_length(const CriticalLengthInput& input);

/// Throws ValidationError if either length is not strictly positive.
FiberClass classify(double length, double critical_length);

struct FiberSelection {
    FiberClass fiber_class = FiberClass::Short;
    double tau_c = 0.0;
    double requirement_critical_length = 0.0;
    std::vector<fuzzysim::SimilarityResult> ranking;
};

/**
 * @brief Predict the requirement's class, filter fibers to it, rank survivors.
 *
 * The class is predicted from the requirement's own length, tensile strength
 * and diameter. Each fiber is classified from its own values against the same
 * τ_c. Throws ValidationError("empty_class") with the class name as detail
 * when nothing survives the filter.
 */
FiberSelection select_fiber(const matdb::RequirementVector& requirement,
                            std::span<const matdb::FiberRecord> fibers, double tau_c,
                            const fuzzysim::RankOptions& options = {});

/// τ_c from the matrix shear strength unless tau_c_override is set.
FiberSelection select_fiber(const matdb::RequirementVector& requirement,
                            std::span<const matdb::FiberRecord> fibers,
                            const matdb::PolymerRecord& matrix,
                            std::optional<double> tau_c_override = std::nullopt,
                            const fuzzysim::RankOptions& options = {});

}  // namespace frp::fiberclass
