#include "frp/fiberclass.hpp"

#include "frp/error.hpp"

#include <cmath>
#include <string>

namespace frp::fiberclass {

std::string_view to_string(FiberClass c) {
    switch (c) {
        case FiberClass::Short: return "Short";
        case FiberClass::Medium: return "Medium";
        case FiberClass::Long: return "Long";
    }
    return "Short";
}

double critical_length(const CriticalLengthInput& input) {
    if (!(input.tau_c > 0.0) || !std::isfinite(input.tau_c))
        throw ValidationError("invalid_bond_strength",
                              "matrix bond strength tau_c must be > 0", "tau_c");
    if (!(input.sigma_f > 0.0) || !std::isfinite(input.sigma_f))
        throw ValidationError("invalid_input", "fiber tensile strength must be > 0", "sigma_f");
    if (!(input.d > 0.0) || !std::isfinite(input.d))
        throw ValidationError("invalid_input", "fiber diameter must be > 0", "d");
    return input.sigma_f * input.d / (2.0 * input.tau_c);
}

FiberClass classify(double length, double critical_length) {
    if (!(length > 0.0)) throw ValidationError("invalid_input", "fiber length must be > 0", "l");
    if (!(critical_length > 0.0))
        throw ValidationError("invalid_input", "critical length must be > 0", "l_c");
    if (length <= critical_length) return FiberClass::Short;
    if (length <= kLongFiberRatio * critical_length) return FiberClass::Medium;
    return FiberClass::Long;
}

FiberSelection select_fiber(const matdb::RequirementVector& requirement,
                            std::span<const matdb::FiberRecord> fibers, double tau_c,
                            const fuzzysim::RankOptions& options) {
    using matdb::FiberSlot;
    if (requirement.schema != matdb::RecordSchema::Fiber)
        throw ValidationError("invalid_requirement", "fiber selection needs a fiber requirement",
                              "schema");
    matdb::validate(requirement);
    if (fibers.empty()) throw ValidationError("empty_collection", "no fibers to select from");

    auto slot = [](FiberSlot s) { return static_cast<std::size_t>(s); };
    FiberSelection sel;
    sel.tau_c = tau_c;
    sel.requirement_critical_length =
        critical_length({requirement.numeric(slot(FiberSlot::TensileStrength)),
                         requirement.numeric(slot(FiberSlot::Diameter)), tau_c});
    sel.fiber_class = classify(requirement.numeric(slot(FiberSlot::Length)),
                               sel.requirement_critical_length);

    std::vector<matdb::FiberRecord> members;
    for (const auto& f : fibers) {
        const double lc = critical_length({f.tensile_strength, f.diameter, tau_c});
        if (classify(f.length, lc) == sel.fiber_class) members.push_back(f);
    }
    if (members.empty()) {
        throw ValidationError("empty_class",
                              "no fiber in class " + std::string(to_string(sel.fiber_class)),
                              std::string(to_string(sel.fiber_class)));
    }
    sel.ranking = fuzzysim::rank_by_similarity(requirement, std::span<const matdb::FiberRecord>(members),
                                               options);
    return sel;
}

FiberSelection select_fiber(const matdb::RequirementVector& requirement,
                            std::span<const matdb::FiberRecord> fibers,
                            const matdb::PolymerRecord& matrix, std::optional<double> tau_c_override,
                            const fuzzysim::RankOptions& options) {
    const double tau_c = tau_c_override ? *tau_c_override : matrix.shear_strength();
    return select_fiber(requirement, fibers, tau_c, options);
}

}  // namespace frp::fiberclass
