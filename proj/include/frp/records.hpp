#pragma once

/**
 * @file records.hpp
 * @brief Property schemas and record types for polymer matrices and fibers.
 *
 * The polymer schema has 17 slots in a fixed order; that order is the
 * feature-vector order used by similarity retrieval, the CSV column order
 * and the canonical JSON key order. Every consumer reads it from
 * kPolymerSchema / kFiberSchema below.
 *
 * Units are schema annotations only. Nothing is converted at ingest:
 *   stresses MPa, moduli GPa, lengths mm, density g/cm³, melting point °C.
 */

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace frp::matdb {

// ============================================================================
// Linguistic terms
// ============================================================================

/// Ordinal quality label used by the qualitative polymer properties.
enum class LinguisticTerm { Nil, Poor, Fair, Good, VeryGood, Excellent };

inline constexpr std::array<LinguisticTerm, 6> kAllTerms{
    LinguisticTerm::Nil,  LinguisticTerm::Poor,     LinguisticTerm::Fair,
    LinguisticTerm::Good, LinguisticTerm::VeryGood, LinguisticTerm::Excellent};

std::string_view canonical_label(LinguisticTerm term);

/**
 * @brief Parse a label or alias (None, VeryLow, Low, Medium, High, VeryHigh).
 *
 * Case-insensitive; all whitespace is ignored, so "Very High" parses.
 */
std::optional<LinguisticTerm> try_parse_linguistic(std::string_view token);

/// As try_parse_linguistic, throws ValidationError("unknown_term") on failure.
LinguisticTerm parse_linguistic(std::string_view token);

// ============================================================================
// Schemas
// ============================================================================

enum class RecordSchema { Polymer, Fiber };

std::string_view schema_name(RecordSchema schema);
std::optional<RecordSchema> parse_schema_name(std::string_view name);

enum class SlotKind { Numeric, Linguistic };

struct SlotSpec {
    std::string_view key;   ///< CSV column / JSON key
    SlotKind kind;
    std::string_view unit;  ///< annotation only, empty for linguistic slots
};

inline constexpr std::size_t kPolymerSlotCount = 17;
inline constexpr std::size_t kFiberSlotCount = 5;

inline constexpr std::array<SlotSpec, kPolymerSlotCount> kPolymerSchema{{
    {"tensile_strength_mpa", SlotKind::Numeric, "MPa"},
    {"yield_strength_mpa", SlotKind::Numeric, "MPa"},
    {"elongation_pct", SlotKind::Numeric, "%"},
    {"shear_strength_mpa", SlotKind::Numeric, "MPa"},
    {"impact_strength", SlotKind::Linguistic, ""},
    {"modulus_gpa", SlotKind::Numeric, "GPa"},
    {"creep_strength", SlotKind::Linguistic, ""},
    {"fatigue_strength", SlotKind::Linguistic, ""},
    {"density_g_cm3", SlotKind::Numeric, "g/cm3"},
    {"melting_point_c", SlotKind::Numeric, "C"},
    {"conductivity_heat", SlotKind::Linguistic, ""},
    {"conductivity_electricity", SlotKind::Linguistic, ""},
    {"thermal_expansion", SlotKind::Linguistic, ""},
    {"water_absorption", SlotKind::Linguistic, ""},
    {"electrical_insulation", SlotKind::Linguistic, ""},
    {"chemical_resistance", SlotKind::Linguistic, ""},
    {"sheet_material", SlotKind::Linguistic, ""},
}};

/// Index into kPolymerSchema.
enum class PolymerSlot : std::size_t {
    TensileStrength,
    YieldStrength,
    Elongation,
    ShearStrength,
    ImpactStrength,
    Modulus,
    CreepStrength,
    FatigueStrength,
    Density,
    MeltingPoint,
    ConductivityHeat,
    ConductivityElectricity,
    ThermalExpansion,
    WaterAbsorption,
    ElectricalInsulation,
    ChemicalResistance,
    SheetMaterial,
};

inline constexpr std::array<SlotSpec, kFiberSlotCount> kFiberSchema{{
    {"diameter_mm", SlotKind::Numeric, "mm"},
    {"volume_fraction", SlotKind::Numeric, ""},
    {"length_mm", SlotKind::Numeric, "mm"},
    {"tensile_strength_mpa", SlotKind::Numeric, "MPa"},
    {"modulus_gpa", SlotKind::Numeric, "GPa"},
}};

enum class FiberSlot : std::size_t { Diameter, VolumeFraction, Length, TensileStrength, Modulus };

std::span<const SlotSpec> schema_slots(RecordSchema schema);

// ============================================================================
// Records
// ============================================================================

using PropertyValue = std::variant<double, LinguisticTerm>;

inline bool is_numeric(const PropertyValue& v) { return std::holds_alternative<double>(v); }

/// Checks kind against the slot and numeric finiteness/non-negativity.
/// Throws ValidationError naming the slot.
void check_property(const SlotSpec& slot, const PropertyValue& value);

struct PolymerRecord {
    std::string name;
    std::array<PropertyValue, kPolymerSlotCount> properties;

    const PropertyValue& at(PolymerSlot slot) const {
        return properties[static_cast<std::size_t>(slot)];
    }
    double numeric(PolymerSlot slot) const;

    double tensile_strength() const { return numeric(PolymerSlot::TensileStrength); }
    /// Also the matrix shear yield strength used for the critical fiber length.
    double shear_strength() const { return numeric(PolymerSlot::ShearStrength); }
    double modulus() const { return numeric(PolymerSlot::Modulus); }

    bool operator==(const PolymerRecord&) const = default;
};

struct FiberRecord {
    std::string name;
    double diameter = 0.0;          ///< mm
    double volume_fraction = 0.0;   ///< catalog value in (0, 1]
    double length = 0.0;            ///< mm
    double tensile_strength = 0.0;  ///< MPa
    double modulus = 0.0;           ///< GPa

    /// Values in kFiberSchema order.
    std::array<double, kFiberSlotCount> values() const {
        return {diameter, volume_fraction, length, tensile_strength, modulus};
    }
    static FiberRecord from_values(std::string name, std::span<const double, kFiberSlotCount> v) {
        return {std::move(name), v[0], v[1], v[2], v[3], v[4]};
    }

    bool operator==(const FiberRecord&) const = default;
};

void validate(const PolymerRecord& record);
void validate(const FiberRecord& record);

/// A designer's target property list, laid out in the schema's slot order.
struct RequirementVector {
    RecordSchema schema = RecordSchema::Polymer;
    std::vector<PropertyValue> values;

    double numeric(std::size_t slot) const;

    bool operator==(const RequirementVector&) const = default;
};

void validate(const RequirementVector& requirement);

/// Requirement equal to a stored record (self-match queries, tests).
RequirementVector requirement_from(const PolymerRecord& record);
RequirementVector requirement_from(const FiberRecord& record);

}  // namespace frp::matdb
