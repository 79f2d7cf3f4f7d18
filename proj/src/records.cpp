#include "frp/records.hpp"

#include "frp/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>

namespace frp::matdb {

namespace {

std::string squash(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    for (char c : token) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

constexpr std::pair<std::string_view, LinguisticTerm> kTermTable[] = {
    {"nil", LinguisticTerm::Nil},           {"none", LinguisticTerm::Nil},
    {"poor", LinguisticTerm::Poor},         {"verylow", LinguisticTerm::Poor},
    {"fair", LinguisticTerm::Fair},         {"low", LinguisticTerm::Fair},
    {"good", LinguisticTerm::Good},         {"medium", LinguisticTerm::Good},
    {"verygood", LinguisticTerm::VeryGood}, {"high", LinguisticTerm::VeryGood},
    {"excellent", LinguisticTerm::Excellent}, {"veryhigh", LinguisticTerm::Excellent},
};

}  // namespace

std::string_view canonical_label(LinguisticTerm term) {
    switch (term) {
        case LinguisticTerm::Nil: return "NIL";
        case LinguisticTerm::Poor: return "Poor";
        case LinguisticTerm::Fair: return "Fair";
        case LinguisticTerm::Good: return "Good";
        case LinguisticTerm::VeryGood: return "VeryGood";
        case LinguisticTerm::Excellent: return "Excellent";
    }
    return "NIL";
}

std::optional<LinguisticTerm> try_parse_linguistic(std::string_view token) {
    const std::string key = squash(token);
    for (const auto& [label, term] : kTermTable) {
        if (label == key) return term;
    }
    return std::nullopt;
}

LinguisticTerm parse_linguistic(std::string_view token) {
    if (auto term = try_parse_linguistic(token)) return *term;
    throw ValidationError("unknown_term", "unknown linguistic term '" + std::string(token) + "'",
                          std::string(token));
}

std::string_view schema_name(RecordSchema schema) {
    return schema == RecordSchema::Polymer ? "polymer" : "fiber";
}

std::optional<RecordSchema> parse_schema_name(std::string_view name) {
    if (name == "polymer") return RecordSchema::Polymer;
    if (name == "fiber") return RecordSchema::Fiber;
    return std::nullopt;
}

std::span<const SlotSpec> schema_slots(RecordSchema schema) {
    if (schema == RecordSchema::Polymer) return kPolymerSchema;
    return kFiberSchema;
}

void check_property(const SlotSpec& slot, const PropertyValue& value) {
    const std::string key(slot.key);
    if (slot.kind == SlotKind::Linguistic) {
        if (is_numeric(value))
            throw ValidationError("invalid_value", key + ": expected a linguistic term", key);
        return;
    }
    if (!is_numeric(value))
        throw ValidationError("invalid_value", key + ": expected a number", key);
    const double x = std::get<double>(value);
    if (!std::isfinite(x) || x < 0.0)
        throw ValidationError("invalid_value", key + ": must be finite and non-negative", key);
}

double PolymerRecord::numeric(PolymerSlot slot) const {
    const auto& v = at(slot);
    if (!is_numeric(v)) {
        throw ValidationError("invalid_value",
                              std::string(kPolymerSchema[static_cast<std::size_t>(slot)].key) +
                                  " is not numeric");
    }
    return std::get<double>(v);
}

void validate(const PolymerRecord& record) {
    if (record.name.empty()) throw ValidationError("invalid_value", "polymer name is empty", "name");
    for (std::size_t i = 0; i < kPolymerSlotCount; ++i)
        check_property(kPolymerSchema[i], record.properties[i]);
}

void validate(const FiberRecord& record) {
    if (record.name.empty()) throw ValidationError("invalid_value", "fiber name is empty", "name");
    const auto values = record.values();
    for (std::size_t i = 0; i < kFiberSlotCount; ++i)
        check_property(kFiberSchema[i], values[i]);
    auto positive = [](double x, std::string_view key) {
        if (!(x > 0.0))
            throw ValidationError("invalid_value", std::string(key) + ": must be > 0",
                                  std::string(key));
    };
    positive(record.diameter, "diameter_mm");
    positive(record.length, "length_mm");
    positive(record.tensile_strength, "tensile_strength_mpa");
    positive(record.modulus, "modulus_gpa");
    if (!(record.volume_fraction > 0.0 && record.volume_fraction <= 1.0))
        throw ValidationError("invalid_value", "volume_fraction: must be in (0, 1]",
                              "volume_fraction");
}

double RequirementVector::numeric(std::size_t slot) const {
    const auto& v = values.at(slot);
    if (!is_numeric(v)) {
        throw ValidationError("invalid_requirement", "slot is not numeric",
                              std::string(schema_slots(schema)[slot].key));
    }
    return std::get<double>(v);
}

void validate(const RequirementVector& requirement) {
    const auto slots = schema_slots(requirement.schema);
    if (requirement.values.size() != slots.size()) {
        throw ValidationError("invalid_requirement",
                              "requirement has " + std::to_string(requirement.values.size()) +
                                  " slots, schema needs " + std::to_string(slots.size()));
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
        try {
            check_property(slots[i], requirement.values[i]);
        } catch (const ValidationError& e) {
            throw ValidationError("invalid_requirement", e.what(), e.detail());
        }
    }
}

RequirementVector requirement_from(const PolymerRecord& record) {
    return {RecordSchema::Polymer, {record.properties.begin(), record.properties.end()}};
}

RequirementVector requirement_from(const FiberRecord& record) {
    const auto v = record.values();
    return {RecordSchema::Fiber, {v.begin(), v.end()}};
}

}  // namespace frp::matdb
