#include "frp/matdb.hpp"

#include "frp/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <system_error>

namespace frp::matdb {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

PropertyValue value_from_text(const SlotSpec& slot, std::string_view text) {
    PropertyValue value;
    if (slot.kind == SlotKind::Linguistic) {
        value = parse_linguistic(detail::trim(text));
    } else {
        auto number = detail::parse_number(text);
        if (!number) {
            throw ValidationError("invalid_value",
                                  "not a number: '" + std::string(detail::trim(text)) + "'");
        }
        value = *number;
    }
    check_property(slot, value);
    return value;
}

PropertyValue value_from_json(const SlotSpec& slot, const json& j) {
    PropertyValue value;
    if (slot.kind == SlotKind::Linguistic) {
        if (!j.is_string()) throw ValidationError("invalid_value", "expected a linguistic term");
        value = parse_linguistic(j.get<std::string>());
    } else {
        if (!j.is_number()) throw ValidationError("invalid_value", "expected a number");
        value = j.get<double>();
    }
    check_property(slot, value);
    return value;
}

std::string locate(std::size_t row, std::string_view column) {
    std::string where = "row " + std::to_string(row);
    if (!column.empty()) where += ", column " + std::string(column);
    return where;
}

struct RowRejected {
    RowError error;
};

template <typename Slots, typename ValueAt>
std::vector<PropertyValue> read_slots(const Slots& slots, std::size_t row, ValueAt&& value_at) {
    std::vector<PropertyValue> values;
    values.reserve(slots.size());
    for (const auto& slot : slots) {
        try {
            values.push_back(value_at(slot));
        } catch (const ValidationError& e) {
            throw RowRejected{{row, std::string(slot.key), e.code(),
                               locate(row, slot.key) + ": " + e.what()}};
        }
    }
    return values;
}

PolymerRecord make_polymer(std::string name, const std::vector<PropertyValue>& values) {
    PolymerRecord rec;
    rec.name = std::move(name);
    std::copy(values.begin(), values.end(), rec.properties.begin());
    return rec;
}

FiberRecord make_fiber(std::string name, const std::vector<PropertyValue>& values) {
    std::array<double, kFiberSlotCount> v{};
    for (std::size_t i = 0; i < kFiberSlotCount; ++i) v[i] = std::get<double>(values[i]);
    return FiberRecord::from_values(std::move(name), v);
}

template <typename Record>
struct Traits;

template <>
struct Traits<PolymerRecord> {
    static constexpr auto& slots = kPolymerSchema;
    static PolymerRecord make(std::string name, const std::vector<PropertyValue>& v) {
        return make_polymer(std::move(name), v);
    }
};

template <>
struct Traits<FiberRecord> {
    static constexpr auto& slots = kFiberSchema;
    static FiberRecord make(std::string name, const std::vector<PropertyValue>& v) {
        return make_fiber(std::move(name), v);
    }
};

template <typename Record>
void accept(IngestResult<Record>& result, std::set<std::string, std::less<>>& seen,
            std::size_t row, Record record) {
    try {
        validate(record);
    } catch (const ValidationError& e) {
        result.rejected.push_back({row, e.detail(), e.code(), locate(row, e.detail()) + ": " + e.what()});
        return;
    }
    if (!seen.insert(record.name).second) {
        result.rejected.push_back({row, "name", "duplicate_name",
                                   locate(row, "name") + ": duplicate name '" + record.name + "'"});
        return;
    }
    result.records.push_back(std::move(record));
}

template <typename Record>
IngestResult<Record> ingest_csv(std::istream& source) {
    using T = Traits<Record>;
    const auto table = detail::read_csv(source);
    IngestResult<Record> result;

    if (table.header.empty()) throw ValidationError("missing_header", "input has no header row");
    auto column_of = [&](std::string_view key) -> std::size_t {
        auto it = std::find(table.header.begin(), table.header.end(), key);
        if (it == table.header.end())
            throw ValidationError("missing_column", "header lacks column '" + std::string(key) + "'",
                                  std::string(key));
        return static_cast<std::size_t>(it - table.header.begin());
    };
    const std::size_t name_col = column_of("name");
    std::vector<std::size_t> cols;
    for (const auto& slot : T::slots) cols.push_back(column_of(slot.key));
    for (const auto& h : table.header) {
        const bool known = h == "name" || std::any_of(T::slots.begin(), T::slots.end(),
                                                       [&](const SlotSpec& s) { return s.key == h; });
        if (!known)
            throw ValidationError("unknown_column", "unknown header column '" + h + "'", h);
    }

    std::set<std::string, std::less<>> seen;
    for (const auto& line : table.rows) {
        ++result.input_rows;
        if (line.fields.size() != table.header.size()) {
            result.rejected.push_back({line.row, "", "malformed_row",
                                       locate(line.row, "") + ": expected " +
                                           std::to_string(table.header.size()) + " fields, got " +
                                           std::to_string(line.fields.size())});
            continue;
        }
        try {
            std::size_t k = 0;
            auto values = read_slots(T::slots, line.row, [&](const SlotSpec& slot) {
                return value_from_text(slot, line.fields[cols[k++]]);
            });
            std::string name(detail::trim(line.fields[name_col]));
            accept(result, seen, line.row, T::make(std::move(name), values));
        } catch (const RowRejected& r) {
            result.rejected.push_back(r.error);
        }
    }
    return result;
}

template <typename Record>
Record record_from_object(const json& obj, std::size_t row) {
    using T = Traits<Record>;
    if (!obj.is_object())
        throw RowRejected{{row, "", "malformed_row", locate(row, "") + ": expected an object"}};
    auto name_it = obj.find("name");
    if (name_it == obj.end() || !name_it->is_string())
        throw RowRejected{{row, "name", "malformed_row", locate(row, "name") + ": missing name"}};
    auto values = read_slots(T::slots, row, [&](const SlotSpec& slot) {
        auto it = obj.find(std::string(slot.key));
        if (it == obj.end()) throw ValidationError("missing_column", "missing value");
        return value_from_json(slot, *it);
    });
    return T::make(name_it->template get<std::string>(), values);
}

template <typename Record>
IngestResult<Record> ingest_json(std::istream& source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::exception& e) {
        throw ValidationError("malformed_json", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ValidationError("malformed_json", "expected a JSON array of records");

    IngestResult<Record> result;
    std::set<std::string, std::less<>> seen;
    std::size_t row = 0;
    for (const auto& obj : doc) {
        ++row;
        ++result.input_rows;
        try {
            accept(result, seen, row, record_from_object<Record>(obj, row));
        } catch (const RowRejected& r) {
            result.rejected.push_back(r.error);
        }
    }
    return result;
}

template <typename Record>
ordered_json record_json(const std::string& name, const std::vector<PropertyValue>& values) {
    ordered_json j;
    j["name"] = name;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto key = std::string(Traits<Record>::slots[i].key);
        if (is_numeric(values[i]))
            j[key] = std::get<double>(values[i]);
        else
            j[key] = canonical_label(std::get<LinguisticTerm>(values[i]));
    }
    return j;
}

template <typename Record>
Record record_from_json_strict(const json& j) {
    try {
        auto rec = record_from_object<Record>(j, 0);
        validate(rec);
        return rec;
    } catch (const RowRejected& r) {
        throw ValidationError("schema_error", r.error.message, r.error.column);
    } catch (const ValidationError& e) {
        throw ValidationError("schema_error", e.what(), e.detail());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'", path.string());
    return ss.str();
}

}  // namespace

SourceFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? SourceFormat::Json : SourceFormat::Csv;
}

IngestResult<PolymerRecord> ingest_polymers(std::istream& source, SourceFormat format) {
    return format == SourceFormat::Csv ? ingest_csv<PolymerRecord>(source)
                                       : ingest_json<PolymerRecord>(source);
}

IngestResult<FiberRecord> ingest_fibers(std::istream& source, SourceFormat format) {
    return format == SourceFormat::Csv ? ingest_csv<FiberRecord>(source)
                                       : ingest_json<FiberRecord>(source);
}

template <typename Record>
std::vector<Record> require_clean(IngestResult<Record> result) {
    if (!result.rejected.empty()) {
        const auto& first = result.rejected.front();
        throw ValidationError(first.code, first.message, locate(first.row, first.column));
    }
    return std::move(result.records);
}

template std::vector<PolymerRecord> require_clean(IngestResult<PolymerRecord>);
template std::vector<FiberRecord> require_clean(IngestResult<FiberRecord>);

const PolymerRecord* MaterialDb::find_polymer(std::string_view name) const {
    auto it = std::find_if(polymers.begin(), polymers.end(),
                           [&](const PolymerRecord& p) { return p.name == name; });
    return it == polymers.end() ? nullptr : &*it;
}

const FiberRecord* MaterialDb::find_fiber(std::string_view name) const {
    auto it = std::find_if(fibers.begin(), fibers.end(),
                           [&](const FiberRecord& f) { return f.name == name; });
    return it == fibers.end() ? nullptr : &*it;
}

MaterialDb make_db(std::vector<PolymerRecord> polymers, std::vector<FiberRecord> fibers,
                   std::vector<ManifestEntry> manifest) {
    auto check_unique = [](const auto& records, std::string_view what) {
        std::set<std::string_view> names;
        for (const auto& r : records) {
            validate(r);
            if (!names.insert(r.name).second)
                throw ValidationError("duplicate_name",
                                      "duplicate " + std::string(what) + " name '" + r.name + "'",
                                      r.name);
        }
    };
    check_unique(polymers, "polymer");
    check_unique(fibers, "fiber");
    return MaterialDb{std::move(polymers), std::move(fibers), std::move(manifest)};
}

ordered_json to_json(const PolymerRecord& record) {
    return record_json<PolymerRecord>(record.name, {record.properties.begin(), record.properties.end()});
}

ordered_json to_json(const FiberRecord& record) {
    const auto v = record.values();
    return record_json<FiberRecord>(record.name, {v.begin(), v.end()});
}

ordered_json to_json(const MaterialDb& db) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["polymers"] = ordered_json::array();
    for (const auto& p : db.polymers) j["polymers"].push_back(to_json(p));
    j["fibers"] = ordered_json::array();
    for (const auto& f : db.fibers) j["fibers"].push_back(to_json(f));
    j["source_manifest"] = ordered_json::array();
    for (const auto& m : db.source_manifest)
        j["source_manifest"].push_back({{"path", m.path}, {"rows", m.rows}});
    return j;
}

ordered_json to_json(const RequirementVector& requirement) {
    ordered_json values = ordered_json::object();
    const auto slots = schema_slots(requirement.schema);
    for (std::size_t i = 0; i < requirement.values.size() && i < slots.size(); ++i) {
        const auto key = std::string(slots[i].key);
        if (is_numeric(requirement.values[i]))
            values[key] = std::get<double>(requirement.values[i]);
        else
            values[key] = canonical_label(std::get<LinguisticTerm>(requirement.values[i]));
    }
    return {{"schema", schema_name(requirement.schema)}, {"values", values}};
}

PolymerRecord polymer_from_json(const json& j) { return record_from_json_strict<PolymerRecord>(j); }

FiberRecord fiber_from_json(const json& j) { return record_from_json_strict<FiberRecord>(j); }

MaterialDb db_from_json(const json& j) {
    auto fail = [](const std::string& msg) { throw ValidationError("schema_error", msg); };
    if (!j.is_object()) fail("database document must be a JSON object");
    auto version = j.find("schema_version");
    if (version == j.end() || !version->is_number_integer())
        fail("database document lacks schema_version");
    if (version->get<int>() != kSchemaVersion)
        fail("unsupported schema_version " + std::to_string(version->get<int>()) + " (expected " +
             std::to_string(kSchemaVersion) + ")");
    auto polymers = j.find("polymers");
    auto fibers = j.find("fibers");
    if (polymers == j.end() || !polymers->is_array()) fail("database document lacks polymers array");
    if (fibers == j.end() || !fibers->is_array()) fail("database document lacks fibers array");

    std::vector<PolymerRecord> ps;
    for (const auto& p : *polymers) ps.push_back(polymer_from_json(p));
    std::vector<FiberRecord> fs;
    for (const auto& f : *fibers) fs.push_back(fiber_from_json(f));
    std::vector<ManifestEntry> manifest;
    if (auto m = j.find("source_manifest"); m != j.end()) {
        if (!m->is_array()) fail("source_manifest must be an array");
        for (const auto& e : *m) {
            if (!e.is_object() || !e.contains("path") || !e.contains("rows"))
                fail("malformed source_manifest entry");
            manifest.push_back({e.at("path").get<std::string>(), e.at("rows").get<std::size_t>()});
        }
    }
    try {
        return make_db(std::move(ps), std::move(fs), std::move(manifest));
    } catch (const ValidationError& e) {
        throw ValidationError("schema_error", e.what(), e.detail());
    }
}

RequirementVector requirement_from_json(const json& j) {
    auto fail = [](const std::string& msg, std::string slot = {}) {
        throw ValidationError("invalid_requirement", msg, std::move(slot));
    };
    if (!j.is_object()) fail("requirement must be a JSON object");
    auto schema_it = j.find("schema");
    if (schema_it == j.end() || !schema_it->is_string()) fail("requirement lacks schema", "schema");
    auto schema = parse_schema_name(schema_it->get<std::string>());
    if (!schema) fail("schema must be \"polymer\" or \"fiber\"", "schema");
    auto values_it = j.find("values");
    if (values_it == j.end() || !values_it->is_object()) fail("requirement lacks values", "values");

    RequirementVector req{*schema, {}};
    const auto slots = schema_slots(*schema);
    for (const auto& slot : slots) {
        const std::string key(slot.key);
        auto it = values_it->find(key);
        if (it == values_it->end()) fail("missing slot '" + key + "'", key);
        try {
            req.values.push_back(value_from_json(slot, *it));
        } catch (const ValidationError& e) {
            fail(key + ": " + e.what(), key);
        }
    }
    for (const auto& [key, _] : values_it->items()) {
        const bool known = std::any_of(slots.begin(), slots.end(),
                                       [&](const SlotSpec& s) { return s.key == key; });
        if (!known) fail("unknown slot '" + key + "'", key);
    }
    return req;
}

void save_db(const MaterialDb& db, const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'", tmp.string());
        out << to_json(db).dump(2) << '\n';
        out.flush();
        if (!out) throw IoError("error writing '" + tmp.string() + "'", tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot replace '" + path.string() + "'", path.string());
    }
}

MaterialDb load_db(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("schema_error",
                              "'" + path.string() + "' is not a valid database: " + e.what(),
                              path.string());
    }
    return db_from_json(doc);
}

IngestResult<PolymerRecord> ingest_polymers_file(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return ingest_polymers(in, format_for_path(path));
}

IngestResult<FiberRecord> ingest_fibers_file(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return ingest_fibers(in, format_for_path(path));
}

}  // namespace frp::matdb
