#pragma once

/**
 * @file matdb.hpp
 * @brief Material property database: ingestion, canonical JSON storage, lookup.
 *
 * A MaterialDb is an immutable value once built. Ingestion produces new
 * record lists; nothing is edited in place.
 */

#include "frp/records.hpp"

#include <json.hpp>

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace frp::matdb {

inline constexpr int kSchemaVersion = 1;

enum class SourceFormat { Csv, Json };

/// Picks the format from a file extension (".json" → Json, anything else → Csv).
SourceFormat format_for_path(const std::filesystem::path& path);

/// One rejected input row. Rows are 1-based data rows (header excluded).
struct RowError {
    std::size_t row = 0;
    std::string column;  ///< empty when the row as a whole is bad
    std::string code;
    std::string message;
};

template <typename Record>
struct IngestResult {
    std::vector<Record> records;
    std::vector<RowError> rejected;
    std::size_t input_rows = 0;

    bool clean() const { return rejected.empty(); }
};

/**
 * @brief Parse polymer rows from CSV (header required) or JSON (array of objects).
 *
 * Bad rows land in `rejected` with row/column locators; good rows keep input
 * order. Duplicate names are rejected on the second occurrence. A missing or
 * misnamed header column throws ValidationError since no row can be read.
 */
IngestResult<PolymerRecord> ingest_polymers(std::istream& source, SourceFormat format);
IngestResult<FiberRecord> ingest_fibers(std::istream& source, SourceFormat format);

/// Throws the first rejection as a ValidationError.
template <typename Record>
std::vector<Record> require_clean(IngestResult<Record> result);

struct ManifestEntry {
    std::string path;
    std::size_t rows = 0;

    bool operator==(const ManifestEntry&) const = default;
};

struct MaterialDb {
    std::vector<PolymerRecord> polymers;
    std::vector<FiberRecord> fibers;
    std::vector<ManifestEntry> source_manifest;

    const PolymerRecord* find_polymer(std::string_view name) const;
    const FiberRecord* find_fiber(std::string_view name) const;

    bool operator==(const MaterialDb&) const = default;
};

/// Validates every record and name uniqueness, then returns the assembled DB.
MaterialDb make_db(std::vector<PolymerRecord> polymers, std::vector<FiberRecord> fibers,
                   std::vector<ManifestEntry> manifest = {});

// JSON conversion. Keys follow the schema slot order.
nlohmann::ordered_json to_json(const PolymerRecord& record);
nlohmann::ordered_json to_json(const FiberRecord& record);
nlohmann::ordered_json to_json(const MaterialDb& db);
nlohmann::ordered_json to_json(const RequirementVector& requirement);

PolymerRecord polymer_from_json(const nlohmann::json& j);
FiberRecord fiber_from_json(const nlohmann::json& j);
/// Throws ValidationError("schema_error") on version mismatch or bad structure.
MaterialDb db_from_json(const nlohmann::json& j);

/**
 * @brief Parse `{ "schema": "polymer"|"fiber", "values": { slot: value } }`.
 *
 * Every slot must be present. Errors use code "invalid_requirement" with the
 * slot name as detail.
 */
RequirementVector requirement_from_json(const nlohmann::json& j);

/// Writes the canonical document atomically (temp file + rename).
void save_db(const MaterialDb& db, const std::filesystem::path& path);
/// Throws IoError if unreadable, ValidationError("schema_error") if malformed.
MaterialDb load_db(const std::filesystem::path& path);

/// Convenience for file-based ingestion; throws IoError if the file can't be opened.
IngestResult<PolymerRecord> ingest_polymers_file(const std::filesystem::path& path);
IngestResult<FiberRecord> ingest_fibers_file(const std::filesystem::path& path);

}  // namespace frp::matdb
