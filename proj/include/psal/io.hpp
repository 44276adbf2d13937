#pragma once

// File formats.
//
//   schema: {"attributes":[{"name":..., "levels":[...]}, ...]}
//   table:  {"schema":{...}, "counts":[...], "n_total":..., "adjusted":bool}
//   microdata: UTF-8 CSV, header row naming every schema attribute.
//
// Counts are written with round-trip precision, so reading a table file back
// reproduces the in-memory table exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "psal/table.hpp"

namespace psal::io {

using Json = nlohmann::ordered_json;

Json to_json(const AttributeSchema& schema);
AttributeSchema schema_from_json(const Json& j);

Json to_json(const ContingencyTable& table);
ContingencyTable table_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);

/// Writes to a temporary file next to `path` and renames it into place.
void write_json_atomic(const std::filesystem::path& path, const Json& j);

AttributeSchema read_schema(const std::filesystem::path& path);
ContingencyTable read_table(const std::filesystem::path& path);
void write_table(const std::filesystem::path& path, const ContingencyTable& table);

/// Splits one CSV record (RFC 4180 quoting). `line` must not contain the
/// record terminator.
std::vector<std::string> split_csv_record(const std::string& line);

/// Reads microdata from `in` and counts it. Columns are matched to attributes
/// by header name; row numbers in errors count data rows from 1.
ContingencyTable tabulate_csv(std::istream& in, const AttributeSchema& schema);
ContingencyTable tabulate_csv(const std::filesystem::path& path, const AttributeSchema& schema);

}  // namespace psal::io
