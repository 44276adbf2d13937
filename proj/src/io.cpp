#include "psal/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "psal/error.hpp"

namespace psal::io {

namespace fs = std::filesystem;

Json to_json(const AttributeSchema& schema) {
    Json attrs = Json::array();
    for (const auto& a : schema.listed()) attrs.push_back({{"name", a.name}, {"levels", a.levels}});
    return {{"attributes", attrs}};
}

AttributeSchema schema_from_json(const Json& j) {
    try {
        if (!j.is_object() || !j.contains("attributes") || !j.at("attributes").is_array()) {
            fail(ErrorCode::io, "schema JSON needs an \"attributes\" array");
        }
        std::vector<Attribute> attrs;
        for (const auto& a : j.at("attributes")) {
            Attribute attr;
            attr.name = a.at("name").get<std::string>();
            for (const auto& level : a.at("levels")) {
                attr.levels.push_back(level.is_string() ? level.get<std::string>() : level.dump());
            }
            attrs.push_back(std::move(attr));
        }
        return AttributeSchema(std::move(attrs));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::io, std::string("malformed schema JSON: ") + e.what());
    }
}

Json to_json(const ContingencyTable& table) {
    return {{"schema", to_json(table.schema())},
            {"counts", std::vector<double>(table.counts().begin(), table.counts().end())},
            {"n_total", table.n_total()},
            {"adjusted", table.adjusted()}};
}

ContingencyTable table_from_json(const Json& j) {
    try {
        AttributeSchema schema = schema_from_json(j.at("schema"));
        auto counts = j.at("counts").get<std::vector<double>>();
        const double n_total = j.at("n_total").get<double>();
        const bool adjusted = j.value("adjusted", false);
        return ContingencyTable(std::move(schema), std::move(counts), n_total, adjusted);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::io, std::string("malformed table JSON: ") + e.what());
    }
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::io, path.string() + ": " + e.what());
    }
}

void write_json_atomic(const fs::path& path, const Json& j) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
        out << j.dump(2) << '\n';
        out.flush();
        if (!out) fail(ErrorCode::io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        fail(ErrorCode::io, "cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

AttributeSchema read_schema(const fs::path& path) { return schema_from_json(read_json(path)); }

ContingencyTable read_table(const fs::path& path) { return table_from_json(read_json(path)); }

void write_table(const fs::path& path, const ContingencyTable& table) { write_json_atomic(path, to_json(table)); }

std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) fail(ErrorCode::ingestion, "unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

namespace {

// One logical record; joins physical lines while a quote is open.
bool next_record(std::istream& in, std::string& record) {
    record.clear();
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (any) record += '\n';
        record += line;
        any = true;
        if (std::count(record.begin(), record.end(), '"') % 2 == 0) return true;
    }
    return any;
}

}  // namespace

ContingencyTable tabulate_csv(std::istream& in, const AttributeSchema& schema) {
    std::string record;
    if (!next_record(in, record)) fail(ErrorCode::empty_input, "CSV input is empty");
    if (record.rfind("\xEF\xBB\xBF", 0) == 0) record.erase(0, 3);
    const auto header = split_csv_record(record);

    const int n = schema.attribute_count();
    if (static_cast<int>(header.size()) != n) {
        fail(ErrorCode::ingestion, "CSV header has " + std::to_string(header.size()) + " columns, schema has " +
                                       std::to_string(n) + " attributes");
    }
    // column_for[p] = CSV column holding the p-th listed attribute
    std::vector<std::size_t> column_for(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto attr = schema.find_attribute(header[c]);
        if (!attr) fail(ErrorCode::ingestion, "CSV header names unknown attribute '" + header[c] + "'");
        const auto p = static_cast<std::size_t>(n - 1 - *attr);
        if (seen[p]) fail(ErrorCode::ingestion, "CSV header repeats attribute '" + header[c] + "'");
        seen[p] = true;
        column_for[p] = c;
    }

    Tabulator tab(schema);
    std::vector<std::string> ordered(static_cast<std::size_t>(n));
    while (next_record(in, record)) {
        if (record.empty()) continue;
        const std::size_t row = tab.records() + 1;
        std::vector<std::string> fields;
        try {
            fields = split_csv_record(record);
        } catch (const Error& e) {
            fail(ErrorCode::ingestion, "row " + std::to_string(row) + ": " + e.what());
        }
        if (fields.size() != header.size()) {
            fail(ErrorCode::ingestion, "row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                                           " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t p = 0; p < ordered.size(); ++p) ordered[p] = fields[column_for[p]];
        tab.add(ordered);
    }
    return tab.finish();
}

ContingencyTable tabulate_csv(const fs::path& path, const AttributeSchema& schema) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path.string());
    return tabulate_csv(in, schema);
}

}  // namespace psal::io
