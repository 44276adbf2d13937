#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "psal/error.hpp"
#include "psal/io.hpp"
#include "support.hpp"

using namespace psal;
namespace fs = std::filesystem;

namespace {

AttributeSchema demo_schema() {
    return AttributeSchema(std::vector<Attribute>{{"sex", {"f", "m"}}, {"age", {"young", "old"}}});
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "psal_io_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("schema and table JSON round trip") {
    const auto schema = demo_schema();
    CHECK(io::schema_from_json(io::to_json(schema)) == schema);

    const auto table = zero_adjust(ContingencyTable::from_counts(schema, {5, 1, 1, 1}));
    const auto path = scratch("table.json");
    io::write_table(path, table);
    const auto back = io::read_table(path);
    CHECK(back == table);
    CHECK(back.adjusted());
}

TEST_CASE("malformed JSON inputs") {
    CHECK_THROWS_AS(io::schema_from_json(io::Json::parse(R"({"attrs": []})")), Error);
    CHECK_THROWS_AS(io::schema_from_json(io::Json::parse(R"({"attributes": [{"levels": ["a","b"]}]})")), Error);
    CHECK_THROWS_AS(io::table_from_json(io::Json::parse(R"({"counts": [1]})")), Error);
    const auto path = scratch("broken.json");
    std::ofstream(path) << "{ not json";
    try {
        io::read_json(path);
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
    CHECK_THROWS_AS(io::read_json(scratch("missing.json")), Error);
}

TEST_CASE("CSV record splitting") {
    CHECK(io::split_csv_record("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(io::split_csv_record("\"a,b\",c") == std::vector<std::string>{"a,b", "c"});
    CHECK(io::split_csv_record("\"say \"\"hi\"\"\",") == std::vector<std::string>{"say \"hi\"", ""});
    CHECK_THROWS_AS(io::split_csv_record("\"open"), Error);
}

TEST_CASE("CSV tabulation") {
    std::istringstream in(
        "\xEF\xBB\xBF"
        "age,sex\r\n"
        "young,f\n"
        "old,f\n"
        "\n"
        "old,m\n"
        "old,m\n"
        "young,m\n"
        "young,f\n"
        "old,f\n"
        "young,f\n");
    const auto t = io::tabulate_csv(in, demo_schema());
    // cells: (sex, age) with age fastest
    CHECK(testing::counts_of(t) == std::vector<double>{3, 2, 1, 2});
    CHECK(t.n_total() == 8);
}

TEST_CASE("CSV errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(io::tabulate_csv(empty, demo_schema()), Error);

    std::istringstream header_only("sex,age\n");
    try {
        io::tabulate_csv(header_only, demo_schema());
        FAIL("expected empty-input error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::empty_input);
    }

    std::istringstream bad_header("sex,income\nf,young\n");
    CHECK_THROWS_AS(io::tabulate_csv(bad_header, demo_schema()), Error);

    std::istringstream row7("sex,age\nf,young\nf,old\nm,young\nm,old\nf,young\nf,old\nm,middle\nm,old\n");
    try {
        io::tabulate_csv(row7, demo_schema());
        FAIL("expected ingestion error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ingestion);
        const std::string what = e.what();
        CHECK(what.find("row 7") != std::string::npos);
        CHECK(what.find("age") != std::string::npos);
    }

    std::istringstream short_row("sex,age\nf\n");
    CHECK_THROWS_AS(io::tabulate_csv(short_row, demo_schema()), Error);
}

TEST_CASE("atomic writes leave no temporary files") {
    const auto path = scratch("atomic.json");
    io::write_json_atomic(path, io::Json{{"a", 1}});
    io::write_json_atomic(path, io::Json{{"a", 2}});
    CHECK(io::read_json(path).at("a") == 2);
    for (const auto& entry : fs::directory_iterator(path.parent_path())) {
        CHECK(entry.path().string().find(".tmp.") == std::string::npos);
    }
    CHECK_THROWS_AS(io::write_json_atomic(scratch("no/such/dir/x.json"), io::Json::object()), Error);
}
