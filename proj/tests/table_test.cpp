#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "psal/error.hpp"
#include "psal/table.hpp"
#include "support.hpp"

using namespace psal;

namespace {

CellIndex cell(std::vector<int> digits) { return CellIndex(std::move(digits)); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected psal::Error");
    return ErrorCode::io;
}

}  // namespace

TEST_CASE("lex_rank evaluates digits as a base-M number") {
    CHECK(lex_rank(cell({1, 0, 1}), AttributeSchema::synthetic(3, 2)) == 5);
    CHECK(lex_rank(cell({0, 0}), AttributeSchema::synthetic(2, 3)) == 0);
    CHECK(lex_rank(cell({2, 2}), AttributeSchema::synthetic(2, 3)) == 8);
}

TEST_CASE("lex_unrank inverts lex_rank") {
    const auto schema = AttributeSchema::synthetic(3, 2);
    CHECK(lex_unrank(5, schema).digits() == std::vector<int>{1, 0, 1});
    CHECK(lex_unrank(0, schema).digits() == std::vector<int>{0, 0, 0});

    const auto big = AttributeSchema::synthetic(4, 3);
    for (std::size_t r = 0; r < 81; ++r) {
        const auto idx = lex_unrank(r, big);
        CHECK(lex_rank(idx, big) == r);
        // digit(j) agrees with repeated division
        const auto d = oracle::digits(r, 4, 3);
        for (int j = 0; j < 4; ++j) {
            CHECK(idx.digit(j) == d[static_cast<std::size_t>(j)]);
            CHECK(digit_of(r, j, 3) == d[static_cast<std::size_t>(j)]);
        }
    }
}

TEST_CASE("indexing rejects out-of-range digits and ranks") {
    const auto schema = AttributeSchema::synthetic(3, 2);
    CHECK(code_of([&] { lex_rank(cell({2, 0, 0}), schema); }) == ErrorCode::invalid_index);
    CHECK(code_of([&] { lex_rank(cell({0, 0}), schema); }) == ErrorCode::invalid_index);
    CHECK(code_of([&] { lex_rank(cell({0, -1, 0}), schema); }) == ErrorCode::invalid_index);
    CHECK(code_of([&] { lex_unrank(8, schema); }) == ErrorCode::invalid_index);
}

TEST_CASE("ipow guards against overflow") {
    CHECK(ipow(3, 7) == 2187);
    CHECK(ipow(5, 0) == 1);
    CHECK_THROWS_AS(ipow(10, 40), Error);
}

TEST_CASE("schema validation") {
    using Attrs = std::vector<Attribute>;
    CHECK_THROWS_AS(AttributeSchema(Attrs{}), Error);
    CHECK_THROWS_AS(AttributeSchema(Attrs{{"a", {"x"}}}), Error);
    CHECK_THROWS_AS(AttributeSchema(Attrs{{"a", {"x", "y"}}, {"b", {"x", "y", "z"}}}), Error);
    CHECK_THROWS_AS(AttributeSchema(Attrs{{"a", {"x", "y"}}, {"a", {"x", "y"}}}), Error);
    CHECK_THROWS_AS(AttributeSchema(Attrs{{"a", {"x", "x"}}}), Error);

    const AttributeSchema s(std::vector<Attribute>{{"sex", {"f", "m"}}, {"age", {"young", "old"}}});
    // the last listed attribute varies fastest and is attribute 0
    CHECK(s.attribute(0).name == "age");
    CHECK(s.attribute(1).name == "sex");
    CHECK(s.find_attribute("sex") == 1);
    CHECK_FALSE(s.find_attribute("income").has_value());
    CHECK(s.find_level(0, "old") == 1);
    CHECK_FALSE(s.find_level(0, "f").has_value());
}

TEST_CASE("tabulate counts records into their cells") {
    const auto schema = AttributeSchema::synthetic(2, 2);
    std::vector<std::vector<std::string>> same(4, {"1", "0"});
    const auto t = tabulate(same, schema);
    CHECK(testing::counts_of(t) == std::vector<double>{0, 0, 4, 0});
    CHECK(t.n_total() == 4);
    CHECK_FALSE(t.adjusted());

    std::vector<std::vector<std::string>> each{{"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}};
    CHECK(testing::counts_of(tabulate(each, schema)) == std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("tabulate does not depend on record order") {
    const auto schema = AttributeSchema::synthetic(3, 3);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> level(0, 2);
    std::vector<std::vector<std::string>> records(200);
    for (auto& r : records) {
        for (int j = 0; j < 3; ++j) r.push_back(std::to_string(level(rng)));
    }
    const auto base = tabulate(records, schema);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(records.begin(), records.end(), rng);
        CHECK(tabulate(records, schema) == base);
    }
}

TEST_CASE("tabulate errors name the row and attribute") {
    const AttributeSchema schema(std::vector<Attribute>{{"sex", {"f", "m"}}, {"age", {"young", "old"}}});
    std::vector<std::vector<std::string>> rows{{"f", "young"}, {"m", "old"}, {"x", "old"}};
    try {
        tabulate(rows, schema);
        FAIL("expected an ingestion error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ingestion);
        const std::string what = e.what();
        CHECK(what.find("row 3") != std::string::npos);
        CHECK(what.find("sex") != std::string::npos);
    }
    std::vector<std::vector<std::string>> none;
    CHECK(code_of([&] { tabulate(none, schema); }) == ErrorCode::empty_input);
}

TEST_CASE("zero_adjust applies the affine map") {
    const auto schema = AttributeSchema::synthetic(2, 2);
    const auto a = zero_adjust(ContingencyTable::from_counts(schema, {5, 1, 1, 1}));
    CHECK(a.adjusted());
    CHECK(a.n_total() == doctest::Approx(8));
    const std::vector<double> want{3.5, 1.5, 1.5, 1.5};
    for (std::size_t i = 0; i < 4; ++i) CHECK(a.counts()[i] == doctest::Approx(want[i]).epsilon(1e-12));

    const auto spike = zero_adjust(ContingencyTable::from_counts(schema, {8, 0, 0, 0}));
    CHECK(testing::counts_of(spike) == std::vector<double>{5, 1, 1, 1});

    const auto uniform = zero_adjust(ContingencyTable::from_counts(schema, {6, 6, 6, 6}));
    for (double c : uniform.counts()) CHECK(c == doctest::Approx(6).epsilon(1e-12));
}

TEST_CASE("zero_adjust preconditions") {
    const auto schema = AttributeSchema::synthetic(2, 2);
    CHECK(code_of([&] { zero_adjust(ContingencyTable::from_counts(schema, {1, 1, 1, 1})); }) ==
          ErrorCode::degenerate_population);
    const auto once = zero_adjust(ContingencyTable::from_counts(schema, {5, 1, 1, 1}));
    CHECK(code_of([&] { zero_adjust(once); }) == ErrorCode::state);
}

TEST_CASE("zero_adjust keeps the total and lifts every cell to at least one") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> count(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 3;
        const auto schema = AttributeSchema::synthetic(n, 3);
        std::vector<double> raw(schema.cell_count());
        double total = 0;
        for (double& c : raw) total += (c = count(rng));
        if (total <= static_cast<double>(raw.size())) continue;
        const auto a = zero_adjust(ContingencyTable::from_counts(schema, raw));
        double sum = 0;
        for (double c : a.counts()) {
            CHECK(c >= 1.0);
            sum += c;
        }
        CHECK(sum == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("log_transform") {
    const auto schema = AttributeSchema::synthetic(2, 2);
    const auto ones = log_transform(ContingencyTable::from_adjusted(schema, {1, 1, 1, 1}));
    for (double v : ones.values()) CHECK(v == 0.0);

    const auto e = log_transform(ContingencyTable::from_adjusted(schema, {std::exp(1.0), 1, 1, 1}));
    CHECK(e.values()[0] == doctest::Approx(1.0).epsilon(1e-15));

    const auto t = log_transform(ContingencyTable::from_adjusted(schema, {3.5, 1.5, 1.5, 1.5}));
    CHECK(t.values()[0] == doctest::Approx(std::log(3.5)));
    CHECK(t.values()[3] == doctest::Approx(std::log(1.5)));

    CHECK(code_of([&] { log_transform(ContingencyTable::from_counts(schema, {4, 0, 1, 1})); }) == ErrorCode::domain);
}

TEST_CASE("table constructor validation") {
    const auto schema = AttributeSchema::synthetic(2, 2);
    CHECK(code_of([&] { ContingencyTable::from_counts(schema, {1, 2, 3}); }) == ErrorCode::shape);
    CHECK_THROWS_AS(ContingencyTable::from_counts(schema, {1, -2, 3, 4}), Error);
    CHECK_THROWS_AS(ContingencyTable::from_counts(schema, {1, std::numeric_limits<double>::quiet_NaN(), 3, 4}),
                    Error);
    CHECK_THROWS_AS(ContingencyTable(schema, {1, 2, 3, 4}, 11, false), Error);
    CHECK_THROWS_AS(ContingencyTable::from_adjusted(schema, {1, 0.5, 3, 4}), Error);
}
