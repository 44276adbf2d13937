#include "psal/table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "psal/error.hpp"
#include "psal/tolerance.hpp"

namespace psal {

std::size_t ipow(int base, int exponent) {
    if (base < 0 || exponent < 0) fail(ErrorCode::invalid_argument, "ipow: negative argument");
    std::size_t result = 1;
    for (int i = 0; i < exponent; ++i) {
        if (result > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(std::max(base, 1))) {
            fail(ErrorCode::invalid_argument, "table size overflows");
        }
        result *= static_cast<std::size_t>(base);
    }
    return result;
}

std::size_t TableShape::cells() const { return ipow(levels, attributes); }

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
    if (attributes_.empty()) fail(ErrorCode::invalid_argument, "schema has no attributes");
    const std::size_t m = attributes_.front().levels.size();
    if (m < 2) {
        fail(ErrorCode::invalid_argument,
             "attribute '" + attributes_.front().name + "' needs at least two levels");
    }
    std::set<std::string> names;
    for (const auto& attr : attributes_) {
        if (attr.name.empty()) fail(ErrorCode::invalid_argument, "attribute name is empty");
        if (!names.insert(attr.name).second) {
            fail(ErrorCode::invalid_argument, "duplicate attribute name '" + attr.name + "'");
        }
        if (attr.levels.size() != m) {
            fail(ErrorCode::invalid_argument,
                 "attribute '" + attr.name + "' has " + std::to_string(attr.levels.size()) +
                     " levels; every attribute must have " + std::to_string(m));
        }
        std::set<std::string> labels(attr.levels.begin(), attr.levels.end());
        if (labels.size() != attr.levels.size()) {
            fail(ErrorCode::invalid_argument, "attribute '" + attr.name + "' has duplicate level labels");
        }
    }
    // Guards M^N against overflow early.
    (void)ipow(static_cast<int>(m), static_cast<int>(attributes_.size()));
}

AttributeSchema AttributeSchema::synthetic(int attributes, int levels) {
    if (attributes < 1 || levels < 2) {
        fail(ErrorCode::invalid_argument, "synthetic schema needs N >= 1 and M >= 2");
    }
    std::vector<Attribute> list;
    for (int j = attributes - 1; j >= 0; --j) {
        Attribute attr{"C" + std::to_string(j), {}};
        for (int a = 0; a < levels; ++a) attr.levels.push_back(std::to_string(a));
        list.push_back(std::move(attr));
    }
    return AttributeSchema(std::move(list));
}

const Attribute& AttributeSchema::attribute(int index) const {
    if (index < 0 || index >= attribute_count()) {
        fail(ErrorCode::invalid_argument, "attribute index " + std::to_string(index) + " out of range");
    }
    return attributes_[static_cast<std::size_t>(attribute_count() - 1 - index)];
}

std::optional<int> AttributeSchema::find_attribute(std::string_view name) const {
    for (int p = 0; p < attribute_count(); ++p) {
        if (attributes_[static_cast<std::size_t>(p)].name == name) return attribute_count() - 1 - p;
    }
    return std::nullopt;
}

std::optional<int> AttributeSchema::find_level(int index, std::string_view label) const {
    const auto& levels = attribute(index).levels;
    const auto it = std::find(levels.begin(), levels.end(), label);
    if (it == levels.end()) return std::nullopt;
    return static_cast<int>(it - levels.begin());
}

std::size_t lex_rank(const CellIndex& index, const AttributeSchema& schema) {
    const int n = schema.attribute_count();
    const int m = schema.level_count();
    if (static_cast<int>(index.digits().size()) != n) {
        fail(ErrorCode::invalid_index, "cell index has " + std::to_string(index.digits().size()) +
                                           " digits, schema has " + std::to_string(n) + " attributes");
    }
    std::size_t rank = 0;
    for (int d : index.digits()) {
        if (d < 0 || d >= m) {
            fail(ErrorCode::invalid_index, "digit " + std::to_string(d) + " outside [0, " +
                                               std::to_string(m - 1) + "]");
        }
        rank = rank * static_cast<std::size_t>(m) + static_cast<std::size_t>(d);
    }
    return rank;
}

CellIndex lex_unrank(std::size_t rank, const AttributeSchema& schema) {
    const std::size_t cells = schema.cell_count();
    if (rank >= cells) {
        fail(ErrorCode::invalid_index,
             "rank " + std::to_string(rank) + " outside [0, " + std::to_string(cells) + ")");
    }
    const auto m = static_cast<std::size_t>(schema.level_count());
    std::vector<int> digits(static_cast<std::size_t>(schema.attribute_count()));
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        *it = static_cast<int>(rank % m);
        rank /= m;
    }
    return CellIndex(std::move(digits));
}

ContingencyTable::ContingencyTable(AttributeSchema schema, std::vector<double> counts, double n_total,
                                   bool adjusted)
    : schema_(std::move(schema)), counts_(std::move(counts)), n_total_(n_total), adjusted_(adjusted) {
    if (counts_.size() != schema_.cell_count()) {
        fail(ErrorCode::shape, "table has " + std::to_string(counts_.size()) + " counts, schema needs " +
                                   std::to_string(schema_.cell_count()));
    }
    double total = 0.0;
    for (double c : counts_) {
        if (!std::isfinite(c) || c < 0.0) fail(ErrorCode::domain, "counts must be finite and non-negative");
        if (adjusted_ && c < 1.0) fail(ErrorCode::state, "adjusted table has an entry below 1");
        total += c;
    }
    if (!(n_total_ > 0.0) || !std::isfinite(n_total_)) {
        fail(ErrorCode::domain, "population total must be positive");
    }
    if (!approx_equal(total, n_total_)) {
        fail(ErrorCode::shape, "counts sum to " + std::to_string(total) + " but n_total is " +
                                   std::to_string(n_total_));
    }
}

ContingencyTable ContingencyTable::from_counts(AttributeSchema schema, std::vector<double> counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    return ContingencyTable(std::move(schema), std::move(counts), total, false);
}

ContingencyTable ContingencyTable::from_adjusted(AttributeSchema schema, std::vector<double> counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    return ContingencyTable(std::move(schema), std::move(counts), total, true);
}

LogTable::LogTable(AttributeSchema schema, std::vector<double> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
    if (values_.size() != schema_.cell_count()) {
        fail(ErrorCode::shape, "log table has " + std::to_string(values_.size()) + " values, schema needs " +
                                   std::to_string(schema_.cell_count()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) fail(ErrorCode::domain, "log table entries must be finite");
    }
}

Tabulator::Tabulator(AttributeSchema schema)
    : schema_(std::move(schema)), counts_(schema_.cell_count(), 0.0) {}

void Tabulator::add(std::span<const std::string> labels) {
    const std::size_t row = records_ + 1;
    const int n = schema_.attribute_count();
    if (static_cast<int>(labels.size()) != n) {
        fail(ErrorCode::ingestion, "row " + std::to_string(row) + ": expected " + std::to_string(n) +
                                       " fields, got " + std::to_string(labels.size()));
    }
    const auto m = static_cast<std::size_t>(schema_.level_count());
    std::size_t rank = 0;
    for (int p = 0; p < n; ++p) {
        const int attr = n - 1 - p;
        const auto level = schema_.find_level(attr, labels[static_cast<std::size_t>(p)]);
        if (!level) {
            fail(ErrorCode::ingestion, "row " + std::to_string(row) + ", attribute '" +
                                           schema_.attribute(attr).name + "': unknown level '" +
                                           labels[static_cast<std::size_t>(p)] + "'");
        }
        rank = rank * m + static_cast<std::size_t>(*level);
    }
    counts_[rank] += 1.0;
    ++records_;
}

ContingencyTable Tabulator::finish() const {
    if (records_ == 0) fail(ErrorCode::empty_input, "no records to tabulate");
    return ContingencyTable(schema_, counts_, static_cast<double>(records_), false);
}

ContingencyTable tabulate(std::span<const std::vector<std::string>> records, const AttributeSchema& schema) {
    Tabulator tab(schema);
    for (const auto& rec : records) tab.add(rec);
    return tab.finish();
}

ContingencyTable zero_adjust(const ContingencyTable& table) {
    if (table.adjusted()) fail(ErrorCode::state, "table has already been zero-adjusted");
    const double n_total = table.n_total();
    const auto m_total = static_cast<double>(table.schema().cell_count());
    if (n_total <= m_total) {
        fail(ErrorCode::degenerate_population,
             "population total " + std::to_string(n_total) + " must exceed the cell count " +
                 std::to_string(static_cast<std::size_t>(m_total)));
    }
    const double spread = n_total - m_total;
    std::vector<double> out(table.counts().size());
    std::transform(table.counts().begin(), table.counts().end(), out.begin(),
                   [&](double c) { return (c / n_total) * spread + 1.0; });
    return ContingencyTable(table.schema(), std::move(out), n_total, true);
}

LogTable log_transform(const ContingencyTable& table) {
    std::vector<double> values(table.counts().size());
    for (std::size_t r = 0; r < values.size(); ++r) {
        const double c = table.counts()[r];
        if (!(c > 0.0)) {
            fail(ErrorCode::domain, "cell " + std::to_string(r) +
                                        " is zero; zero-adjust the table before taking logs");
        }
        values[r] = std::log(c);
    }
    return LogTable(table.schema(), std::move(values));
}

}  // namespace psal
