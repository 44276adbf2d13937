#pragma once

// Contingency tables over N categorical attributes that share a common level
// count M.
//
// Attribute numbering follows the usual log-linear convention: attribute C_j
// owns digit j of the cell index and the flat cell rank is
//
//     r = sum_j digit_j * M^j,
//
// so C_0 varies fastest. Schema files list attributes most-significant first
// (C_{N-1} ... C_0), which makes the flat order the familiar row-major one:
// the last listed attribute varies fastest.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psal {

struct TableShape {
    int attributes = 0;  // N
    int levels = 0;      // M

    std::size_t cells() const;  // M^N
    bool operator==(const TableShape&) const = default;
};

/// M^e for small non-negative exponents; throws on overflow.
std::size_t ipow(int base, int exponent);

struct Attribute {
    std::string name;
    std::vector<std::string> levels;

    bool operator==(const Attribute&) const = default;
};

class AttributeSchema {
public:
    /// `attributes` in listing order (C_{N-1} first). Rejects empty schemas,
    /// fewer than two levels, unequal level counts and duplicate names/labels.
    explicit AttributeSchema(std::vector<Attribute> attributes);

    /// Schema with attributes named "C<j>" and levels "0".."M-1".
    static AttributeSchema synthetic(int attributes, int levels);

    int attribute_count() const { return static_cast<int>(attributes_.size()); }
    int level_count() const { return static_cast<int>(attributes_.front().levels.size()); }
    TableShape shape() const { return {attribute_count(), level_count()}; }
    std::size_t cell_count() const { return shape().cells(); }

    /// Attributes in listing order.
    const std::vector<Attribute>& listed() const { return attributes_; }

    /// Attribute C_index.
    const Attribute& attribute(int index) const;

    std::optional<int> find_attribute(std::string_view name) const;
    std::optional<int> find_level(int index, std::string_view label) const;

    bool operator==(const AttributeSchema&) const = default;

private:
    std::vector<Attribute> attributes_;
};

/// Digits of one cell, most significant first: (i_{N-1}, ..., i_0).
class CellIndex {
public:
    CellIndex() = default;
    explicit CellIndex(std::vector<int> digits) : digits_(std::move(digits)) {}

    const std::vector<int>& digits() const { return digits_; }

    /// Digit i_j belonging to attribute C_j.
    int digit(int attribute) const {
        return digits_[digits_.size() - 1 - static_cast<std::size_t>(attribute)];
    }

    bool operator==(const CellIndex&) const = default;

private:
    std::vector<int> digits_;
};

std::size_t lex_rank(const CellIndex& index, const AttributeSchema& schema);
CellIndex lex_unrank(std::size_t rank, const AttributeSchema& schema);

/// Digit of attribute C_j in flat cell r.
inline int digit_of(std::size_t rank, int attribute, int levels) {
    for (int j = 0; j < attribute; ++j) rank /= static_cast<std::size_t>(levels);
    return static_cast<int>(rank % static_cast<std::size_t>(levels));
}

class ContingencyTable {
public:
    /// Validates length, non-negativity, the total and the adjusted invariant.
    ContingencyTable(AttributeSchema schema, std::vector<double> counts, double n_total, bool adjusted);

    /// Raw counts; n_total is their sum and the table is unadjusted.
    static ContingencyTable from_counts(AttributeSchema schema, std::vector<double> counts);

    /// Counts that are already on the adjusted scale (every entry >= 1).
    static ContingencyTable from_adjusted(AttributeSchema schema, std::vector<double> counts);

    const AttributeSchema& schema() const { return schema_; }
    TableShape shape() const { return schema_.shape(); }
    std::span<const double> counts() const { return counts_; }
    double n_total() const { return n_total_; }
    bool adjusted() const { return adjusted_; }

    bool operator==(const ContingencyTable&) const = default;

private:
    AttributeSchema schema_;
    std::vector<double> counts_;
    double n_total_;
    bool adjusted_;
};

/// Natural-log image of a table with strictly positive entries.
class LogTable {
public:
    LogTable(AttributeSchema schema, std::vector<double> values);

    const AttributeSchema& schema() const { return schema_; }
    TableShape shape() const { return schema_.shape(); }
    std::span<const double> values() const { return values_; }

private:
    AttributeSchema schema_;
    std::vector<double> values_;
};

/// Accumulates microdata records (labels in schema listing order) into counts.
class Tabulator {
public:
    explicit Tabulator(AttributeSchema schema);

    /// Throws ErrorCode::ingestion naming the 1-based record number and the
    /// attribute when a label is unknown or the arity is wrong.
    void add(std::span<const std::string> labels);

    std::size_t records() const { return records_; }

    /// Throws ErrorCode::empty_input when nothing was added.
    ContingencyTable finish() const;

private:
    AttributeSchema schema_;
    std::vector<double> counts_;
    std::size_t records_ = 0;
};

ContingencyTable tabulate(std::span<const std::vector<std::string>> records, const AttributeSchema& schema);

/// tau_k = (tau0_k / N_T) * (N_T - M_T) + 1. Requires N_T > M_T and an
/// unadjusted table.
ContingencyTable zero_adjust(const ContingencyTable& table);

/// Elementwise natural log; every count must be strictly positive. The base is
/// fixed: salience values are ratios of norms of the same log vector, so the
/// base cancels.
LogTable log_transform(const ContingencyTable& table);

}  // namespace psal
