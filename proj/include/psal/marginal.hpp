#pragma once

// Conditional subtables and geometric-mean marginalisation.
//
// For a subset S of k attributes, fixing the other N-k ("conditioning")
// attributes to one combination g picks out an M^k conditional subtable.
// Subtable cells are ordered by the subset digits with the first (largest)
// member most significant, i.e. in the order they occur in the full table.
// Conditioning vectors are aligned with complement(S), also descending, and
// are enumerated with the last entry fastest.
//
// The geometric mean over all M^{N-k} conditional subtables keeps exactly the
// interaction structure of S: projecting its log onto the subspace of any
// R within S in the reduced k-attribute basis gives M^{-(N-k)/2} times the
// projection of the full log table onto R's subspace.

#include <span>
#include <vector>

#include "psal/basis.hpp"
#include "psal/table.hpp"

namespace psal {

struct ConditionalSubtable {
    SubsetKey subset;
    std::vector<int> conditioning;
    std::vector<double> counts;
};

struct GeoMeanTable {
    SubsetKey subset;
    std::vector<double> counts;
    std::vector<double> log_values;
};

/// Attributes not in `subset`, descending.
SubsetKey complement(const SubsetKey& subset, int attributes);

/// Position p of each inner member within `outer` becomes attribute
/// (outer.order() - 1 - p) of the reduced table. Throws unless inner is
/// contained in outer.
SubsetKey reindex_within(const SubsetKey& inner, const SubsetKey& outer);

/// Flat rank of the subtable cell holding full-table cell `rank`.
std::size_t subtable_rank(std::size_t rank, const SubsetKey& subset, int levels);

ConditionalSubtable conditional_subtable(const ContingencyTable& table, const SubsetKey& subset,
                                         std::span<const int> conditioning);

/// exp(mean of ln over the conditioning combinations), per subset cell.
GeoMeanTable geometric_mean_subtable(const ContingencyTable& table, const SubsetKey& subset);

struct MagnitudePair {
    double lhs = 0.0;  // full table, full basis
    double rhs = 0.0;  // geometric-mean table, reduced basis, rescaled

    bool agrees(double rel = 1e-9, double abs = 1e-12) const;
};

/// lhs = |projection of ln(table) onto inner's subspace|;
/// rhs = M^{(N-k0)/2} |projection of ln(geo-mean over outer) onto the
/// re-indexed inner subspace of the reduced k0-attribute basis|.
MagnitudePair theorem1_check(const ContingencyTable& table, const SubsetKey& outer, const SubsetKey& inner);

/// lhs = sqrt(sum over non-empty inner within outer of the full-table
/// projection magnitudes squared); rhs = M^{(N-k0)/2} times the part of the
/// geo-mean log table orthogonal to the constant vector.
MagnitudePair theorem1_total_check(const ContingencyTable& table, const SubsetKey& outer);

}  // namespace psal
