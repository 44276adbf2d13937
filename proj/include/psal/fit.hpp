#pragma once

// Orthogonal expansion of a log table over the subset subspaces:
//
//     T = beta_0 u + sum_S  X_S beta_S,      beta_S = D_S^{-1} X_S^T T
//
// with u the normalised constant vector and X_S the unnormalised basis block
// of subset S. The beta_S depend on the chosen basis inside each subspace;
// the projections chi_S = X_S beta_S and their magnitudes do not.

#include <map>
#include <span>
#include <vector>

#include "psal/basis.hpp"
#include "psal/table.hpp"

namespace psal {

struct BetaVector {
    TableShape shape;
    double beta0 = 0.0;
    std::map<SubsetKey, std::vector<double>, CanonicalOrder> blocks;  // every non-empty subset

    std::size_t coefficient_count() const;
    const std::vector<double>& block(const SubsetKey& subset) const;
};

struct ProjectionResult {
    SubsetKey subset;
    std::vector<double> chi;
    double magnitude = 0.0;
};

BetaVector fit_beta(TableShape shape, std::span<const double> log_values, int workers = 1);
BetaVector fit_beta(const LogTable& log_table, int workers = 1);

std::vector<double> reconstruct_values(const BetaVector& beta);
LogTable reconstruct(const BetaVector& beta, const AttributeSchema& schema);

ProjectionResult project_subset(TableShape shape, std::span<const double> log_values, const SubsetKey& subset);
ProjectionResult project_subset(const LogTable& log_table, const SubsetKey& subset);

/// |T - mean(T) 1|
double orthogonal_complement_magnitude(std::span<const double> log_values);
double orthogonal_complement_magnitude(const LogTable& log_table);

}  // namespace psal
