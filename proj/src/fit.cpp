#include "psal/fit.hpp"

#include <cmath>

#include "psal/error.hpp"
#include "psal/parallel.hpp"
#include "psal/simd.hpp"

namespace psal {

std::size_t BetaVector::coefficient_count() const {
    std::size_t n = 1;
    for (const auto& [key, block] : blocks) n += block.size();
    return n;
}

const std::vector<double>& BetaVector::block(const SubsetKey& subset) const {
    const auto it = blocks.find(subset);
    if (it == blocks.end()) fail(ErrorCode::invalid_argument, "no coefficient block for subset " + subset.to_string());
    return it->second;
}

namespace {

void check_values(TableShape shape, std::span<const double> values) {
    if (values.size() != shape.cells()) {
        fail(ErrorCode::shape, "log table has " + std::to_string(values.size()) + " values, shape needs " +
                                   std::to_string(shape.cells()));
    }
}

}  // namespace

BetaVector fit_beta(TableShape shape, std::span<const double> log_values, int workers) {
    check_values(shape, log_values);
    BetaVector beta{shape, 0.0, {}};
    beta.beta0 = simd::sum(log_values) / std::sqrt(static_cast<double>(log_values.size()));

    const auto subsets = enumerate_all_subsets(shape.attributes);
    std::vector<std::vector<double>> blocks(subsets.size());
    parallel_for(subsets.size() - 1, workers, [&](std::size_t i) {
        const auto& subset = subsets[i + 1];
        auto& block = blocks[i + 1];
        block.reserve(subspace_dimension(subset.order(), shape.levels));
        for_each_basis_column(subset, shape, [&](std::span<const int>, std::span<const double> column, double norm_sq) {
            block.push_back(simd::dot(column, log_values) / norm_sq);
        });
    });
    for (std::size_t i = 1; i < subsets.size(); ++i) beta.blocks.emplace(subsets[i], std::move(blocks[i]));
    return beta;
}

BetaVector fit_beta(const LogTable& log_table, int workers) {
    return fit_beta(log_table.shape(), log_table.values(), workers);
}

std::vector<double> reconstruct_values(const BetaVector& beta) {
    const TableShape shape = beta.shape;
    std::vector<double> out(shape.cells(), beta.beta0 / std::sqrt(static_cast<double>(shape.cells())));
    std::size_t seen = 0;
    for (const auto& subset : enumerate_all_subsets(shape.attributes)) {
        if (subset.empty()) continue;
        const auto it = beta.blocks.find(subset);
        if (it == beta.blocks.end()) fail(ErrorCode::shape, "missing coefficient block " + subset.to_string());
        const auto& block = it->second;
        if (block.size() != subspace_dimension(subset.order(), shape.levels)) {
            fail(ErrorCode::shape, "coefficient block " + subset.to_string() + " has " +
                                       std::to_string(block.size()) + " entries");
        }
        ++seen;
        std::size_t c = 0;
        for_each_basis_column(subset, shape, [&](std::span<const int>, std::span<const double> column, double) {
            const double b = block[c++];
            if (b != 0.0) simd::axpy(b, column, out);
        });
    }
    if (seen != beta.blocks.size()) fail(ErrorCode::shape, "coefficient vector has unexpected blocks");
    return out;
}

LogTable reconstruct(const BetaVector& beta, const AttributeSchema& schema) {
    if (schema.shape() != beta.shape) fail(ErrorCode::shape, "schema does not match the coefficient vector");
    return LogTable(schema, reconstruct_values(beta));
}

ProjectionResult project_subset(TableShape shape, std::span<const double> log_values, const SubsetKey& subset) {
    check_values(shape, log_values);
    subset.check_within(shape.attributes);
    ProjectionResult result{subset, std::vector<double>(log_values.size(), 0.0), 0.0};
    for_each_basis_column(subset, shape, [&](std::span<const int>, std::span<const double> column, double norm_sq) {
        simd::axpy(simd::dot(column, log_values) / norm_sq, column, result.chi);
    });
    result.magnitude = std::sqrt(simd::sum_sq(result.chi));
    return result;
}

ProjectionResult project_subset(const LogTable& log_table, const SubsetKey& subset) {
    return project_subset(log_table.shape(), log_table.values(), subset);
}

double orthogonal_complement_magnitude(std::span<const double> log_values) {
    if (log_values.empty()) return 0.0;
    const double mean = simd::sum(log_values) / static_cast<double>(log_values.size());
    double acc = 0.0;
    for (double t : log_values) acc += (t - mean) * (t - mean);
    return std::sqrt(acc);
}

double orthogonal_complement_magnitude(const LogTable& log_table) {
    return orthogonal_complement_magnitude(log_table.values());
}

}  // namespace psal
