#pragma once

// Self-check suites run by `psal verify`: basis orthogonality and dimension,
// agreement with literal Gram-Schmidt, Parseval, expansion round-trip, the
// geometric-mean projection identity, and vertex salience values.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "psal/table.hpp"

namespace psal {

/// Random raw counts (roughly a third of cells empty) pushed through
/// zero_adjust.
ContingencyTable random_adjusted_table(TableShape shape, std::mt19937_64& rng);

struct VerifyOptions {
    int attributes = 4;
    int levels = 2;
    std::uint64_t seed = 1;
    int trials = 20;
    int workers = 1;
    bool perturb = false;  // corrupt one side of the geometric-mean check (negative control)
};

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    double max_error = 0.0;
    std::string detail;

    bool passed() const { return failures == 0; }
};

struct VerifyResult {
    std::vector<SuiteResult> suites;
    std::size_t basis_columns = 0;

    bool passed() const;
};

/// Throws ErrorCode::size_guard when M^N exceeds the oracle limit.
VerifyResult run_verification(const VerifyOptions& options);

}  // namespace psal
