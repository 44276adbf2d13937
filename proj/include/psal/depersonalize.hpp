#pragma once

// De-personalisation by interaction limiting.
//
// The log table is expanded over the subset subspaces, the blocks of the
// chosen subsets are zeroed, and the table is rebuilt and exponentiated.
// Zeroing a block removes an orthogonal component of the log table, so the
// salience function of any subset containing a zeroed block can only drop,
// while subsets containing none keep their value (as long as the released
// table is not rescaled, which shifts the uniform component).

#include <span>
#include <vector>

#include "psal/basis.hpp"
#include "psal/table.hpp"

namespace psal {

enum class LimitMode { order_limit, selective };

struct LimitSpec {
    LimitMode mode = LimitMode::order_limit;
    int max_order = 0;                   // order_limit: keep blocks of order <= max_order
    std::vector<SubsetKey> zero_subsets;  // selective: requested blocks (closed upward)
    bool renormalize = false;            // rescale the release to the original total
    bool round_counts = false;           // integer release, total preserved

    static LimitSpec order_limit(int max_order);
    static LimitSpec selective(std::vector<SubsetKey> zero_subsets);
};

enum class AuditContract { non_increasing, unchanged };

struct AuditEntry {
    SubsetKey subset;
    double before = 0.0;
    double after = 0.0;
    bool contains_zeroed = false;
    AuditContract contract = AuditContract::non_increasing;
    bool violation = false;

    double delta() const { return after - before; }
};

struct ReleaseAudit {
    std::vector<SubsetKey> requested;  // blocks asked for (selective) or empty
    std::vector<SubsetKey> zeroed;     // blocks actually zeroed, enumeration order
    std::vector<AuditEntry> entries;   // salience function before / after
    double total_before = 0.0;
    double total_after = 0.0;
    double max_refit_norm = 0.0;       // largest zeroed-block norm after refitting the release
    bool renormalized = false;
    bool rounded = false;

    double drift() const { return total_after - total_before; }
    std::size_t violations() const;
};

struct Release {
    ContingencyTable table;
    ReleaseAudit audit;
};

/// Every non-empty subset of {N-1..0} containing at least one requested subset.
std::vector<SubsetKey> hierarchy_closure(std::span<const SubsetKey> requested, int attributes);

/// Zero every block of order > spec.max_order (1 <= max_order <= N).
Release interaction_limit(const ContingencyTable& table, const LimitSpec& spec, int workers = 1);

/// Zero the requested blocks and every block above them.
Release selective_zero(const ContingencyTable& table, const LimitSpec& spec, int workers = 1);

/// Dispatches on spec.mode.
Release depersonalize(const ContingencyTable& table, const LimitSpec& spec, int workers = 1);

/// Salience function of every size-k subset before and after release. With
/// no zero set, every subset is held to the non-increasing contract;
/// otherwise subsets free of zeroed blocks must be unchanged unless the
/// release was renormalised.
ReleaseAudit audit(const ContingencyTable& original, const ContingencyTable& released, int k,
                   std::span<const SubsetKey> zeroed = {}, bool renormalized = false);

/// Half-to-even rounding with a largest-remainder correction so the result
/// sums to `target`.
std::vector<double> round_preserving_total(std::span<const double> values, long long target);

}  // namespace psal
