#include "psal/depersonalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "psal/error.hpp"
#include "psal/fit.hpp"
#include "psal/salience.hpp"
#include "psal/tolerance.hpp"

namespace psal {

LimitSpec LimitSpec::order_limit(int max_order) {
    LimitSpec spec;
    spec.mode = LimitMode::order_limit;
    spec.max_order = max_order;
    return spec;
}

LimitSpec LimitSpec::selective(std::vector<SubsetKey> zero_subsets) {
    LimitSpec spec;
    spec.mode = LimitMode::selective;
    spec.zero_subsets = std::move(zero_subsets);
    return spec;
}

std::size_t ReleaseAudit::violations() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.violation; }));
}

std::vector<SubsetKey> hierarchy_closure(std::span<const SubsetKey> requested, int attributes) {
    for (const auto& s : requested) s.check_within(attributes);
    std::vector<SubsetKey> out;
    for (const auto& candidate : enumerate_all_subsets(attributes)) {
        if (candidate.empty()) continue;
        const bool hit = std::any_of(requested.begin(), requested.end(),
                                     [&](const SubsetKey& r) { return r.is_subset_of(candidate); });
        if (hit) out.push_back(candidate);
    }
    return out;
}

namespace {

bool contains_any(const SubsetKey& subset, std::span<const SubsetKey> blocks) {
    return std::any_of(blocks.begin(), blocks.end(), [&](const SubsetKey& b) { return b.is_subset_of(subset); });
}

void fill_audit_entries(ReleaseAudit& audit, const ContingencyTable& original, const ContingencyTable& released,
                        const std::vector<SubsetKey>& subsets, std::span<const SubsetKey> zeroed, bool renormalized) {
    for (const auto& subset : subsets) {
        AuditEntry e;
        e.subset = subset;
        e.before = salience_function(original, subset).psi;
        e.after = salience_function(released, subset).psi;
        e.contains_zeroed = contains_any(subset, zeroed);
        e.contract = (zeroed.empty() || e.contains_zeroed || renormalized) ? AuditContract::non_increasing
                                                                           : AuditContract::unchanged;
        e.violation = e.contract == AuditContract::non_increasing ? e.after > e.before + kRelTol
                                                                  : !approx_equal(e.after, e.before);
        audit.entries.push_back(std::move(e));
    }
}

Release release_without(const ContingencyTable& table, const LimitSpec& spec, std::vector<SubsetKey> zeroed,
                        int workers) {
    const TableShape shape = table.shape();
    const LogTable logs = log_transform(table);
    BetaVector beta = fit_beta(logs, workers);
    for (const auto& s : zeroed) {
        auto& block = beta.blocks.at(s);
        std::fill(block.begin(), block.end(), 0.0);
    }
    std::vector<double> counts = reconstruct_values(beta);
    for (double& c : counts) c = std::exp(c);
    if (spec.renormalize) {
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const double factor = table.n_total() / total;
        for (double& c : counts) c *= factor;
    }
    const double real_total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const bool adjusted = std::all_of(counts.begin(), counts.end(), [](double c) { return c >= 1.0; });
    ContingencyTable real_release(table.schema(), counts, real_total, adjusted && table.adjusted());

    Release out{real_release, {}};
    ReleaseAudit& audit = out.audit;
    audit.requested = spec.zero_subsets;
    audit.zeroed = std::move(zeroed);
    audit.renormalized = spec.renormalize;
    audit.total_before = table.n_total();

    const BetaVector refit = fit_beta(log_transform(real_release), workers);
    for (const auto& s : audit.zeroed) {
        const auto& block = refit.block(s);
        const double norm = std::sqrt(std::inner_product(block.begin(), block.end(), block.begin(), 0.0));
        audit.max_refit_norm = std::max(audit.max_refit_norm, norm);
    }

    std::vector<SubsetKey> audited;
    for (const auto& s : enumerate_all_subsets(shape.attributes)) {
        if (!s.empty()) audited.push_back(s);
    }
    fill_audit_entries(audit, table, real_release, audited, audit.zeroed, spec.renormalize);

    if (spec.round_counts) {
        const double target_total = spec.renormalize ? table.n_total() : real_total;
        auto rounded = round_preserving_total(counts, std::llround(target_total));
        const double total = std::accumulate(rounded.begin(), rounded.end(), 0.0);
        const bool rounded_adjusted = std::all_of(rounded.begin(), rounded.end(), [](double c) { return c >= 1.0; });
        out.table = ContingencyTable(table.schema(), std::move(rounded), total, rounded_adjusted && table.adjusted());
        audit.rounded = true;
    }
    audit.total_after = out.table.n_total();
    return out;
}

}  // namespace

Release interaction_limit(const ContingencyTable& table, const LimitSpec& spec, int workers) {
    const int n = table.shape().attributes;
    if (spec.max_order < 1 || spec.max_order > n) {
        fail(ErrorCode::invalid_argument, "maximum interaction order " + std::to_string(spec.max_order) +
                                              " outside [1, " + std::to_string(n) + "]");
    }
    std::vector<SubsetKey> zeroed;
    for (const auto& s : enumerate_all_subsets(n)) {
        if (s.order() > spec.max_order) zeroed.push_back(s);
    }
    return release_without(table, spec, std::move(zeroed), workers);
}

Release selective_zero(const ContingencyTable& table, const LimitSpec& spec, int workers) {
    if (spec.zero_subsets.empty()) fail(ErrorCode::invalid_argument, "selective zeroing needs at least one subset");
    for (const auto& s : spec.zero_subsets) {
        if (s.empty()) fail(ErrorCode::invalid_argument, "the constant term cannot be zeroed");
    }
    auto zeroed = hierarchy_closure(spec.zero_subsets, table.shape().attributes);
    return release_without(table, spec, std::move(zeroed), workers);
}

Release depersonalize(const ContingencyTable& table, const LimitSpec& spec, int workers) {
    return spec.mode == LimitMode::order_limit ? interaction_limit(table, spec, workers)
                                               : selective_zero(table, spec, workers);
}

ReleaseAudit audit(const ContingencyTable& original, const ContingencyTable& released, int k,
                   std::span<const SubsetKey> zeroed, bool renormalized) {
    if (!(original.schema() == released.schema())) {
        fail(ErrorCode::shape, "released table does not share the original's schema");
    }
    const int n = original.shape().attributes;
    if (k < 1 || k > n) fail(ErrorCode::invalid_argument, "audit needs 1 <= k <= N");
    ReleaseAudit out;
    out.zeroed.assign(zeroed.begin(), zeroed.end());
    out.renormalized = renormalized;
    out.total_before = original.n_total();
    out.total_after = released.n_total();
    fill_audit_entries(out, original, released, enumerate_subsets(n, k), zeroed, renormalized);
    return out;
}

std::vector<double> round_preserving_total(std::span<const double> values, long long target) {
    std::vector<double> out(values.size());
    long long sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::nearbyint(values[i]);
        sum += static_cast<long long>(out[i]);
    }
    long long diff = target - sum;
    if (diff == 0) return out;
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Largest remainders gain a unit first; smallest lose one first.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ra = values[a] - out[a];
        const double rb = values[b] - out[b];
        return diff > 0 ? ra > rb : ra < rb;
    });
    for (std::size_t i : order) {
        if (diff == 0) break;
        if (diff > 0) {
            out[i] += 1.0;
            --diff;
        } else if (out[i] >= 1.0) {
            out[i] -= 1.0;
            ++diff;
        }
    }
    if (diff != 0) fail(ErrorCode::domain, "cannot round to the requested total");
    return out;
}

}  // namespace psal
