#include "psal/marginal.hpp"

#include <algorithm>
#include <cmath>

#include "psal/error.hpp"
#include "psal/fit.hpp"
#include "psal/tolerance.hpp"

namespace psal {

SubsetKey complement(const SubsetKey& subset, int attributes) {
    subset.check_within(attributes);
    std::vector<int> rest;
    for (int j = attributes - 1; j >= 0; --j) {
        if (!subset.contains(j)) rest.push_back(j);
    }
    return SubsetKey(std::move(rest));
}

SubsetKey reindex_within(const SubsetKey& inner, const SubsetKey& outer) {
    if (!inner.is_subset_of(outer)) {
        fail(ErrorCode::invalid_argument, "subset " + inner.to_string() + " is not contained in " + outer.to_string());
    }
    const auto& om = outer.members();
    std::vector<int> mapped;
    for (int m : inner.members()) {
        const auto p = static_cast<int>(std::find(om.begin(), om.end(), m) - om.begin());
        mapped.push_back(outer.order() - 1 - p);
    }
    return SubsetKey(std::move(mapped));
}

std::size_t subtable_rank(std::size_t rank, const SubsetKey& subset, int levels) {
    std::size_t out = 0;
    for (int m : subset.members()) {
        out = out * static_cast<std::size_t>(levels) + static_cast<std::size_t>(digit_of(rank, m, levels));
    }
    return out;
}

namespace {

std::vector<std::size_t> attribute_strides(int attributes, int levels) {
    std::vector<std::size_t> s(static_cast<std::size_t>(attributes));
    std::size_t w = 1;
    for (int j = 0; j < attributes; ++j) {
        s[static_cast<std::size_t>(j)] = w;
        w *= static_cast<std::size_t>(levels);
    }
    return s;
}

// Full-table ranks of the subtable cells, in subtable order, for one
// conditioning combination.
std::vector<std::size_t> subtable_cells(const SubsetKey& subset, const SubsetKey& rest,
                                        std::span<const int> conditioning, TableShape shape) {
    const auto stride = attribute_strides(shape.attributes, shape.levels);
    std::size_t base = 0;
    for (std::size_t p = 0; p < rest.members().size(); ++p) {
        base += static_cast<std::size_t>(conditioning[p]) * stride[static_cast<std::size_t>(rest.members()[p])];
    }
    const int k = subset.order();
    const std::size_t count = ipow(shape.levels, k);
    std::vector<std::size_t> cells(count);
    std::vector<int> a(static_cast<std::size_t>(k), 0);
    for (std::size_t c = 0; c < count; ++c) {
        std::size_t r = base;
        for (int p = 0; p < k; ++p) {
            r += static_cast<std::size_t>(a[static_cast<std::size_t>(p)]) *
                 stride[static_cast<std::size_t>(subset.members()[static_cast<std::size_t>(p)])];
        }
        cells[c] = r;
        for (int p = k - 1; p >= 0; --p) {
            if (++a[static_cast<std::size_t>(p)] < shape.levels) break;
            a[static_cast<std::size_t>(p)] = 0;
        }
    }
    return cells;
}

}  // namespace

ConditionalSubtable conditional_subtable(const ContingencyTable& table, const SubsetKey& subset,
                                         std::span<const int> conditioning) {
    const TableShape shape = table.shape();
    const SubsetKey rest = complement(subset, shape.attributes);
    if (conditioning.size() != rest.members().size()) {
        fail(ErrorCode::invalid_argument, "conditioning vector needs " + std::to_string(rest.members().size()) +
                                              " values, got " + std::to_string(conditioning.size()));
    }
    for (int g : conditioning) {
        if (g < 0 || g >= shape.levels) {
            fail(ErrorCode::invalid_argument, "conditioning level " + std::to_string(g) + " out of range");
        }
    }
    ConditionalSubtable out{subset, std::vector<int>(conditioning.begin(), conditioning.end()), {}};
    for (std::size_t r : subtable_cells(subset, rest, conditioning, shape)) out.counts.push_back(table.counts()[r]);
    return out;
}

GeoMeanTable geometric_mean_subtable(const ContingencyTable& table, const SubsetKey& subset) {
    const TableShape shape = table.shape();
    subset.check_within(shape.attributes);
    const std::size_t width = ipow(shape.levels, subset.order());
    const auto repeats = static_cast<double>(ipow(shape.levels, shape.attributes - subset.order()));
    std::vector<double> log_sum(width, 0.0);
    const auto counts = table.counts();
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (!(counts[r] > 0.0)) {
            fail(ErrorCode::domain, "cell " + std::to_string(r) + " is zero; zero-adjust the table first");
        }
        log_sum[subtable_rank(r, subset, shape.levels)] += std::log(counts[r]);
    }
    GeoMeanTable out{subset, std::vector<double>(width), std::vector<double>(width)};
    for (std::size_t c = 0; c < width; ++c) {
        out.log_values[c] = log_sum[c] / repeats;
        out.counts[c] = std::exp(out.log_values[c]);
    }
    return out;
}

bool MagnitudePair::agrees(double rel, double abs) const { return approx_equal(lhs, rhs, rel, abs); }

MagnitudePair theorem1_check(const ContingencyTable& table, const SubsetKey& outer, const SubsetKey& inner) {
    const TableShape shape = table.shape();
    outer.check_within(shape.attributes);
    if (outer.empty()) fail(ErrorCode::invalid_argument, "outer subset must be non-empty");
    const SubsetKey reduced_inner = reindex_within(inner, outer);

    const LogTable logs = log_transform(table);
    const double lhs = project_subset(logs, inner).magnitude;

    const GeoMeanTable gm = geometric_mean_subtable(table, outer);
    const TableShape reduced{outer.order(), shape.levels};
    const double reduced_mag = project_subset(reduced, gm.log_values, reduced_inner).magnitude;
    const double scale = std::pow(static_cast<double>(shape.levels), 0.5 * (shape.attributes - outer.order()));
    return {lhs, scale * reduced_mag};
}

MagnitudePair theorem1_total_check(const ContingencyTable& table, const SubsetKey& outer) {
    const TableShape shape = table.shape();
    outer.check_within(shape.attributes);
    if (outer.empty()) fail(ErrorCode::invalid_argument, "outer subset must be non-empty");
    const LogTable logs = log_transform(table);
    double sum_sq = 0.0;
    for (const auto& inner : enumerate_all_subsets(shape.attributes)) {
        if (inner.empty() || !inner.is_subset_of(outer)) continue;
        const double m = project_subset(logs, inner).magnitude;
        sum_sq += m * m;
    }
    const GeoMeanTable gm = geometric_mean_subtable(table, outer);
    const double scale = std::pow(static_cast<double>(shape.levels), 0.5 * (shape.attributes - outer.order()));
    return {std::sqrt(sum_sq), scale * orthogonal_complement_magnitude(gm.log_values)};
}

}  // namespace psal
