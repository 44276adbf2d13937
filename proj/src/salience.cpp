#include "psal/salience.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psal/error.hpp"
#include "psal/marginal.hpp"
#include "psal/parallel.hpp"
#include "psal/simd.hpp"

namespace psal {

SalienceValue salience_of_logs(std::span<const double> log_values) {
    if (log_values.empty()) fail(ErrorCode::shape, "salience of an empty vector");
    SalienceValue out;
    out.log_norm = std::sqrt(simd::sum_sq(log_values));
    const bool constant = std::all_of(log_values.begin(), log_values.end(),
                                      [&](double t) { return t == log_values.front(); });
    if (constant || out.log_norm == 0.0) return out;
    const double mean = simd::sum(log_values) / static_cast<double>(log_values.size());
    double acc = 0.0;
    for (double t : log_values) acc += (t - mean) * (t - mean);
    out.chi_magnitude = std::sqrt(acc);
    out.psi = std::min(1.0, out.chi_magnitude / out.log_norm);
    return out;
}

SalienceValue salience(std::span<const double> values) {
    std::vector<double> logs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 1.0) || !std::isfinite(values[i])) {
            fail(ErrorCode::domain, "salience needs entries >= 1 (adjusted scale); entry " + std::to_string(i) +
                                        " is " + std::to_string(values[i]));
        }
        logs[i] = std::log(values[i]);
    }
    return salience_of_logs(logs);
}

SalienceValue salience_function(const ContingencyTable& table, const SubsetKey& subset) {
    if (subset.empty()) fail(ErrorCode::invalid_argument, "salience function needs a non-empty subset");
    return salience_of_logs(geometric_mean_subtable(table, subset).log_values);
}

double hypercube_salience(long long r, long long m_t) {
    if (m_t < 1 || r < 1 || r > m_t) {
        fail(ErrorCode::invalid_argument, "hypercube salience needs 1 <= r <= m_t");
    }
    return std::sqrt(1.0 - static_cast<double>(r) / static_cast<double>(m_t));
}

std::vector<HistogramEntry> salience_histogram(const ContingencyTable& table, const SubsetKey& subset) {
    const TableShape shape = table.shape();
    subset.check_within(shape.attributes);
    const SubsetKey rest = complement(subset, shape.attributes);
    const int width = rest.order();
    const std::size_t combos = ipow(shape.levels, width);
    std::vector<int> g(static_cast<std::size_t>(width), 0);
    std::vector<HistogramEntry> out;
    out.reserve(combos);
    std::vector<double> logs;
    for (std::size_t c = 0; c < combos; ++c) {
        const auto sub = conditional_subtable(table, subset, g);
        logs.resize(sub.counts.size());
        for (std::size_t i = 0; i < logs.size(); ++i) {
            if (!(sub.counts[i] > 0.0)) fail(ErrorCode::domain, "conditional subtable has a zero entry");
            logs[i] = std::log(sub.counts[i]);
        }
        out.push_back({g, salience_of_logs(logs).psi});
        for (int p = width - 1; p >= 0; --p) {
            if (++g[static_cast<std::size_t>(p)] < shape.levels) break;
            g[static_cast<std::size_t>(p)] = 0;
        }
    }
    return out;
}

std::vector<ScanEntry> SalienceReport::ranked() const {
    std::vector<ScanEntry> out = entries;
    std::sort(out.begin(), out.end(), [](const ScanEntry& a, const ScanEntry& b) { return a.rank < b.rank; });
    return out;
}

SalienceReport scan(const ContingencyTable& table, int k, int workers, bool with_histograms) {
    const int n = table.shape().attributes;
    if (k < 1 || k >= n) {
        fail(ErrorCode::invalid_argument, "scan needs 1 <= k < N (k=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
    }
    const auto subsets = enumerate_subsets(n, k);
    SalienceReport report;
    report.k = k;
    report.entries.resize(subsets.size());
    std::vector<std::vector<HistogramEntry>> hist(with_histograms ? subsets.size() : 0);
    parallel_for(subsets.size(), workers, [&](std::size_t i) {
        report.entries[i] = {subsets[i], salience_function(table, subsets[i]), 0};
        if (with_histograms) hist[i] = salience_histogram(table, subsets[i]);
    });

    std::vector<std::size_t> order(subsets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return report.entries[a].value.psi > report.entries[b].value.psi;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos) report.entries[order[pos]].rank = static_cast<int>(pos + 1);
    for (std::size_t i = 0; i < hist.size(); ++i) report.histograms.emplace(subsets[i], std::move(hist[i]));
    return report;
}

}  // namespace psal
