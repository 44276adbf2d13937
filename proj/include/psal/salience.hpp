#pragma once

// Probabilistic Salience.
//
// For a positive vector v with T = ln v, the salience is
//
//     psi(v) = |T - mean(T) 1| / |T|,
//
// the share of the log vector's length lying outside the uniform direction.
// It lies in [0,1], is 0 exactly for constant vectors (0/0 for an all-ones
// vector is defined as 0) and grows as mass concentrates on fewer cells. The
// salience function of an attribute subset is psi of the subset's
// geometric-mean table.

#include <map>
#include <span>
#include <vector>

#include "psal/basis.hpp"
#include "psal/table.hpp"

namespace psal {

struct SalienceValue {
    double psi = 0.0;
    double chi_magnitude = 0.0;  // |T - mean(T) 1|
    double log_norm = 0.0;       // |T|
};

/// Salience of a subtable on the adjusted scale: every entry must be >= 1.
SalienceValue salience(std::span<const double> values);

/// Salience from an already log-transformed vector (any finite entries).
SalienceValue salience_of_logs(std::span<const double> log_values);

/// Salience function of an attribute subset (1 <= k <= N): salience of the
/// geometric-mean subtable. Needs strictly positive counts.
SalienceValue salience_function(const ContingencyTable& table, const SubsetKey& subset);

/// sqrt(1 - r/m_t): salience of a hypercube vertex with r unit components.
double hypercube_salience(long long r, long long m_t);

struct HistogramEntry {
    std::vector<int> conditioning;  // aligned with complement(subset)
    double psi = 0.0;
};

/// Salience of every conditional subtable of `subset`, M^{N-k} entries in
/// conditioning order.
std::vector<HistogramEntry> salience_histogram(const ContingencyTable& table, const SubsetKey& subset);

struct ScanEntry {
    SubsetKey subset;
    SalienceValue value;
    int rank = 0;  // 1 = most salient
};

struct SalienceReport {
    int k = 0;
    std::vector<ScanEntry> entries;  // enumeration order
    std::map<SubsetKey, std::vector<HistogramEntry>, CanonicalOrder> histograms;

    /// Entries sorted by rank.
    std::vector<ScanEntry> ranked() const;
};

/// Salience function of every size-k subset (1 <= k < N), ranked by
/// descending value with ties kept in enumeration order. Output does not
/// depend on `workers`.
SalienceReport scan(const ContingencyTable& table, int k, int workers = 1, bool with_histograms = false);

}  // namespace psal
