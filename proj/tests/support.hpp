#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "psal/basis.hpp"
#include "psal/table.hpp"

namespace testing {

inline psal::ContingencyTable adjusted_table(int n, int m, std::vector<double> counts) {
    return psal::ContingencyTable::from_adjusted(psal::AttributeSchema::synthetic(n, m), std::move(counts));
}

inline psal::ContingencyTable random_table(int n, int m, std::mt19937_64& rng) {
    return adjusted_table(n, m, oracle::random_adjusted_counts(n, m, rng));
}

inline std::vector<double> counts_of(const psal::ContingencyTable& t) {
    return {t.counts().begin(), t.counts().end()};
}

inline std::vector<double> random_vector(std::size_t size, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(size);
    for (double& x : v) x = normal(rng);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    return err;
}

// Ascending copy of a subset's members, the order the closed-form oracles use.
inline std::vector<int> ascending(const psal::SubsetKey& s) {
    return {s.members().rbegin(), s.members().rend()};
}

}  // namespace testing
