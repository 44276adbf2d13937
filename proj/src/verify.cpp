#include "psal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "psal/basis.hpp"
#include "psal/error.hpp"
#include "psal/fit.hpp"
#include "psal/marginal.hpp"
#include "psal/salience.hpp"
#include "psal/simd.hpp"
#include "psal/tolerance.hpp"

namespace psal {

ContingencyTable random_adjusted_table(TableShape shape, std::mt19937_64& rng) {
    const AttributeSchema schema = AttributeSchema::synthetic(shape.attributes, shape.levels);
    std::uniform_int_distribution<int> count(1, 40);
    std::bernoulli_distribution empty(0.3);
    std::vector<double> counts(shape.cells());
    for (double& c : counts) c = empty(rng) ? 0.0 : static_cast<double>(count(rng));
    double total = 0.0;
    for (double c : counts) total += c;
    // zero_adjust needs N_T > M_T
    if (total <= static_cast<double>(counts.size())) counts[0] += static_cast<double>(counts.size()) + 1.0 - total;
    return zero_adjust(ContingencyTable::from_counts(schema, std::move(counts)));
}

bool VerifyResult::passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

namespace {

constexpr std::size_t kFullOrthogonalityCells = 1024;
constexpr std::size_t kGramSchmidtCells = 256;

struct ColumnId {
    SubsetKey subset;
    std::vector<int> code;
};

std::vector<ColumnId> all_column_ids(TableShape shape) {
    std::vector<ColumnId> ids;
    for (const auto& subset : enumerate_all_subsets(shape.attributes)) {
        for_each_basis_column(subset, shape, [&](std::span<const int> code, std::span<const double>, double) {
            ids.push_back({subset, std::vector<int>(code.begin(), code.end())});
        });
    }
    return ids;
}

void note(SuiteResult& suite, double error, bool ok, const std::string& what) {
    ++suite.checks;
    suite.max_error = std::max(suite.max_error, error);
    if (!ok) {
        if (suite.failures == 0) suite.detail = what;
        ++suite.failures;
    }
}

SuiteResult orthogonality_suite(TableShape shape, std::mt19937_64& rng, int trials) {
    SuiteResult suite{"orthogonality", 0, 0, 0.0, {}};
    const auto ids = all_column_ids(shape);
    const std::size_t cells = shape.cells();
    auto column = [&](const ColumnId& id) {
        std::vector<double> v(cells);
        const double norm_sq = fill_basis_column(id.subset, id.code, shape, v);
        return std::pair{std::move(v), norm_sq};
    };
    auto check_pair = [&](const std::vector<double>& a, const std::vector<double>& b, const ColumnId& ia,
                          const ColumnId& ib) {
        const double cos = std::abs(simd::dot(a, b)) / std::sqrt(simd::sum_sq(a) * simd::sum_sq(b));
        note(suite, cos, cos < 1e-9, "columns of " + ia.subset.to_string() + " and " + ib.subset.to_string() +
                                         " not orthogonal");
    };
    if (cells <= kFullOrthogonalityCells) {
        std::vector<std::vector<double>> cols;
        for (const auto& id : ids) {
            auto [v, norm_sq] = column(id);
            const double actual = simd::sum_sq(v);
            note(suite, std::abs(actual - norm_sq) / norm_sq, approx_equal(actual, norm_sq),
                 "recorded norm of " + id.subset.to_string() + " is wrong");
            if (!id.subset.empty()) {
                const double s = std::abs(simd::sum(v)) / std::sqrt(actual);
                note(suite, s, s < 1e-9, "column of " + id.subset.to_string() + " does not sum to zero");
            }
            cols.push_back(std::move(v));
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
            for (std::size_t j = i + 1; j < cols.size(); ++j) check_pair(cols[i], cols[j], ids[i], ids[j]);
        }
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
        const std::size_t samples = static_cast<std::size_t>(std::max(trials, 1)) * 200;
        for (std::size_t s = 0; s < samples; ++s) {
            const std::size_t i = pick(rng);
            std::size_t j = pick(rng);
            if (i == j) j = (j + 1) % ids.size();
            check_pair(column(ids[i]).first, column(ids[j]).first, ids[i], ids[j]);
        }
        suite.detail = suite.failures ? suite.detail : "sampled pairs";
    }
    return suite;
}

SuiteResult dimension_suite(TableShape shape, std::size_t& total_out) {
    SuiteResult suite{"dimension-count", 0, 0, 0.0, {}};
    std::size_t total = 0;
    for (const auto& subset : enumerate_all_subsets(shape.attributes)) {
        std::size_t count = 0;
        for_each_basis_column(subset, shape, [&](std::span<const int>, std::span<const double>, double) { ++count; });
        const std::size_t expected = subspace_dimension(subset.order(), shape.levels);
        note(suite, count == expected ? 0.0 : 1.0, count == expected,
             "subset " + subset.to_string() + " has " + std::to_string(count) + " columns");
        total += count;
    }
    note(suite, total == shape.cells() ? 0.0 : 1.0, total == shape.cells(),
         "total column count " + std::to_string(total) + " != " + std::to_string(shape.cells()));
    total_out = total;
    suite.detail = suite.failures ? suite.detail : std::to_string(total) + " basis columns";
    return suite;
}

SuiteResult gram_schmidt_suite(TableShape shape, std::mt19937_64& rng, int trials) {
    SuiteResult suite{"gram-schmidt-oracle", 0, 0, 0.0, {}};
    if (shape.cells() > kGramSchmidtCells) {
        suite.detail = "skipped: more than " + std::to_string(kGramSchmidtCells) + " cells";
        return suite;
    }
    const auto oracle = gram_schmidt_oracle(shape);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(shape.cells());
        for (double& v : x) v = normal(rng);
        for (const auto& subset : enumerate_all_subsets(shape.attributes)) {
            std::vector<double> expected(shape.cells(), 0.0);
            for (const auto& col : oracle) {
                if (!(col.subset == subset)) continue;
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    num += col.entries[i] * x[i];
                    den += col.entries[i] * col.entries[i];
                }
                for (std::size_t i = 0; i < x.size(); ++i) expected[i] += num / den * col.entries[i];
            }
            const auto got = project_subset(shape, x, subset);
            double err = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(got.chi[i] - expected[i]));
            note(suite, err, err < 1e-9, "projector mismatch for subset " + subset.to_string());
        }
    }
    return suite;
}

}  // namespace

VerifyResult run_verification(const VerifyOptions& options) {
    const TableShape shape{options.attributes, options.levels};
    if (shape.attributes < 2 || shape.levels < 2) {
        fail(ErrorCode::invalid_argument, "verify needs n >= 2 and m >= 2");
    }
    if (shape.cells() > kOracleCellLimit) {
        fail(ErrorCode::size_guard, "verify needs m^n <= " + std::to_string(kOracleCellLimit));
    }
    if (options.trials < 1) fail(ErrorCode::invalid_argument, "trials must be positive");
    std::mt19937_64 rng(options.seed);
    VerifyResult result;

    result.suites.push_back(orthogonality_suite(shape, rng, options.trials));
    result.suites.push_back(dimension_suite(shape, result.basis_columns));
    result.suites.push_back(gram_schmidt_suite(shape, rng, std::min(options.trials, 5)));

    SuiteResult parseval{"parseval", 0, 0, 0.0, {}};
    SuiteResult round_trip{"round-trip", 0, 0, 0.0, {}};
    SuiteResult identity{"geo-mean-projection", 0, 0, 0.0, {}};
    const auto subsets = enumerate_all_subsets(shape.attributes);
    for (int t = 0; t < options.trials; ++t) {
        const ContingencyTable table = random_adjusted_table(shape, rng);
        const LogTable logs = log_transform(table);

        double total = 0.0;
        for (const auto& s : subsets) {
            const double m = project_subset(logs, s).magnitude;
            total += m * m;
        }
        const double norm_sq = simd::sum_sq(logs.values());
        note(parseval, std::abs(total - norm_sq) / norm_sq, approx_equal(total, norm_sq),
             "trial " + std::to_string(t) + ": sum of squared projections differs from |T|^2");

        const auto rebuilt = reconstruct_values(fit_beta(logs, options.workers));
        double err = 0.0;
        for (std::size_t i = 0; i < rebuilt.size(); ++i) err = std::max(err, std::abs(rebuilt[i] - logs.values()[i]));
        note(round_trip, err, err < 1e-9, "trial " + std::to_string(t) + ": reconstruction error " + std::to_string(err));

        const double perturbation = options.perturb ? 1.0 + 1e-6 : 1.0;
        for (const auto& outer : subsets) {
            if (outer.empty() || outer.order() == shape.attributes) continue;
            for (const auto& inner : subsets) {
                if (inner.empty() || !inner.is_subset_of(outer)) continue;
                auto pair = theorem1_check(table, outer, inner);
                pair.rhs *= perturbation;
                const double rel = std::abs(pair.lhs - pair.rhs) / std::max({pair.lhs, pair.rhs, 1e-300});
                note(identity, rel, pair.agrees(),
                     "trial " + std::to_string(t) + ": outer " + outer.to_string() + ", inner " + inner.to_string() +
                         " lhs=" + std::to_string(pair.lhs) + " rhs=" + std::to_string(pair.rhs));
            }
            auto total_pair = theorem1_total_check(table, outer);
            total_pair.rhs *= perturbation;
            const double total_rel = std::abs(total_pair.lhs - total_pair.rhs) /
                                     std::max({total_pair.lhs, total_pair.rhs, 1e-300});
            note(identity, total_rel, total_pair.agrees(),
                 "trial " + std::to_string(t) + ": total check for outer " + outer.to_string());
        }
    }
    result.suites.push_back(std::move(parseval));
    result.suites.push_back(std::move(round_trip));
    result.suites.push_back(std::move(identity));

    SuiteResult vertex{"hypercube-salience", 0, 0, 0.0, {}};
    const auto m_t = static_cast<long long>(shape.cells());
    std::vector<std::size_t> order(shape.cells());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const double height = std::log(40.0);
    for (long long r = 1; r <= m_t; ++r) {
        std::vector<double> logs(shape.cells(), 0.0);
        for (long long i = 0; i < r; ++i) logs[order[static_cast<std::size_t>(i)]] = height;
        const double got = salience_of_logs(logs).psi;
        const double want = hypercube_salience(r, m_t);
        const double err = std::abs(got - want);
        note(vertex, err, err <= 1e-12, "r=" + std::to_string(r) + ": salience " + std::to_string(got));
    }
    result.suites.push_back(std::move(vertex));
    return result;
}

}  // namespace psal
