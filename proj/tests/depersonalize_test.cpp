#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "psal/depersonalize.hpp"
#include "psal/error.hpp"
#include "psal/fit.hpp"
#include "psal/salience.hpp"
#include "support.hpp"

using namespace psal;

namespace {

double block_norm(const BetaVector& beta, const SubsetKey& s) {
    double acc = 0;
    for (double b : beta.block(s)) acc += b * b;
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("hierarchy closure adds every superset") {
    const std::vector<SubsetKey> req{SubsetKey({1, 0})};
    CHECK(hierarchy_closure(req, 3) == std::vector<SubsetKey>{SubsetKey({1, 0}), SubsetKey({2, 1, 0})});
    const std::vector<SubsetKey> two{SubsetKey({2}), SubsetKey({1, 0})};
    const auto closed = hierarchy_closure(two, 3);
    CHECK(closed.size() == 5);
    const std::vector<SubsetKey> bad{SubsetKey({3})};
    CHECK_THROWS_AS(hierarchy_closure(bad, 3), Error);
}

TEST_CASE("limiting at full order changes nothing") {
    std::mt19937_64 rng(1);
    const auto table = testing::random_table(3, 3, rng);
    const auto r = interaction_limit(table, LimitSpec::order_limit(3));
    CHECK(testing::max_abs_diff(testing::counts_of(r.table), testing::counts_of(table)) < 1e-9);
    CHECK(r.audit.zeroed.empty());
    CHECK(r.audit.violations() == 0);

    const auto uniform = testing::adjusted_table(3, 2, std::vector<double>(8, 5.0));
    const auto u = interaction_limit(uniform, LimitSpec::order_limit(1));
    CHECK(testing::max_abs_diff(testing::counts_of(u.table), std::vector<double>(8, 5.0)) < 1e-9);
}

TEST_CASE("order-one release is a product of main effects") {
    std::mt19937_64 rng(2);
    const int n = 4, m = 2;
    const auto table = testing::random_table(n, m, rng);
    const auto r = interaction_limit(table, LimitSpec::order_limit(1));
    const auto released = testing::counts_of(r.table);
    // log of the release is additive: constant + sum of per-attribute terms from conditional means
    const auto logs = oracle::logs_of(testing::counts_of(table));
    std::vector<double> additive = oracle::conditional_mean(logs, n, m, {});
    for (int j = 0; j < n; ++j) {
        const auto main = oracle::anova_component(logs, n, m, {j});
        for (std::size_t i = 0; i < additive.size(); ++i) additive[i] += main[i];
    }
    CHECK(testing::max_abs_diff(oracle::logs_of(released), additive) < 1e-9);

    const auto refit = fit_beta(log_transform(r.table));
    for (const auto& s : enumerate_all_subsets(n)) {
        if (s.order() > 1) CHECK(block_norm(refit, s) <= 1e-9);
    }
    CHECK(r.audit.max_refit_norm <= 1e-9);
}

TEST_CASE("release contract on random tables") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 3 + trial % 3;
        const int m = 2 + trial % 2;
        const auto table = testing::random_table(n, m, rng);
        const auto c = testing::counts_of(table);
        for (int kd = 1; kd < n; ++kd) {
            const auto r = interaction_limit(table, LimitSpec::order_limit(kd));
            CHECK(r.audit.violations() == 0);
            CHECK(r.audit.max_refit_norm <= 1e-9);
            const auto after = testing::counts_of(r.table);
            for (const auto& s : enumerate_all_subsets(n)) {
                if (s.empty()) continue;
                const double before = oracle::salience_function(c, n, m, s.members());
                const double now = oracle::salience_function(after, n, m, s.members());
                if (s.order() <= kd) {
                    CHECK(now == doctest::Approx(before).epsilon(1e-9));
                } else {
                    CHECK(now <= before + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("limiting twice is the same as limiting once") {
    std::mt19937_64 rng(4);
    const auto table = testing::random_table(4, 3, rng);
    const auto once = interaction_limit(table, LimitSpec::order_limit(2));
    const auto twice = interaction_limit(once.table, LimitSpec::order_limit(2));
    CHECK(testing::max_abs_diff(testing::counts_of(once.table), testing::counts_of(twice.table)) < 1e-9);
}

TEST_CASE("selective zeroing") {
    std::mt19937_64 rng(5);
    const auto table = testing::random_table(3, 3, rng);
    const auto r = selective_zero(table, LimitSpec::selective({SubsetKey({1, 0})}));
    CHECK(r.audit.zeroed == std::vector<SubsetKey>{SubsetKey({1, 0}), SubsetKey({2, 1, 0})});
    const auto refit = fit_beta(log_transform(r.table));
    CHECK(block_norm(refit, SubsetKey({1, 0})) <= 1e-9);
    CHECK(block_norm(refit, SubsetKey({2, 1, 0})) <= 1e-9);
    CHECK(block_norm(refit, SubsetKey({2, 1})) > 1e-6);
    CHECK(r.audit.violations() == 0);
    for (const auto& e : r.audit.entries) {
        CHECK(e.contains_zeroed == SubsetKey({1, 0}).is_subset_of(e.subset));
        if (!e.contains_zeroed) {
            CHECK(e.contract == AuditContract::unchanged);
            CHECK(e.after == doctest::Approx(e.before).epsilon(1e-9));
        }
    }

    // every pair requested is the same release as keeping main effects only
    const auto all_pairs = selective_zero(table, LimitSpec::selective(enumerate_subsets(3, 2)));
    const auto limited = interaction_limit(table, LimitSpec::order_limit(1));
    CHECK(testing::max_abs_diff(testing::counts_of(all_pairs.table), testing::counts_of(limited.table)) < 1e-9);

    CHECK_THROWS_AS(selective_zero(table, LimitSpec::selective({})), Error);
    CHECK_THROWS_AS(selective_zero(table, LimitSpec::selective({SubsetKey()})), Error);
    CHECK_THROWS_AS(interaction_limit(table, LimitSpec::order_limit(0)), Error);
    CHECK_THROWS_AS(interaction_limit(table, LimitSpec::order_limit(4)), Error);
}

TEST_CASE("renormalising and rounding preserve the total") {
    std::mt19937_64 rng(6);
    const auto table = testing::random_table(4, 3, rng);
    auto spec = LimitSpec::order_limit(1);
    spec.renormalize = true;
    const auto r = interaction_limit(table, spec);
    double sum = 0;
    for (double c : r.table.counts()) sum += c;
    CHECK(sum == doctest::Approx(table.n_total()).epsilon(1e-9));
    CHECK(r.audit.renormalized);
    CHECK(r.audit.violations() == 0);

    spec.round_counts = true;
    const auto rounded = interaction_limit(table, spec);
    double isum = 0;
    for (double c : rounded.table.counts()) {
        CHECK(c == std::round(c));
        isum += c;
    }
    CHECK(isum == std::llround(table.n_total()));
    CHECK(rounded.audit.rounded);
}

TEST_CASE("rounding with a fixed total") {
    CHECK(round_preserving_total(std::vector<double>{1.5, 2.5, 3.0}, 7) == std::vector<double>{2, 2, 3});
    CHECK(round_preserving_total(std::vector<double>{0.4, 0.4, 0.2}, 1) == std::vector<double>{1, 0, 0});
    CHECK(round_preserving_total(std::vector<double>{0.6, 0.6, 0.8}, 2) == std::vector<double>{0, 1, 1});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(30);
        for (double& x : v) x = u(rng);
        const double total = std::accumulate(v.begin(), v.end(), 0.0);
        const auto target = std::llround(total);
        const auto r = round_preserving_total(v, target);
        CHECK(std::accumulate(r.begin(), r.end(), 0.0) == static_cast<double>(target));
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(r[i] - v[i]) < 1.0 + 1e-12);
    }
}

TEST_CASE("audit of an identical table") {
    std::mt19937_64 rng(8);
    const auto table = testing::random_table(4, 2, rng);
    const auto a = audit(table, table, 2);
    CHECK(a.entries.size() == 6);
    for (const auto& e : a.entries) CHECK(e.delta() == 0.0);
    CHECK(a.violations() == 0);
    CHECK_THROWS_AS(audit(table, testing::random_table(3, 2, rng), 2), Error);
}

TEST_CASE("audit flags a salience increase") {
    const auto flat = testing::adjusted_table(2, 2, {2, 2, 2, 2});
    const auto spiky = testing::adjusted_table(2, 2, {5, 1, 1, 1});
    const std::vector<SubsetKey> zeroed{SubsetKey({1, 0})};
    const auto a = audit(flat, spiky, 2, zeroed);
    CHECK(a.violations() == 1);
}
