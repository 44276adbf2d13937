#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "psal/error.hpp"
#include "psal/fit.hpp"
#include "support.hpp"

using namespace psal;

TEST_CASE("uniform log table has only a constant term") {
    const TableShape shape{3, 3};
    const std::vector<double> t(shape.cells(), 2.5);
    const auto beta = fit_beta(shape, t);
    CHECK(beta.beta0 == doctest::Approx(2.5 * std::sqrt(27.0)));
    for (const auto& [s, block] : beta.blocks) {
        for (double b : block) CHECK(std::abs(b) < 1e-12);
    }
    CHECK(beta.coefficient_count() == 27);
    CHECK(orthogonal_complement_magnitude(t) < 1e-12);
    for (const auto& s : enumerate_all_subsets(3)) {
        if (!s.empty()) CHECK(project_subset(shape, t, s).magnitude < 1e-12);
    }
}

TEST_CASE("a single basis column is recovered in its own block") {
    const TableShape shape{2, 2};
    const std::vector<double> t{0.25, -0.25, -0.25, 0.25};
    const auto beta = fit_beta(shape, t);
    CHECK(std::abs(beta.beta0) < 1e-15);
    CHECK(std::abs(beta.block(SubsetKey({1}))[0]) < 1e-15);
    CHECK(std::abs(beta.block(SubsetKey({0}))[0]) < 1e-15);
    CHECK(beta.block(SubsetKey({1, 0}))[0] == doctest::Approx(1.0));

    const auto p = project_subset(shape, t, SubsetKey({1, 0}));
    CHECK(testing::max_abs_diff(p.chi, t) < 1e-15);
    CHECK(p.magnitude == doctest::Approx(0.5));
}

TEST_CASE("reconstruct is linear in the coefficients") {
    const TableShape shape{3, 3};
    BetaVector zero = fit_beta(shape, std::vector<double>(shape.cells(), 0.0));
    for (double v : reconstruct_values(zero)) CHECK(v == 0.0);

    const SubsetKey s({2, 0});
    BetaVector unit = zero;
    unit.blocks.at(s)[3] = 1.0;
    std::vector<double> col(shape.cells());
    fill_basis_column(s, std::vector<int>{1, 1}, shape, col);
    CHECK(testing::max_abs_diff(reconstruct_values(unit), col) < 1e-15);
}

TEST_CASE("complement magnitude of a single spike") {
    const std::vector<double> t{std::log(2.0), 0, 0, 0};
    CHECK(orthogonal_complement_magnitude(t) == doctest::Approx(std::log(2.0) * std::sqrt(3.0) / 2).epsilon(1e-14));
}

TEST_CASE("expansion identities on random tables") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 5;
        const int m = 2 + trial % 2;
        const TableShape shape{n, m};
        const auto t = testing::random_vector(shape.cells(), rng);
        const auto beta = fit_beta(shape, t, 1 + trial % 3);
        CHECK(testing::max_abs_diff(reconstruct_values(beta), t) < 1e-9);

        double total = beta.beta0 * beta.beta0;
        double interaction = 0;
        for (const auto& s : enumerate_all_subsets(n)) {
            if (s.empty()) continue;
            const auto p = project_subset(shape, t, s);
            // projector agrees with the conditional-mean construction
            const auto want = oracle::anova_component(t, n, m, s.members());
            CHECK(testing::max_abs_diff(p.chi, want) < 1e-9);
            // idempotent
            const auto twice = project_subset(shape, p.chi, s);
            CHECK(testing::max_abs_diff(twice.chi, p.chi) < 1e-9);
            total += p.magnitude * p.magnitude;
            interaction += p.magnitude * p.magnitude;
        }
        const double norm_sq = oracle::norm(t) * oracle::norm(t);
        CHECK(total == doctest::Approx(norm_sq).epsilon(1e-9));
        CHECK(orthogonal_complement_magnitude(t) == doctest::Approx(std::sqrt(interaction)).epsilon(1e-9));
    }
}

TEST_CASE("projections are self-adjoint") {
    std::mt19937_64 rng(5);
    const TableShape shape{3, 3};
    for (const auto& s : enumerate_all_subsets(3)) {
        if (s.empty()) continue;
        const auto x = testing::random_vector(shape.cells(), rng);
        const auto y = testing::random_vector(shape.cells(), rng);
        const auto px = project_subset(shape, x, s).chi;
        const auto py = project_subset(shape, y, s).chi;
        double a = 0, b = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            a += px[i] * y[i];
            b += x[i] * py[i];
        }
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("scaling counts leaves interaction magnitudes alone") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto table = testing::random_table(3, 3, rng);
        const auto logs = log_transform(table);
        auto scaled = testing::counts_of(table);
        const double c = 0.5 + trial;
        for (double& v : scaled) v *= c;
        const auto scaled_logs = log_transform(ContingencyTable::from_counts(table.schema(), scaled));
        for (const auto& s : enumerate_all_subsets(3)) {
            if (s.empty()) continue;
            CHECK(project_subset(scaled_logs, s).magnitude ==
                  doctest::Approx(project_subset(logs, s).magnitude).epsilon(1e-9));
        }
        const auto b1 = fit_beta(logs);
        const auto b2 = fit_beta(scaled_logs);
        CHECK(b2.beta0 - b1.beta0 == doctest::Approx(std::log(c) * std::sqrt(27.0)).epsilon(1e-9));
    }
}

TEST_CASE("worker count does not change coefficients") {
    std::mt19937_64 rng(3);
    const TableShape shape{5, 3};
    const auto t = testing::random_vector(shape.cells(), rng);
    const auto one = fit_beta(shape, t, 1);
    const auto four = fit_beta(shape, t, 4);
    CHECK(one.beta0 == four.beta0);
    CHECK(one.blocks == four.blocks);
}

TEST_CASE("fit shape errors") {
    const std::vector<double> t(7, 0.0);
    CHECK_THROWS_AS(fit_beta({3, 2}, t), Error);
    CHECK_THROWS_AS(project_subset({3, 2}, t, SubsetKey({0})), Error);
    const std::vector<double> ok(8, 0.0);
    CHECK_THROWS_AS(project_subset({3, 2}, ok, SubsetKey({3})), Error);
}
