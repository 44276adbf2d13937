#include "psal/basis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "psal/error.hpp"
#include "psal/simd.hpp"

namespace psal {

// --- SubsetKey -------------------------------------------------------------

SubsetKey::SubsetKey(std::vector<int> members) : members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] < 0) fail(ErrorCode::invalid_argument, "subset member must be non-negative");
        if (i > 0 && members_[i] >= members_[i - 1]) {
            fail(ErrorCode::invalid_argument, "subset members must be strictly decreasing: " + to_string());
        }
    }
}

SubsetKey SubsetKey::from_unordered(std::vector<int> members) {
    std::sort(members.begin(), members.end(), std::greater<>());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
        fail(ErrorCode::invalid_argument, "subset has a repeated attribute");
    }
    return SubsetKey(std::move(members));
}

bool SubsetKey::contains(int attribute) const {
    return std::find(members_.begin(), members_.end(), attribute) != members_.end();
}

bool SubsetKey::is_subset_of(const SubsetKey& other) const {
    return std::all_of(members_.begin(), members_.end(), [&](int m) { return other.contains(m); });
}

void SubsetKey::check_within(int attributes) const {
    if (!members_.empty() && members_.front() >= attributes) {
        fail(ErrorCode::invalid_argument, "subset " + to_string() + " references attribute " +
                                              std::to_string(members_.front()) + " but the table has " +
                                              std::to_string(attributes));
    }
}

std::string SubsetKey::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(members_[i]);
    }
    return s + ")";
}

bool CanonicalOrder::operator()(const SubsetKey& a, const SubsetKey& b) const {
    if (a.order() != b.order()) return a.order() < b.order();
    return std::lexicographical_compare(a.members().begin(), a.members().end(), b.members().begin(),
                                        b.members().end(), std::greater<>());
}

std::vector<SubsetKey> enumerate_subsets(int attributes, int k) {
    if (attributes < 0 || k < 0 || k > attributes) {
        fail(ErrorCode::invalid_argument, "subset size " + std::to_string(k) + " outside [0, " +
                                              std::to_string(attributes) + "]");
    }
    std::vector<SubsetKey> out;
    // Positions into the descending list (N-1, ..., 0), advanced lexicographically.
    std::vector<int> pos(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::vector<int> members(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) members[static_cast<std::size_t>(i)] = attributes - 1 - pos[static_cast<std::size_t>(i)];
        out.emplace_back(std::move(members));
        int i = k - 1;
        while (i >= 0 && pos[static_cast<std::size_t>(i)] == attributes - k + i) --i;
        if (i < 0) break;
        ++pos[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::vector<SubsetKey> enumerate_all_subsets(int attributes) {
    std::vector<SubsetKey> out;
    for (int k = 0; k <= attributes; ++k) {
        auto group = enumerate_subsets(attributes, k);
        out.insert(out.end(), std::make_move_iterator(group.begin()), std::make_move_iterator(group.end()));
    }
    return out;
}

std::size_t subspace_dimension(int k, int levels) { return ipow(levels - 1, k); }

// --- column generation -----------------------------------------------------

std::vector<double> contrast_vector(int code, int levels) {
    if (code < 0 || code > levels - 2) {
        fail(ErrorCode::invalid_argument, "contrast code " + std::to_string(code) + " outside [0, " +
                                              std::to_string(levels - 2) + "]");
    }
    const double tail = static_cast<double>(levels - code);
    std::vector<double> g(static_cast<std::size_t>(levels), 0.0);
    g[static_cast<std::size_t>(code)] = static_cast<double>(levels - 1 - code) / tail;
    for (int d = code + 1; d < levels; ++d) g[static_cast<std::size_t>(d)] = -1.0 / tail;
    return g;
}

double contrast_norm_sq(int code, int levels) {
    return static_cast<double>(levels - 1 - code) / static_cast<double>(levels - code);
}

namespace {

void check_shape(TableShape shape) {
    if (shape.attributes < 0 || shape.levels < 2) {
        fail(ErrorCode::invalid_argument, "table shape needs N >= 0 and M >= 2");
    }
}

void check_levels(const SubsetKey& subset, std::span<const int> levels, TableShape shape, int max_level) {
    subset.check_within(shape.attributes);
    if (levels.size() != subset.members().size()) {
        fail(ErrorCode::invalid_argument, "level vector has " + std::to_string(levels.size()) +
                                              " entries for subset " + subset.to_string());
    }
    for (int a : levels) {
        if (a < 0 || a > max_level) {
            fail(ErrorCode::invalid_argument,
                 "level " + std::to_string(a) + " outside [0, " + std::to_string(max_level) + "]");
        }
    }
}

// out <- factor_{N-1} (x) ... (x) factor_0, where factor_j is the per-digit
// vector for attribute C_j (nullptr meaning all ones).
void tensor_fill(std::span<const std::vector<double>* const> factors, int levels, std::span<double> out) {
    std::size_t len = 1;
    out[0] = 1.0;
    for (const auto* factor : factors) {
        const std::span<const double> block(out.data(), len);
        for (int d = levels - 1; d >= 0; --d) {
            const double w = factor ? (*factor)[static_cast<std::size_t>(d)] : 1.0;
            simd::scale_copy(w, block, out.subspan(static_cast<std::size_t>(d) * len, len));
        }
        len *= static_cast<std::size_t>(levels);
    }
}

// Builds per-attribute factor pointers from one vector per subset member.
double fill_from_member_factors(const SubsetKey& subset, const std::vector<std::vector<double>>& member_factors,
                                TableShape shape, std::span<double> out) {
    std::vector<const std::vector<double>*> factors(static_cast<std::size_t>(shape.attributes), nullptr);
    double norm_sq = static_cast<double>(ipow(shape.levels, shape.attributes - subset.order()));
    for (std::size_t p = 0; p < subset.members().size(); ++p) {
        const auto& f = member_factors[p];
        factors[static_cast<std::size_t>(subset.members()[p])] = &f;
        double fn = 0.0;
        for (double v : f) fn += v * v;
        norm_sq *= fn;
    }
    tensor_fill(factors, shape.levels, out);
    return norm_sq;
}

}  // namespace

std::vector<double> raw_column(const SubsetKey& subset, std::span<const int> levels, TableShape shape) {
    check_shape(shape);
    check_levels(subset, levels, shape, shape.levels - 1);
    std::vector<std::vector<double>> member_factors;
    for (int a : levels) {
        std::vector<double> e(static_cast<std::size_t>(shape.levels), 0.0);
        e[static_cast<std::size_t>(a)] = 1.0;
        member_factors.push_back(std::move(e));
    }
    std::vector<double> out(shape.cells());
    fill_from_member_factors(subset, member_factors, shape, out);
    return out;
}

BasisColumn ortho_column(const SubsetKey& subset, std::span<const int> levels, TableShape shape) {
    check_shape(shape);
    if (subset.empty()) fail(ErrorCode::invalid_argument, "ortho_column needs a non-empty subset");
    check_levels(subset, levels, shape, shape.levels - 1);
    const double inv_m = 1.0 / static_cast<double>(shape.levels);
    std::vector<std::vector<double>> member_factors;
    for (int a : levels) {
        std::vector<double> c(static_cast<std::size_t>(shape.levels), -inv_m);
        c[static_cast<std::size_t>(a)] += 1.0;
        member_factors.push_back(std::move(c));
    }
    BasisColumn col{subset, std::vector<int>(levels.begin(), levels.end()), std::vector<double>(shape.cells()), 0.0};
    col.norm_sq = fill_from_member_factors(subset, member_factors, shape, col.entries);
    return col;
}

double fill_basis_column(const SubsetKey& subset, std::span<const int> code, TableShape shape,
                         std::span<double> out) {
    check_shape(shape);
    check_levels(subset, code, shape, shape.levels - 2);
    if (out.size() != shape.cells()) fail(ErrorCode::shape, "output buffer has the wrong length");
    if (subset.empty()) {
        const double v = 1.0 / std::sqrt(static_cast<double>(out.size()));
        std::fill(out.begin(), out.end(), v);
        return 1.0;
    }
    std::vector<std::vector<double>> member_factors;
    member_factors.reserve(code.size());
    for (int a : code) member_factors.push_back(contrast_vector(a, shape.levels));
    std::vector<const std::vector<double>*> factors(static_cast<std::size_t>(shape.attributes), nullptr);
    double norm_sq = static_cast<double>(ipow(shape.levels, shape.attributes - subset.order()));
    for (std::size_t p = 0; p < code.size(); ++p) {
        factors[static_cast<std::size_t>(subset.members()[p])] = &member_factors[p];
        norm_sq *= contrast_norm_sq(code[p], shape.levels);
    }
    tensor_fill(factors, shape.levels, out);
    return norm_sq;
}

void for_each_basis_column(
    const SubsetKey& subset, TableShape shape,
    const std::function<void(std::span<const int>, std::span<const double>, double)>& visit) {
    check_shape(shape);
    subset.check_within(shape.attributes);
    const int k = subset.order();
    std::vector<int> code(static_cast<std::size_t>(k), 0);
    std::vector<double> buffer(shape.cells());
    const std::size_t count = subspace_dimension(k, shape.levels);
    for (std::size_t c = 0; c < count; ++c) {
        const double norm_sq = fill_basis_column(subset, code, shape, buffer);
        visit(code, buffer, norm_sq);
        // radix (M-1) increment, last member fastest
        for (int p = k - 1; p >= 0; --p) {
            auto& digit = code[static_cast<std::size_t>(p)];
            if (++digit <= shape.levels - 2) break;
            digit = 0;
        }
    }
}

SubspaceBasis subspace_basis(const SubsetKey& subset, TableShape shape) {
    SubspaceBasis basis{subset, {}, {}};
    for_each_basis_column(subset, shape, [&](std::span<const int> code, std::span<const double> column, double norm_sq) {
        basis.columns.push_back(
            {subset, std::vector<int>(code.begin(), code.end()), std::vector<double>(column.begin(), column.end()), norm_sq});
        basis.norms_sq.push_back(norm_sq);
    });
    return basis;
}

std::vector<SubspaceBasis> reduced_basis(int k, int levels) {
    if (k < 1) fail(ErrorCode::invalid_argument, "reduced basis needs k >= 1");
    const TableShape shape{k, levels};
    check_shape(shape);
    std::vector<SubspaceBasis> out;
    for (const auto& subset : enumerate_all_subsets(k)) out.push_back(subspace_basis(subset, shape));
    return out;
}

// --- Gram-Schmidt reference ------------------------------------------------

std::vector<OracleColumn> gram_schmidt_oracle(TableShape shape) {
    check_shape(shape);
    const std::size_t cells = shape.cells();
    if (cells > kOracleCellLimit) {
        fail(ErrorCode::size_guard, "Gram-Schmidt oracle refuses " + std::to_string(cells) + " cells (limit " +
                                        std::to_string(kOracleCellLimit) + ")");
    }
    // Plain loops throughout: this is the reference the kernels are checked against.
    auto dot = [cells](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < cells; ++i) s += a[i] * b[i];
        return s;
    };
    std::vector<OracleColumn> accepted;
    std::vector<double> accepted_norm_sq;
    for (const auto& subset : enumerate_all_subsets(shape.attributes)) {
        const int k = subset.order();
        std::vector<int> levels(static_cast<std::size_t>(k), 0);
        const std::size_t count = ipow(shape.levels, k);
        for (std::size_t c = 0; c < count; ++c) {
            std::vector<double> v = raw_column(subset, levels, shape);
            const double raw_norm_sq = dot(v, v);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t q = 0; q < accepted.size(); ++q) {
                    const double coef = dot(accepted[q].entries, v) / accepted_norm_sq[q];
                    for (std::size_t i = 0; i < cells; ++i) v[i] -= coef * accepted[q].entries[i];
                }
            }
            const double residual = dot(v, v);
            if (residual > 1e-16 * raw_norm_sq) {
                accepted.push_back({subset, levels, std::move(v)});
                accepted_norm_sq.push_back(residual);
            }
            for (int p = k - 1; p >= 0; --p) {
                auto& digit = levels[static_cast<std::size_t>(p)];
                if (++digit < shape.levels) break;
                digit = 0;
            }
        }
    }
    return accepted;
}

}  // namespace psal
