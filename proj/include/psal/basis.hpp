#pragma once

// Orthogonal log-linear basis, generated one column at a time.
//
// The space R^{M^N} splits into one subspace per attribute subset S: the part
// of span{indicator columns of S} orthogonal to every proper subset's span.
// Its dimension is (M-1)^|S|. Each subspace is realised as tensor products of
// per-attribute contrasts g_0 .. g_{M-2}, where g_a is what Gram-Schmidt makes
// of the centred indicator e_a - 1/M after g_0 .. g_{a-1}:
//
//     g_a(d) = 0                  d < a
//              (M-1-a)/(M-a)      d = a
//              -1/(M-a)           d > a
//
// Because the Gram matrix of tensor products is the Kronecker product of the
// factor Gram matrices, these columns coincide with what sequential
// Gram-Schmidt over the indicator columns (constant first, then subsets by
// order, levels counted in radix M) produces. No M^N x M^N matrix is ever
// built outside gram_schmidt_oracle.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "psal/table.hpp"

namespace psal {

/// Attribute subset, members strictly decreasing (i_k > ... > i_1).
class SubsetKey {
public:
    SubsetKey() = default;
    explicit SubsetKey(std::vector<int> members);

    /// Sorts descending; rejects duplicates and negatives.
    static SubsetKey from_unordered(std::vector<int> members);

    const std::vector<int>& members() const { return members_; }
    int order() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }

    bool contains(int attribute) const;
    bool is_subset_of(const SubsetKey& other) const;

    /// Throws unless every member is below `attributes`.
    void check_within(int attributes) const;

    /// e.g. "(2,0)"
    std::string to_string() const;

    bool operator==(const SubsetKey&) const = default;

private:
    std::vector<int> members_;
};

/// Enumeration order: by size, then lexicographically on the descending
/// member lists with larger indices first, e.g. (2,1) < (2,0) < (1,0).
struct CanonicalOrder {
    bool operator()(const SubsetKey& a, const SubsetKey& b) const;
};

/// All C(n,k) subsets of size k in enumeration order.
std::vector<SubsetKey> enumerate_subsets(int attributes, int k);

/// Every subset, empty set first, in enumeration order.
std::vector<SubsetKey> enumerate_all_subsets(int attributes);

/// (M-1)^k
std::size_t subspace_dimension(int k, int levels);

/// Contrast g_code in R^M (see header comment); code in [0, M-2].
std::vector<double> contrast_vector(int code, int levels);
double contrast_norm_sq(int code, int levels);

/// Indicator of the cells whose subset digits equal `levels` (aligned with
/// subset.members()). Exactly M^{N-k} ones; empty subset gives all ones.
std::vector<double> raw_column(const SubsetKey& subset, std::span<const int> levels, TableShape shape);

struct BasisColumn {
    SubsetKey subset;
    std::vector<int> level_code;
    std::vector<double> entries;
    double norm_sq = 0.0;
};

/// Projection of raw_column(subset, levels) onto the subset's orthogonal
/// subspace: the tensor product of centred indicators e_{a_j} - 1/M. Accepts
/// any level code in [0, M-1]^k; requires k >= 1.
BasisColumn ortho_column(const SubsetKey& subset, std::span<const int> levels, TableShape shape);

struct SubspaceBasis {
    SubsetKey subset;
    std::vector<BasisColumn> columns;
    std::vector<double> norms_sq;  // diagonal of D for this block
};

/// (M-1)^k mutually orthogonal, unnormalised columns spanning the subset's
/// subspace; level codes run over [0, M-2]^k with the last member fastest.
/// For the empty subset: the single normalised constant direction.
SubspaceBasis subspace_basis(const SubsetKey& subset, TableShape shape);

/// Writes the basis column for `code` (contrast indices aligned with
/// subset.members()) into `out` (size M^N) and returns its squared norm.
double fill_basis_column(const SubsetKey& subset, std::span<const int> code, TableShape shape,
                         std::span<double> out);

/// Streams the subset's basis columns through `visit` without materialising
/// the block; the span is only valid during the call.
void for_each_basis_column(
    const SubsetKey& subset, TableShape shape,
    const std::function<void(std::span<const int> code, std::span<const double> column, double norm_sq)>& visit);

/// Full basis of a k-attribute, M-level table, one block per subset of
/// {k-1, ..., 0}, in enumeration order.
std::vector<SubspaceBasis> reduced_basis(int k, int levels);

struct OracleColumn {
    SubsetKey subset;
    std::vector<int> level_code;
    std::vector<double> entries;
};

inline constexpr std::size_t kOracleCellLimit = 4096;

/// Literal sequential Gram-Schmidt over every indicator column in subset and
/// radix order, keeping the non-vanishing residuals. Reference construction
/// for tests and `verify`; refuses tables with more than kOracleCellLimit
/// cells.
std::vector<OracleColumn> gram_schmidt_oracle(TableShape shape);

}  // namespace psal
