#pragma once

#include "hmf/common.hpp"

#include <functional>
#include <vector>

namespace hmf::arith {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;
using SmallVector = std::vector<long>;

// Row-style Hermite normal form of the Z-span of `generators` (each of length
// `ncols`). Rows are returned ordered by pivot column; for a full-rank input
// the result is lower triangular with positive diagonal and entries left of
// each pivot reduced into [0, pivot). Zero rows are dropped.
IntMatrix hnf_rows(IntMatrix generators, std::size_t ncols);

// Determinant of a square lower-triangular HNF (product of the diagonal).
Integer hnf_index(const IntMatrix& hnf);

// Reduces v modulo the lattice spanned by a full-rank lower-triangular HNF,
// giving the canonical representative with 0 <= v[c] < hnf[c][c].
IntVector reduce_mod_hnf(IntVector v, const IntMatrix& hnf);

// A positive-definite integral quadratic form x^T G x on Z^r.
class GramLattice {
public:
    GramLattice() = default;
    // Certifies positive definiteness by exact LDL^T over Q.
    explicit GramLattice(IntMatrix gram);

    std::size_t rank() const noexcept { return gram_.size(); }
    const IntMatrix& gram() const noexcept { return gram_; }
    Integer evaluate(const SmallVector& v) const;

    // Calls `visit` once for each nonzero v (up to sign) with
    // v^T G v <= bound, passing the exact value. Enumeration runs in an
    // LLL-reduced basis; vectors are reported in the original coordinates
    // and in a deterministic order.
    void enumerate(long bound, const std::function<void(const SmallVector&, long)>& visit) const;

private:
    IntMatrix gram_;
    // LLL-reduced data: reduced_[k] = sum_j transform_[k][j] * e_j.
    std::vector<std::vector<long>> transform_;
    std::vector<std::vector<long>> reduced_gram_;
    std::vector<std::vector<long double>> chol_;  // q_ij of the reduced form
};

// All v with v^T G v == target, one of each +-v pair, sorted.
std::vector<SmallVector> short_vectors(const GramLattice& lattice, long target);

// Representation counts #{v : v^T G v == k} for k = 0..count-1 (both signs
// counted; the zero vector contributes to k = 0).
std::vector<long> representation_numbers(const GramLattice& lattice, long count);

}  // namespace hmf::arith
