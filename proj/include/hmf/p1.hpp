#pragma once

#include "hmf/arith/residue.hpp"

#include <array>
#include <vector>

namespace hmf::p1 {

using arith::ResidueRing;
using Elt = ResidueRing::Elt;

struct Point {
    Elt a = 0, b = 0;
};

// 2x2 matrix over Z_F/N, row-major.
using Matrix2 = std::array<Elt, 4>;

// The projective line P^1(Z_F/N) with canonical representatives and O(1)
// lookup. Each prime-power component Q = P^e carries its own table:
// [1:b] for b in Z_F/Q, then [a:1] for a in the maximal ideal P/Q. Global
// points are glued by CRT and listed in divisor blocks: ordered by the ideal
// (a) + N, then lexicographically by (a, b) index.
class P1Index {
public:
    P1Index(const arith::BaseField& F, const arith::Ideal& N);

    const ResidueRing& ring() const noexcept { return ring_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Point& point(std::size_t pos) const { return points_[pos]; }
    // Divisor (a) + N of the representative at `pos`.
    const arith::Ideal& divisor(std::size_t pos) const { return divisors_[block_of_[pos]]; }
    const std::vector<arith::Ideal>& divisor_blocks() const noexcept { return divisors_; }

    // Position of [a:b]; throws PreconditionError if (a) + (b) + N != (1).
    std::size_t normalize(Elt a, Elt b) const;
    bool is_unimodular(Elt a, Elt b) const;

    // Permutation pos -> normalize(point(pos) * m) for the row-vector right
    // action. Requires det(m) to be a unit.
    std::vector<std::size_t> gl2_action(const Matrix2& m) const;
    std::size_t act(std::size_t pos, const Matrix2& m) const;

private:
    struct Local {
        ResidueRing ring;
        std::int64_t prime_norm = 0;
        int exponent = 0;
        std::vector<char> unit;
        std::vector<Elt> inverse;
        std::vector<std::int64_t> nonunit_rank;  // index among non-units, or -1
        std::vector<Elt> nonunits;
        std::vector<int> valuation;  // P-adic valuation (capped at exponent)
        std::vector<Elt> from_global;  // global residue index -> local index
        std::int64_t count() const { return ring.size() + static_cast<std::int64_t>(nonunits.size()); }
    };
    std::int64_t local_position(const Local& L, Elt a, Elt b) const;

    arith::BaseField field_;
    ResidueRing ring_;
    std::vector<Local> locals_;
    std::vector<Elt> idempotents_;
    std::vector<Point> points_;
    std::vector<std::size_t> block_of_;
    std::vector<arith::Ideal> divisors_;
    std::vector<std::size_t> position_of_radix_;
};

Elt det(const ResidueRing& R, const Matrix2& m);
Matrix2 multiply(const ResidueRing& R, const Matrix2& x, const Matrix2& y);

}  // namespace hmf::p1
