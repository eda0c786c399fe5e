#pragma once

#include "hmf/arith/ideal.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace hmf::arith {

// The finite ring Z_F/N. Elements are encoded as indices x0 + a*x1 of the
// canonical residues (x0 in [0, a), x1 in [0, d)) against the Hermite basis.
class ResidueRing {
public:
    using Elt = std::int64_t;

    ResidueRing() = default;
    ResidueRing(const BaseField& F, const Ideal& N);

    const Ideal& modulus() const noexcept { return N_; }
    std::int64_t size() const noexcept { return a_ * d_; }
    const std::vector<std::pair<PrimeIdeal, int>>& factorization() const noexcept { return factors_; }

    Elt encode(const Integer& x0, const Integer& x1) const;
    Elt encode(std::int64_t x0, std::int64_t x1) const;
    // Integral element, or one whose denominator is coprime to N.
    Elt from_element(const FieldElement& x) const;
    std::array<std::int64_t, 2> coords(Elt x) const noexcept { return {x % a_, x / a_}; }

    Elt zero() const noexcept { return 0; }
    Elt one() const noexcept { return size() == 1 ? 0 : 1; }
    Elt from_int(std::int64_t k) const { return encode(k, 0); }
    Elt add(Elt x, Elt y) const;
    Elt sub(Elt x, Elt y) const;
    Elt neg(Elt x) const { return sub(0, x); }
    Elt mul(Elt x, Elt y) const;
    Elt pow(Elt x, std::int64_t e) const;
    bool is_unit(Elt x) const;
    Elt inverse(Elt x) const;  // requires is_unit(x)
    // Order of the unit group.
    std::int64_t unit_count() const noexcept { return phi_; }

    // Reduction map Z_F/N -> Z_F/M for M | N.
    Elt reduce_to(Elt x, const ResidueRing& quotient) const;

private:
    Ideal N_;
    std::int64_t a_ = 1, b_ = 0, d_ = 1;
    int t_ = 0;
    long s_ = 0;
    std::vector<std::pair<PrimeIdeal, int>> factors_;
    std::vector<Ideal> prime_ideals_;
    std::int64_t phi_ = 1;
};

}  // namespace hmf::arith
