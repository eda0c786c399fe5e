#pragma once

#include "hmf/arith/ideal.hpp"

#include <array>
#include <span>
#include <vector>

namespace hmf::quat {

using arith::BaseField;
using arith::FieldElement;
using arith::PrimeIdeal;

// x0 + x1*i + x2*j + x3*k with coordinates in F.
using Quaternion = std::array<FieldElement, 4>;

// The algebra (a, b / F): i^2 = a, j^2 = b, ij = -ji = k.
class QuaternionAlgebra {
public:
    QuaternionAlgebra() = default;
    QuaternionAlgebra(BaseField F, FieldElement a, FieldElement b);

    const BaseField& field() const noexcept { return F_; }
    const FieldElement& a() const noexcept { return a_; }
    const FieldElement& b() const noexcept { return b_; }
    // Dimension of B as a Q-vector space.
    std::size_t rational_dim() const noexcept { return 4 * static_cast<std::size_t>(F_.degree()); }

    Quaternion zero() const;
    Quaternion one() const;
    Quaternion scalar(const FieldElement& x) const;
    Quaternion mul(const Quaternion& x, const Quaternion& y) const;
    Quaternion add(const Quaternion& x, const Quaternion& y) const;
    Quaternion sub(const Quaternion& x, const Quaternion& y) const;
    Quaternion conj(const Quaternion& x) const;
    FieldElement trd(const Quaternion& x) const { return x[0] + x[0]; }
    FieldElement nrd(const Quaternion& x) const;

    // Coordinates over the Q-basis {omega^r * e_m}, grouped by component m.
    std::vector<Rational> to_vector(const Quaternion& x) const;
    Quaternion from_vector(std::span<const Rational> v) const;

    bool ramified_at_real(int which) const;
    bool ramified_at(const PrimeIdeal& P) const;
    bool totally_definite() const;
    // Finite primes where B ramifies (candidates: primes over 2 and over the
    // norms of a and b).
    std::vector<PrimeIdeal> finite_ramification() const;

private:
    BaseField F_;
    FieldElement a_, b_, ab_;
};

// Local Hilbert symbol at a finite prime: +1 iff a x^2 + b y^2 = z^2 has a
// nontrivial solution over the completion.
int hilbert_symbol(const BaseField& F, const FieldElement& a, const FieldElement& b, const PrimeIdeal& P);
// Same at the real embedding `which`.
int hilbert_symbol_real(const FieldElement& a, const FieldElement& b, int which);

// Independent check: exhaustive primitive-solution search modulo P^m, with m
// large enough for Hensel lifting. Valid at every finite prime.
int hilbert_symbol_by_search(const BaseField& F, const FieldElement& a, const FieldElement& b,
                             const PrimeIdeal& P);

// v_P(x) for a nonzero element of F.
int field_valuation(const BaseField& F, const FieldElement& x, const PrimeIdeal& P);

}  // namespace hmf::quat
