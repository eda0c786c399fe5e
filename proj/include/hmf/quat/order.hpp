#pragma once

#include "hmf/arith/lattice.hpp"
#include "hmf/quat/algebra.hpp"

#include <string>
#include <utility>

namespace hmf::quat {

using arith::GramLattice;
using arith::Ideal;
using arith::IntMatrix;
using arith::IntVector;

// An element of B written in the coordinates of a fixed order basis:
// (c_0 e_0 + ... + c_r e_r) / den.
struct OElement {
    IntVector c;
    Integer den = 1;
    bool operator==(const OElement&) const = default;
};

// Full-rank Z-lattice in B, stored as HNF rows over the order basis divided
// by a common denominator. The representation is canonical.
struct Lattice {
    IntMatrix rows;
    Integer den = 1;
    bool operator==(const Lattice&) const = default;
    OElement element(std::size_t k) const { return {rows[k], den}; }
};

class QuaternionOrder {
public:
    QuaternionOrder() = default;
    // Builds the tables; throws OrderError if the basis is degenerate, not
    // integral or not closed under multiplication, or misses 1.
    QuaternionOrder(QuaternionAlgebra A, std::vector<std::vector<Rational>> basis);

    const QuaternionAlgebra& algebra() const noexcept { return A_; }
    const BaseField& field() const noexcept { return A_.field(); }
    std::size_t rank() const noexcept { return basis_.size(); }
    const std::vector<Quaternion>& basis() const noexcept { return basis_; }

    Quaternion element(const OElement& x) const;
    // Order coordinates of an arbitrary element of B.
    OElement coordinates(const Quaternion& x) const;

    const IntVector& one() const noexcept { return one_; }
    IntVector mul(const IntVector& x, const IntVector& y) const;
    OElement mul(const OElement& x, const OElement& y) const;
    IntVector conj(const IntVector& x) const;
    // Multiplication by a central element of F.
    OElement scale(const FieldElement& c, const OElement& x) const;
    FieldElement nrd(const OElement& x) const;
    FieldElement trd(const OElement& x) const;

    // Gram matrix of Tr_{F/Q} trd(x conj(y)); x^T G x = 2 Tr nrd(x).
    const IntMatrix& trace_gram() const noexcept { return trace_gram_; }
    // Coordinate c (over {1, omega}) of trd(x conj(y)); x^T N_c x = 2 nrd(x)_c.
    const IntMatrix& nrd_gram(int c) const { return nrd_gram_[c]; }
    // |det| of the trace Gram: d_F^4 Nm(discriminant)^2 for a maximal order.
    Integer gram_determinant() const;

    Lattice as_lattice() const;

private:
    QuaternionAlgebra A_;
    std::vector<Quaternion> basis_;
    std::vector<std::vector<Rational>> to_order_;  // Q-basis coordinates -> order coordinates
    std::vector<std::vector<IntVector>> mult_;     // e_k e_l in order coordinates
    IntMatrix conj_;                               // conj(e_k)
    IntMatrix omega_;                              // omega * e_k
    IntVector one_;
    IntMatrix trace_gram_;
    std::vector<IntMatrix> nrd_gram_;
};

// Loader failures, named by kind.
class OrderError : public VerificationError {
public:
    enum class Kind { Degenerate, NotIntegral, NotClosed, MissingOne, WrongRamification, NotMaximal, FieldMismatch };
    OrderError(Kind kind, const std::string& what) : VerificationError(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct AlgebraConfig {
    long field_d = 0;
    std::vector<Rational> a, b;              // coordinates over {1, omega}
    std::vector<std::string> ramified;       // finite prime labels
    std::vector<std::vector<Rational>> basis;
};

AlgebraConfig parse_algebra_config(const std::string& text);
AlgebraConfig read_algebra_config(const std::string& path);

struct LoadedAlgebra {
    QuaternionAlgebra algebra;
    QuaternionOrder order;
    std::vector<PrimeIdeal> ramified;  // finite ramified primes
    Ideal discriminant;                // reduced discriminant
};

// Verifies the configuration (ramification, ring axioms, maximality).
LoadedAlgebra load_algebra_config(const BaseField& F, const AlgebraConfig& cfg);

// Lattice utilities, all in order coordinates.
Lattice lattice_from_generators(const std::vector<OElement>& gens, std::size_t rank);
Lattice lattice_product(const QuaternionOrder& O, const Lattice& L, const Lattice& M);
Lattice lattice_conj(const QuaternionOrder& O, const Lattice& L);
Lattice lattice_scale(const QuaternionOrder& O, const Lattice& L, const FieldElement& c);
Lattice lattice_left_mul(const QuaternionOrder& O, const OElement& x, const Lattice& L);
bool lattice_contains(const Lattice& L, const OElement& x);
bool lattice_contains(const Lattice& L, const Lattice& M);  // M subset of L
// [O : L] as a rational number (L need not be inside O).
Rational lattice_index(const Lattice& L);
// Trace Gram (x^T G x = 2 Tr nrd x) and nrd Grams of the lattice basis.
IntMatrix lattice_trace_gram(const QuaternionOrder& O, const Lattice& L);
IntMatrix lattice_nrd_gram(const QuaternionOrder& O, const Lattice& L, int c);
// Smallest Z_F-ideal containing nrd(L) (L integral).
Ideal lattice_norm_ideal(const QuaternionOrder& O, const Lattice& L);

// Units of reduced norm 1 of the order spanned by L, modulo +-1, identity
// first. Group closure is verified.
std::vector<OElement> unit_group(const QuaternionOrder& O, const Lattice& order_lattice);
// Representation counts #{x : Tr nrd(x) = n}, n = 0..count-1.
std::vector<long> theta_fingerprint(const QuaternionOrder& O, const Lattice& order_lattice, long count);

}  // namespace hmf::quat
