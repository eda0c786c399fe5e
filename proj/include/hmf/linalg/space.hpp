#pragma once

#include "hmf/linalg/poly.hpp"

#include <map>

namespace hmf::linalg {

// Number of primitive-element candidates tried by decompose.
inline constexpr std::size_t kPrimitiveBudget = 200;

// A Q-vector space with a family of operators acting on column vectors.
struct HeckeSpace {
    std::size_t dim = 0;
    std::vector<std::string> labels;  // insertion order
    std::map<std::string, QMatrix> ops;

    void add(const std::string& label, QMatrix m);
    bool has(const std::string& label) const { return ops.count(label) != 0; }
    const QMatrix& op(const std::string& label) const;
};

// Induced operators on S / W for an invariant subspace W. Coordinates on the
// quotient are the non-pivot coordinates of the echelon basis of W.
HeckeSpace quotient(const HeckeSpace& S, const std::vector<QVector>& W);

// Operators restricted to an invariant subspace, in the given basis.
HeckeSpace restrict_to(const HeckeSpace& S, const std::vector<QVector>& W);

// Whether T W is contained in W.
bool is_invariant(const QMatrix& T, const std::vector<QVector>& W);

struct HeckeConstituent {
    IntPolynomial g;  // minimal polynomial of theta
    // t = sum of coefficient * operator
    std::vector<std::pair<std::string, long>> primitive;
    std::vector<QVector> block;   // basis of ker g(t)
    // a_T as coordinates in the power basis 1, theta, ..., theta^(d-1)
    std::map<std::string, QVector> eigenvalues;
    std::size_t dim() const { return block.size(); }
};

// One eigensystem from a lower level, pinned down jointly: phi is the
// eigenvalue of t = sum coefficient * operator and generates the Hecke field,
// every other eigenvalue is a polynomial in phi. Matching operator by
// operator is not enough, a twist can agree with one conjugate at some
// primes and with another at the rest.
struct OldEigensystem {
    std::vector<std::pair<std::string, Rational>> primitive;
    QPolynomial minpoly;                                        // of phi
    std::vector<std::pair<std::string, QPolynomial>> relations;  // a_T = h_T(phi)
    // minimal polynomial of the eigenvalue of the first relation's operator;
    // eigensystems sharing it share the first kernel
    QPolynomial first_minpoly;
    std::size_t expected_dim = 0;
};

// The eigensystem of c restricted to the given labels, expected to span
// c.dim() * multiplicity dimensions.
OldEigensystem old_eigensystem(const HeckeConstituent& c, const std::vector<std::string>& labels,
                               std::size_t multiplicity);

// The common eigenspace in S, cut down one relation at a time and stopped
// once it has expected_dim. Throws VerificationError if the relations run out
// first. `start` is ker first_minpoly(T) for the first relation's operator T,
// computed here when null.
std::vector<QVector> old_subspace(const HeckeSpace& S, const OldEigensystem& e,
                                  const std::vector<QVector>* start = nullptr);

struct OldNewSplit {
    std::vector<QVector> old_basis;
    HeckeSpace new_space;
};

// Sum of the old subspaces of every lower eigensystem, and the new quotient.
// expected_total is the predicted dimension of the sum.
OldNewSplit old_new_split(const HeckeSpace& S, const std::vector<OldEigensystem>& old, std::size_t expected_total);

// Splits S into Hecke-irreducible blocks using a primitive element built from
// the first operators of `family`. Candidates are tried in a fixed order:
// by total absolute coefficient, then by last operator used, then
// lexicographically with positive coefficients first.
std::vector<HeckeConstituent> decompose(const HeckeSpace& S, const std::vector<std::string>& family,
                                        std::size_t budget = kPrimitiveBudget);

// Fills c.eigenvalues for every operator of S.
void eigensystem(HeckeConstituent& c, const HeckeSpace& S);

// Whether every conjugate of phi(theta) is real and has square at most
// bound_sq.
bool conjugates_real(const IntPolynomial& g, const QVector& phi);
bool conjugates_bounded(const IntPolynomial& g, const QVector& phi, const Rational& bound_sq);

}  // namespace hmf::linalg
