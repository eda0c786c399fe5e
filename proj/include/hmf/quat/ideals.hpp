#pragma once

#include "hmf/quat/order.hpp"
#include "hmf/quat/splitting.hpp"

#include <optional>

namespace hmf::quat {

// Default number of theta coefficients used to pre-screen isomorphism tests.
inline constexpr long kDefaultThetaCount = 16;

// Integral right ideal of the maximal order O.
struct RightIdeal {
    Lattice lattice;
    Ideal norm;                   // nrd(I)
    FieldElement norm_generator;  // totally positive generator of nrd(I)
    // Colon shortcut: b in I and a left ideal I' with O_L(I) b = I I'. We take
    // b = norm_generator and I' = conj(I), so alpha generates J I' exactly
    // when alpha / b generates J I^{-1}.
    OElement shortcut_b;
    Lattice shortcut_left;
};

// Validates that L is an integral right ideal and fills in the derived data.
RightIdeal make_right_ideal(const QuaternionOrder& O, const Lattice& L);

// O_L(I) = I conj(I) / nrd(I).
Lattice left_order(const QuaternionOrder& O, const RightIdeal& I);

// An element beta of J I' with nrd(beta) = nrd(J) nrd(I) (generators), which
// exists iff J = (beta / b) I. Empty when the ideals are not isomorphic.
std::optional<OElement> isomorphism(const QuaternionOrder& O, const RightIdeal& I, const RightIdeal& J);

// The Nm(q)+1 right ideals J of I with I/J of length one at q, listed in the
// P^1(Z_F/q) order of the defining row vector. q must be prime and prime to
// the discriminant; nrd(I) may be divisible by q.
std::vector<RightIdeal> neighbors(const QuaternionOrder& O, const RightIdeal& I, const ResidueSplitting& split_q);

struct IdealClass {
    RightIdeal ideal;
    Lattice left_order;
    std::vector<OElement> units;  // O_L(I)^1 / {+-1}, identity first
    std::vector<long> theta;
    std::size_t weight() const { return units.size(); }
};

struct IdealClassSet {
    PrimeIdeal q;  // neighbor prime used by the search
    std::vector<IdealClass> classes;
    std::size_t size() const { return classes.size(); }
    // Sum of 1/w_i.
    Rational mass() const;
};

// Smallest prime not dividing disc * avoid.
PrimeIdeal choose_neighbor_prime(const BaseField& F, const Ideal& disc, const Ideal& avoid);

// Neighbor-graph search from O until closed. Representatives have norms
// that are powers of q, where q avoids `avoid`.
IdealClassSet right_ideal_classes(const LoadedAlgebra& B, const Ideal& avoid = arith::unit_ideal(),
                                  long theta_count = kDefaultThetaCount);

// Same classes, in the same order, with representatives of norm prime to N.
IdealClassSet rechoose_coprime(const LoadedAlgebra& B, const IdealClassSet& classes, const Ideal& N);

}  // namespace hmf::quat
