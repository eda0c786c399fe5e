#pragma once

#include "hmf/arith/field.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hmf::arith {

// Integral ideal Z*a + Z*(b + d*omega) in Hermite normal form: d | a, d | b,
// 0 <= b < a. Over Q the ideal is (a) with b = 0, d = 1. Equal ideals have
// identical (a, b, d).
struct Ideal {
    Integer a = 1, b = 0, d = 1;

    Integer norm() const { return a * d; }
    bool is_unit() const { return a == 1 && d == 1; }
    bool operator==(const Ideal&) const = default;
    // Ordering by (norm, a, b, d): the canonical level ordering.
    bool operator<(const Ideal& o) const;
    std::string str() const;  // "[norm,a,b,d]"
};

struct PrimeIdeal {
    Ideal ideal;
    Integer p;           // rational prime below
    int residue_degree;  // 1 or 2
    bool ramified = false;
    // omega == root mod the prime (meaningful when residue_degree == 1).
    Integer root = 0;
    int field_degree = 1;
    Integer norm() const { return ideal.norm(); }
    // Canonical label: "norm.root" for degree-one primes over a quadratic
    // field, "norm" for inert primes and over Q.
    std::string label() const;
    // Sort key (norm, root, inert-last).
    bool operator<(const PrimeIdeal& o) const;
    bool operator==(const PrimeIdeal& o) const { return ideal == o.ideal; }
};

Ideal unit_ideal();
Ideal ideal_from_generators(const BaseField& F, std::span<const FieldElement> gens);
Ideal principal_ideal(const BaseField& F, const FieldElement& x);
Ideal multiply(const BaseField& F, const Ideal& I, const Ideal& J);
Ideal add(const BaseField& F, const Ideal& I, const Ideal& J);
Ideal power(const BaseField& F, const Ideal& I, int e);
Ideal conjugate(const BaseField& F, const Ideal& I);
bool contains(const BaseField& F, const Ideal& I, const FieldElement& x);
bool contains(const BaseField& F, const Ideal& I, const Ideal& J);  // J subset of I
// I * J^{-1}, requiring J | I.
Ideal divide_exact(const BaseField& F, const Ideal& I, const Ideal& J);
// Z-basis {a, b + d*omega} of the ideal.
std::vector<FieldElement> basis(const BaseField& F, const Ideal& I);
// Canonical residue (x0, x1) of an integral element modulo I.
std::pair<Integer, Integer> reduce(const Ideal& I, const Integer& x0, const Integer& x1);

std::vector<PrimeIdeal> primes_above(const BaseField& F, const Integer& p);
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const BaseField& F, const Ideal& N);
int valuation(const BaseField& F, const Ideal& N, const PrimeIdeal& P);
// All integral ideals of norm m, sorted.
std::vector<Ideal> ideals_of_norm(const BaseField& F, long m);
// All prime ideals of norm <= bound, sorted by label order.
std::vector<PrimeIdeal> primes_up_to(const BaseField& F, long bound);
// All ideal divisors of N, sorted.
std::vector<Ideal> divisors(const BaseField& F, const Ideal& N);

// Canonical totally positive generator. Among the generators g*eps^(2k) the
// one with least trace is chosen; a tie (at most two adjacent minimizers) is
// broken by the lexicographically smaller (a, b) coordinates. Sign pattern
// table used to reach total positivity from an arbitrary generator g:
//   N(g) < 0             -> multiply by eps (N(eps) = -1)
//   then sigma_0(g) < 0  -> multiply by -1
FieldElement totally_positive_generator(const BaseField& F, const Ideal& I);
// Canonical form of a totally positive element up to totally positive units.
FieldElement normalize_totally_positive(const BaseField& F, FieldElement g);

bool is_square(const BaseField& F, const FieldElement& x, FieldElement* root = nullptr);
// True iff x*y is a square in F (x, y nonzero).
bool square_class_equal(const BaseField& F, const FieldElement& x, const FieldElement& y);

}  // namespace hmf::arith
