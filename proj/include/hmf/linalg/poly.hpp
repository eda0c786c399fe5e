#pragma once

#include "hmf/linalg/matrix.hpp"

#include <optional>
#include <utility>

namespace hmf::linalg {

// Coefficients low degree first; no trailing zeros (the zero polynomial is
// empty).
using IntPolynomial = std::vector<Integer>;
using QPolynomial = std::vector<Rational>;

template <class P>
long degree(const P& f) {
    return static_cast<long>(f.size()) - 1;
}

IntPolynomial trim(IntPolynomial f);
QPolynomial trim(QPolynomial f);

QPolynomial to_q(const IntPolynomial& f);
Integer content(const IntPolynomial& f);
// Scales a rational polynomial to a primitive integer one with positive
// leading coefficient.
IntPolynomial primitive_part(const QPolynomial& f);
IntPolynomial primitive_part(const IntPolynomial& f);

QPolynomial add(const QPolynomial& f, const QPolynomial& g);
QPolynomial sub(const QPolynomial& f, const QPolynomial& g);
QPolynomial mul(const QPolynomial& f, const QPolynomial& g);
IntPolynomial mul(const IntPolynomial& f, const IntPolynomial& g);
QPolynomial derivative(const QPolynomial& f);
// f = q g + r with deg r < deg g.
std::pair<QPolynomial, QPolynomial> divmod(const QPolynomial& f, const QPolynomial& g);
// Monic gcd (zero if both are zero).
QPolynomial gcd(const QPolynomial& f, const QPolynomial& g);
QPolynomial monic(const QPolynomial& f);
bool is_squarefree(const QPolynomial& f);
// Product of the distinct monic irreducible factors.
QPolynomial radical(const QPolynomial& f);

Rational evaluate(const QPolynomial& f, const Rational& x);
QMatrix evaluate(const QPolynomial& f, const QMatrix& A);

// Exact characteristic polynomial det(x - A), monic.
IntPolynomial charpoly(const ZMatrix& A);
QPolynomial charpoly(const QMatrix& A);

// Irreducible factors over Q, each primitive with positive leading
// coefficient, with multiplicities; sorted by (degree, coefficients). The
// constant content is dropped.
std::vector<std::pair<IntPolynomial, int>> factor(const IntPolynomial& f);

// Number of distinct real roots in (lo, hi]; empty bounds mean infinity.
long count_real_roots(const QPolynomial& f, const std::optional<Rational>& lo = std::nullopt,
                      const std::optional<Rational>& hi = std::nullopt);

// Characteristic polynomial of multiplication by phi(theta) on Q[x]/(g),
// i.e. a power of the minimal polynomial of phi(theta).
QPolynomial field_element_charpoly(const IntPolynomial& g, const QVector& phi);

// Discriminant of a quadratic polynomial.
Integer quadratic_discriminant(const IntPolynomial& g);

std::string to_string(const IntPolynomial& f);

}  // namespace hmf::linalg
