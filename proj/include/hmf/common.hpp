#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmf {

using Integer = mpz_class;
using Rational = mpq_class;

// Raised when an input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an internal consistency check fails. These indicate bugs or
// corrupted data, never recoverable user input problems.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

inline void verify(bool condition, const std::string& message) {
    if (!condition) throw VerificationError(message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

inline std::int64_t to_i64(const Integer& z) {
    verify(z.fits_slong_p(), "integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Least nonnegative residue.
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline bool is_perfect_square(const Integer& a) {
    return a >= 0 && mpz_perfect_square_p(a.get_mpz_t()) != 0;
}

inline Integer isqrt(const Integer& a) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// Exact square root of a rational, if it exists.
inline bool rational_sqrt(const Rational& q, Rational& root) {
    if (q < 0) return false;
    if (!is_perfect_square(q.get_num()) || !is_perfect_square(q.get_den())) return false;
    root = Rational(isqrt(q.get_num()), isqrt(q.get_den()));
    root.canonicalize();
    return true;
}

inline bool is_prime(const Integer& p) {
    return p > 1 && mpz_probab_prime_p(p.get_mpz_t(), 30) != 0;
}

// Trial-division factorization; inputs here are level norms and small
// discriminants.
std::vector<std::pair<Integer, int>> factor_integer(Integer n);

Integer squarefree_part(const Integer& n);

std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace hmf
