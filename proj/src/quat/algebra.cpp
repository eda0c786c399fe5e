#include "hmf/quat/algebra.hpp"

#include "hmf/arith/residue.hpp"

#include <algorithm>

namespace hmf::quat {

using arith::ResidueRing;

QuaternionAlgebra::QuaternionAlgebra(BaseField F, FieldElement a, FieldElement b)
    : F_(std::move(F)), a_(std::move(a)), b_(std::move(b)) {
    require(!a_.is_zero() && !b_.is_zero(), "quaternion algebra: a and b must be nonzero");
    ab_ = a_ * b_;
}

Quaternion QuaternionAlgebra::zero() const { return {F_.zero(), F_.zero(), F_.zero(), F_.zero()}; }

Quaternion QuaternionAlgebra::one() const { return {F_.one(), F_.zero(), F_.zero(), F_.zero()}; }

Quaternion QuaternionAlgebra::scalar(const FieldElement& x) const { return {x, F_.zero(), F_.zero(), F_.zero()}; }

Quaternion QuaternionAlgebra::mul(const Quaternion& x, const Quaternion& y) const {
    return {x[0] * y[0] + a_ * x[1] * y[1] + b_ * x[2] * y[2] - ab_ * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - b_ * x[2] * y[3] + b_ * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + a_ * x[1] * y[3] - a_ * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

Quaternion QuaternionAlgebra::add(const Quaternion& x, const Quaternion& y) const {
    return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]};
}

Quaternion QuaternionAlgebra::sub(const Quaternion& x, const Quaternion& y) const {
    return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]};
}

Quaternion QuaternionAlgebra::conj(const Quaternion& x) const { return {x[0], -x[1], -x[2], -x[3]}; }

FieldElement QuaternionAlgebra::nrd(const Quaternion& x) const {
    return x[0] * x[0] - a_ * x[1] * x[1] - b_ * x[2] * x[2] + ab_ * x[3] * x[3];
}

std::vector<Rational> QuaternionAlgebra::to_vector(const Quaternion& x) const {
    std::vector<Rational> v;
    v.reserve(rational_dim());
    for (const auto& c : x) {
        v.push_back(c.a());
        if (F_.degree() == 2) v.push_back(c.b());
    }
    return v;
}

Quaternion QuaternionAlgebra::from_vector(std::span<const Rational> v) const {
    require(v.size() == rational_dim(), "quaternion from_vector: wrong length");
    Quaternion x = zero();
    int n = F_.degree();
    for (int m = 0; m < 4; ++m) x[m] = F_.element(v[m * n], n == 2 ? v[m * n + 1] : Rational(0));
    return x;
}

int hilbert_symbol_real(const FieldElement& a, const FieldElement& b, int which) {
    require(!a.is_zero() && !b.is_zero(), "hilbert_symbol: zero argument");
    return (a.sign(which) < 0 && b.sign(which) < 0) ? -1 : 1;
}

bool QuaternionAlgebra::ramified_at_real(int which) const { return hilbert_symbol_real(a_, b_, which) == -1; }

bool QuaternionAlgebra::ramified_at(const PrimeIdeal& P) const { return hilbert_symbol(F_, a_, b_, P) == -1; }

bool QuaternionAlgebra::totally_definite() const {
    for (int v = 0; v < F_.degree(); ++v)
        if (!ramified_at_real(v)) return false;
    return true;
}

std::vector<PrimeIdeal> QuaternionAlgebra::finite_ramification() const {
    std::vector<Integer> ps{2};
    for (const auto& x : {a_, b_}) {
        Rational n = abs(x.norm());
        for (const auto& z : {n.get_num(), n.get_den()})
            for (const auto& [p, e] : factor_integer(z)) ps.push_back(p);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<PrimeIdeal> out;
    for (const auto& p : ps)
        for (const auto& P : arith::primes_above(F_, p))
            if (ramified_at(P)) out.push_back(P);
    std::sort(out.begin(), out.end());
    return out;
}

int field_valuation(const BaseField& F, const FieldElement& x, const PrimeIdeal& P) {
    require(!x.is_zero(), "valuation of zero");
    Integer den = x.denominator();
    FieldElement num = x * F.element(Rational(den));
    return arith::valuation(F, arith::principal_ideal(F, num), P) -
           arith::valuation(F, arith::principal_ideal(F, F.element(Rational(den))), P);
}

namespace {

// Scales x by a square so that it becomes integral.
FieldElement integral_square_multiple(const BaseField& F, const FieldElement& x) {
    Integer den = x.denominator();
    return x * F.element(Rational(den * den));
}

FieldElement lift(const BaseField& F, const ResidueRing& R, ResidueRing::Elt t) {
    auto c = R.coords(t);
    return F.element(Rational(static_cast<long>(c[0])), Rational(F.degree() == 2 ? static_cast<long>(c[1]) : 0L));
}


// Element with v_P = 1 and, for split p, valuation 0 at the conjugate prime,
// so that dividing by it keeps integrality at every prime over p.
FieldElement uniformizer(const BaseField& F, const PrimeIdeal& P) {
    if (F.degree() == 1) return F.element(Rational(P.p));
    auto others = arith::primes_above(F, P.p);
    for (long r = 1; r < 200; ++r)
        for (long c0 = -r; c0 <= r; ++c0)
            for (long c1 : {-r + std::abs(c0), r - std::abs(c0)}) {
                FieldElement x = F.element(c0, c1);
                if (x.is_zero() || field_valuation(F, x, P) != 1) continue;
                bool ok = true;
                for (const auto& Q : others)
                    if (!(Q == P) && field_valuation(F, x, Q) != 0) ok = false;
                if (ok) return x;
            }
    throw VerificationError("no uniformizer found for " + P.label());
}

// Divides out even powers of the uniformizer: the result lies in the same
// square class and has valuation 0 or 1.
FieldElement reduce_valuation(const BaseField& F, FieldElement x, const PrimeIdeal& P, const FieldElement& pi) {
    int v = field_valuation(F, x, P);
    FieldElement pi2 = pi * pi;
    for (int k = 0; k < v / 2; ++k) x /= pi2;
    return x;
}

}  // namespace

int hilbert_symbol_by_search(const BaseField& F, const FieldElement& a0, const FieldElement& b0,
                             const PrimeIdeal& P) {
    require(!a0.is_zero() && !b0.is_zero(), "hilbert_symbol: zero argument");
    FieldElement pi = uniformizer(F, P);
    FieldElement a = reduce_valuation(F, integral_square_multiple(F, a0), P, pi);
    FieldElement b = reduce_valuation(F, integral_square_multiple(F, b0), P, pi);
    if (field_valuation(F, a, P) == 1 && field_valuation(F, b, P) == 1) {
        // (a, b) = (a, -ab), and -ab has even valuation.
        b = reduce_valuation(F, -(a * b), P, pi);
    }
    int e = field_valuation(F, F.from_int(2), P);
    int va = field_valuation(F, a, P), vb = field_valuation(F, b, P);
    int m = 2 * e + 2 * std::max(va, vb) + 1;
    ResidueRing R(F, arith::power(F, P.ideal, m));
    const auto n = R.size();
    auto A = R.from_element(a), B = R.from_element(b);
    std::vector<char> square(n, 0), unit(n, 0);
    for (ResidueRing::Elt z = 0; z < n; ++z) {
        square[R.mul(z, z)] = 1;
        unit[z] = R.is_unit(z);
    }
    std::vector<ResidueRing::Elt> ax(n), by(n);
    for (ResidueRing::Elt x = 0; x < n; ++x) {
        ax[x] = R.mul(A, R.mul(x, x));
        by[x] = R.mul(B, R.mul(x, x));
    }
    // A primitive solution has x or y a unit, since otherwise z is a unit
    // while z^2 = a x^2 + b y^2 lies in P.
    for (ResidueRing::Elt x = 0; x < n; ++x)
        for (ResidueRing::Elt y = 0; y < n; ++y) {
            if (!unit[x] && !unit[y]) continue;
            if (square[R.add(ax[x], by[y])]) return 1;
        }
    return -1;
}

int hilbert_symbol(const BaseField& F, const FieldElement& a0, const FieldElement& b0, const PrimeIdeal& P) {
    require(!a0.is_zero() && !b0.is_zero(), "hilbert_symbol: zero argument");
    if (P.p == 2) return hilbert_symbol_by_search(F, a0, b0, P);
    FieldElement a = integral_square_multiple(F, a0), b = integral_square_multiple(F, b0);
    int alpha = field_valuation(F, a, P), beta = field_valuation(F, b, P);
    if (alpha == 0 && beta == 0) return 1;
    // Tame symbol: the residue of (-1)^(alpha*beta) a^beta / b^alpha, raised to (q-1)/2.
    FieldElement u = F.one();
    for (int k = 0; k < beta; ++k) u *= a;
    for (int k = 0; k < alpha; ++k) u /= b;
    if ((alpha * beta) % 2 == 1) u = -u;
    verify(field_valuation(F, u, P) == 0, "hilbert_symbol: tame symbol is not a unit");
    ResidueRing k(F, P.ideal);
    // u may carry denominators divisible by p, so locate its residue by search.
    ResidueRing::Elt residue = -1;
    for (ResidueRing::Elt t = 1; t < k.size() && residue < 0; ++t) {
        FieldElement diff = u - lift(F, k, t);
        if (diff.is_zero() || field_valuation(F, diff, P) >= 1) residue = t;
    }
    verify(residue >= 0, "hilbert_symbol: residue search failed");
    auto power = k.pow(residue, (k.size() - 1) / 2);
    return power == k.one() ? 1 : -1;
}

}  // namespace hmf::quat
