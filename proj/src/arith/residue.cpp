#include "hmf/arith/residue.hpp"

namespace hmf::arith {

ResidueRing::ResidueRing(const BaseField& F, const Ideal& N) : N_(N) {
    require(N.norm() != 0, "ResidueRing: zero modulus");
    a_ = to_i64(N.a);
    b_ = to_i64(N.b);
    d_ = to_i64(N.d);
    t_ = F.omega_t();
    s_ = F.omega_s();
    factors_ = factor_ideal(F, N);
    phi_ = size();
    for (const auto& [P, e] : factors_) {
        (void)e;
        prime_ideals_.push_back(P.ideal);
        std::int64_t np = to_i64(P.norm());
        phi_ = phi_ / np * (np - 1);
    }
}

ResidueRing::Elt ResidueRing::encode(std::int64_t x0, std::int64_t x1) const {
    std::int64_t q = x1 >= 0 ? x1 / d_ : -((-x1 + d_ - 1) / d_);
    std::int64_t r1 = x1 - q * d_;
    std::int64_t r0 = mod_floor(x0 - q * b_, a_);
    return r0 + a_ * r1;
}

ResidueRing::Elt ResidueRing::encode(const Integer& x0, const Integer& x1) const {
    Integer q = floor_div(x1, Integer(d_));
    Integer r1 = x1 - q * d_;
    Integer r0 = mod_floor(x0 - q * b_, Integer(a_));
    return r0.get_si() + a_ * r1.get_si();
}

ResidueRing::Elt ResidueRing::from_element(const FieldElement& x) const {
    Integer den = x.denominator();
    Rational q0 = x.a() * den, q1 = x.b() * den;
    Elt num = encode(q0.get_num(), q1.get_num());
    if (den == 1) return num;
    require(gcd(den, N_.norm()) == 1, "ResidueRing::from_element: denominator not coprime to modulus");
    Integer inv;
    Integer mod = a_;  // N meets Z in aZ
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    return mul(num, from_int(inv.get_si()));
}

ResidueRing::Elt ResidueRing::add(Elt x, Elt y) const {
    auto cx = coords(x), cy = coords(y);
    return encode(cx[0] + cy[0], cx[1] + cy[1]);
}

ResidueRing::Elt ResidueRing::sub(Elt x, Elt y) const {
    auto cx = coords(x), cy = coords(y);
    return encode(cx[0] - cy[0], cx[1] - cy[1]);
}

ResidueRing::Elt ResidueRing::mul(Elt x, Elt y) const {
    auto cx = coords(x), cy = coords(y);
    __int128 x0 = cx[0], x1 = cx[1], y0 = cy[0], y1 = cy[1];
    __int128 r0 = x0 * y0 + x1 * y1 * s_;
    __int128 r1 = x0 * y1 + x1 * y0 + x1 * y1 * t_;
    // Reduce the omega coordinate first (it feeds into x0), then x0 mod a.
    std::int64_t d = d_, a = a_;
    __int128 q = r1 / d;
    if (r1 - q * d < 0) --q;
    r1 -= q * d;
    r0 -= q * b_;
    r0 %= a;
    if (r0 < 0) r0 += a;
    return static_cast<std::int64_t>(r0) + a_ * static_cast<std::int64_t>(r1);
}

ResidueRing::Elt ResidueRing::pow(Elt x, std::int64_t e) const {
    Elt r = one(), b = x;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

bool ResidueRing::is_unit(Elt x) const {
    if (size() == 1) return true;
    auto c = coords(x);
    for (const auto& P : prime_ideals_) {
        auto [r0, r1] = reduce(P, Integer(c[0]), Integer(c[1]));
        if (r0 == 0 && r1 == 0) return false;
    }
    return true;
}

ResidueRing::Elt ResidueRing::inverse(Elt x) const {
    require(is_unit(x), "ResidueRing::inverse: not a unit");
    Elt y = pow(x, phi_ - 1);
    verify(mul(x, y) == one(), "ResidueRing::inverse: check failed");
    return y;
}

ResidueRing::Elt ResidueRing::reduce_to(Elt x, const ResidueRing& quotient) const {
    auto c = coords(x);
    return quotient.encode(c[0], c[1]);
}

}  // namespace hmf::arith
