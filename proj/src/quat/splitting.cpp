#include "hmf/quat/splitting.hpp"

#include <map>
#include <random>

namespace hmf::quat {

using arith::ResidueRing;
using Elt = ResidueRing::Elt;

namespace {

// Splitting data at one prime power Q = P^e.
struct LocalSplitting {
    ResidueRing ring;                 // Z_F/Q
    std::vector<Matrix2> images;      // images of the order basis
};

class LocalBuilder {
public:
    LocalBuilder(const QuaternionOrder& O, const PrimeIdeal& P, int e)
        : O_(O), F_(O.field()), P_(P), Q_(arith::power(F_, P.ideal, e)), RQ_(F_, Q_), k_(F_, P.ideal) {
        QO_ = ideal_times_order(Q_);
        PO_ = ideal_times_order(P.ideal);
    }

    LocalSplitting build() {
        IntVector e = find_idempotent();
        IntVector one_minus_e = sub(O_.one(), e);
        IntVector e12, e21;
        std::size_t r = O_.rank();
        for (std::size_t k = 0; k < r && e12.empty(); ++k) {
            IntVector t = reduce(O_.mul(O_.mul(e, basis(k)), one_minus_e), QO_);
            if (!is_zero(reduce(t, PO_))) e12 = t;
        }
        verify(!e12.empty(), "residue splitting: no off-diagonal unit found");
        build_scalar_table(e);
        for (std::size_t k = 0; k < r && e21.empty(); ++k) {
            IntVector t = reduce(O_.mul(O_.mul(one_minus_e, basis(k)), e), QO_);
            Elt s = scalar(reduce(O_.mul(e12, t), QO_));
            if (RQ_.is_unit(s)) e21 = reduce(scale(lift(RQ_.inverse(s)), t), QO_);
        }
        verify(!e21.empty(), "residue splitting: no dual off-diagonal unit found");
        verify(is_zero(reduce(sub(O_.mul(e12, e21), e), QO_)), "residue splitting: e12 e21 != e11");
        verify(is_zero(reduce(sub(O_.mul(e21, e12), one_minus_e), QO_)), "residue splitting: e21 e12 != e22");
        std::array<IntVector, 2> left{e, e12};   // E_11, E_12
        std::array<IntVector, 2> right{e, e21};  // E_11, E_21
        LocalSplitting out{RQ_, {}};
        for (std::size_t k = 0; k < r; ++k) {
            Matrix2 m{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    m[2 * i + j] = scalar(reduce(O_.mul(O_.mul(left[i], basis(k)), right[j]), QO_));
            out.images.push_back(m);
        }
        return out;
    }

private:
    IntVector basis(std::size_t k) const {
        IntVector v(O_.rank(), 0);
        v[k] = 1;
        return v;
    }

    static IntVector sub(const IntVector& x, const IntVector& y) {
        IntVector z(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) z[k] = x[k] - y[k];
        return z;
    }

    static bool is_zero(const IntVector& x) {
        for (const auto& c : x)
            if (c != 0) return false;
        return true;
    }

    static IntVector reduce(IntVector x, const IntMatrix& hnf) { return arith::reduce_mod_hnf(std::move(x), hnf); }

    IntMatrix ideal_times_order(const Ideal& I) const {
        IntMatrix gens;
        for (const auto& g : arith::basis(F_, I))
            for (std::size_t k = 0; k < O_.rank(); ++k) gens.push_back(O_.scale(g, {basis(k), 1}).c);
        return arith::hnf_rows(std::move(gens), O_.rank());
    }

    // Residue ring element as an integral element of F.
    FieldElement lift(Elt t) const {
        auto c = RQ_.coords(t);
        return F_.element(Rational(static_cast<long>(c[0])), Rational(F_.degree() == 2 ? static_cast<long>(c[1]) : 0L));
    }

    IntVector scale(const FieldElement& c, const IntVector& x) const {
        OElement y = O_.scale(c, {x, 1});
        verify(y.den == 1, "residue splitting: scaling by an integral element left the order");
        return y.c;
    }

    IntVector find_idempotent() {
        std::size_t r = O_.rank();
        std::mt19937 rng(12345);
        std::uniform_int_distribution<int> coef(-3, 3);
        // Basis elements first, then pairwise sums, then a seeded random sweep.
        std::vector<IntVector> candidates;
        for (std::size_t k = 0; k < r; ++k) candidates.push_back(basis(k));
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t l = k + 1; l < r; ++l) {
                IntVector v = basis(k);
                v[l] = 1;
                candidates.push_back(v);
            }
        for (int t = 0; t < 2000; ++t) {
            IntVector v(r);
            for (auto& c : v) c = coef(rng);
            candidates.push_back(v);
        }
        for (const auto& y : candidates) {
            FieldElement tr = O_.trd({y, 1}), nr = O_.nrd({y, 1});
            Elt t = k_.from_element(tr), n = k_.from_element(nr);
            std::vector<Elt> roots;
            for (Elt x = 0; x < k_.size() && roots.size() < 2; ++x)
                if (k_.add(k_.sub(k_.mul(x, x), k_.mul(t, x)), n) == 0) roots.push_back(x);
            if (roots.size() < 2) continue;
            // e = (y - r2) / (r1 - r2), computed with Z_F lifts.
            Elt inv = k_.inverse(k_.sub(roots[0], roots[1]));
            FieldElement r2 = lift_k(roots[1]), s = lift_k(inv);
            IntVector e = sub(y, scale(r2, O_.one()));
            e = reduce(scale(s, e), QO_);
            return hensel(e);
        }
        throw VerificationError("residue splitting: idempotent search exhausted its budget at " + P_.label());
    }

    FieldElement lift_k(Elt t) const {
        auto c = k_.coords(t);
        return F_.element(Rational(static_cast<long>(c[0])), Rational(F_.degree() == 2 ? static_cast<long>(c[1]) : 0L));
    }

    IntVector hensel(IntVector e) {
        for (int it = 0; it < 64; ++it) {
            IntVector e2 = reduce(O_.mul(e, e), QO_);
            if (is_zero(reduce(sub(e2, e), QO_))) return e;
            IntVector e3 = reduce(O_.mul(e2, e), QO_);
            IntVector next(e.size());
            for (std::size_t k = 0; k < e.size(); ++k) next[k] = 3 * e2[k] - 2 * e3[k];
            e = reduce(next, QO_);
        }
        throw VerificationError("residue splitting: Hensel lifting of the idempotent did not converge");
    }

    void build_scalar_table(const IntVector& e) {
        table_.clear();
        for (Elt t = 0; t < RQ_.size(); ++t) {
            IntVector key = reduce(scale(lift(t), e), QO_);
            verify(table_.emplace(key, t).second, "residue splitting: scalar table is not injective");
        }
    }

    Elt scalar(const IntVector& x) const {
        auto it = table_.find(x);
        verify(it != table_.end(), "residue splitting: element is not a scalar multiple of e11");
        return it->second;
    }

    const QuaternionOrder& O_;
    const BaseField& F_;
    PrimeIdeal P_;
    Ideal Q_;
    ResidueRing RQ_, k_;
    IntMatrix QO_, PO_;
    std::map<IntVector, Elt> table_;
};

// Rank of 2x2 matrices viewed as vectors of length 4 over the residue field.
int rank_over_field(const ResidueRing& k, std::vector<std::array<Elt, 4>> rows) {
    int rank = 0;
    for (int c = 0; c < 4; ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        Elt inv = k.inverse(rows[rank][c]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
            Elt f = k.mul(rows[r][c], inv);
            for (int j = 0; j < 4; ++j) rows[r][j] = k.sub(rows[r][j], k.mul(f, rows[rank][j]));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

ResidueSplitting::ResidueSplitting(const QuaternionOrder& O, const Ideal& N, const Ideal& disc)
    : ring_(O.field(), N) {
    const BaseField& F = O.field();
    require(arith::add(F, N, disc).is_unit(), "residue splitting: level is not coprime to the discriminant");
    std::size_t r = O.rank();
    images_.assign(r, Matrix2{});
    if (N.is_unit()) return;
    std::vector<LocalSplitting> locals;
    for (const auto& [P, e] : ring_.factorization()) locals.push_back(LocalBuilder(O, P, e).build());
    // CRT glue through a lookup of reduction tuples.
    std::map<std::vector<Elt>, Elt> glue;
    for (Elt g = 0; g < ring_.size(); ++g) {
        std::vector<Elt> key;
        for (const auto& L : locals) key.push_back(ring_.reduce_to(g, L.ring));
        glue.emplace(std::move(key), g);
    }
    for (std::size_t k = 0; k < r; ++k)
        for (int ij = 0; ij < 4; ++ij) {
            std::vector<Elt> key;
            for (const auto& L : locals) key.push_back(L.images[k][ij]);
            images_[k][ij] = glue.at(key);
        }

    // Verification.
    Matrix2 id{ring_.one(), 0, 0, ring_.one()};
    verify(image(OElement{O.one(), 1}) == id, "residue splitting: 1 does not map to the identity");
    for (std::size_t k = 0; k < r; ++k) {
        IntVector ek(r, 0);
        ek[k] = 1;
        verify(p1::det(ring_, images_[k]) == ring_.from_element(O.nrd({ek, 1})), "residue splitting: det != nrd");
        for (std::size_t l = 0; l < r; ++l) {
            IntVector el(r, 0);
            el[l] = 1;
            verify(image(OElement{O.mul(ek, el), 1}) == p1::multiply(ring_, images_[k], images_[l]),
                   "residue splitting: not multiplicative");
        }
    }
    for (const auto& [P, e] : ring_.factorization()) {
        ResidueRing k(F, P.ideal);
        std::vector<std::array<Elt, 4>> rows;
        for (const auto& m : images_) rows.push_back({ring_.reduce_to(m[0], k), ring_.reduce_to(m[1], k),
                                                      ring_.reduce_to(m[2], k), ring_.reduce_to(m[3], k)});
        verify(rank_over_field(k, rows) == 4, "residue splitting: image is not all of M_2 at " + P.label());
    }
}

Matrix2 ResidueSplitting::image(const OElement& x) const {
    Matrix2 m{0, 0, 0, 0};
    const Integer& a = ring_.modulus().a;
    for (std::size_t k = 0; k < images_.size(); ++k) {
        if (x.c[k] == 0) continue;
        Elt c = ring_.from_int(mod_floor(x.c[k], a).get_si());
        for (int ij = 0; ij < 4; ++ij) m[ij] = ring_.add(m[ij], ring_.mul(c, images_[k][ij]));
    }
    if (x.den != 1) {
        require(gcd(x.den, ring_.modulus().norm()) == 1, "residue splitting: denominator meets the level");
        Elt inv = ring_.inverse(ring_.from_int(mod_floor(x.den, a).get_si()));
        for (auto& v : m) v = ring_.mul(v, inv);
    }
    return m;
}

Matrix2 ResidueSplitting::image(const std::vector<long>& coords) const {
    Matrix2 m{0, 0, 0, 0};
    std::int64_t a = ring_.modulus().a.get_si();
    for (std::size_t k = 0; k < images_.size(); ++k) {
        if (coords[k] == 0) continue;
        Elt c = ring_.from_int(mod_floor(coords[k], a));
        for (int ij = 0; ij < 4; ++ij) m[ij] = ring_.add(m[ij], ring_.mul(c, images_[k][ij]));
    }
    return m;
}

}  // namespace hmf::quat
