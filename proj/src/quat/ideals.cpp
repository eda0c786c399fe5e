#include "hmf/quat/ideals.hpp"

#include <deque>

namespace hmf::quat {

using arith::GramLattice;
using p1::Elt;

namespace {

IntVector row_combination(const Lattice& L, const std::vector<long>& v) {
    IntVector x(L.rows.empty() ? 0 : L.rows[0].size(), 0);
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0)
            for (std::size_t c = 0; c < x.size(); ++c) x[c] += L.rows[k][c] * v[k];
    return x;
}

// Tr_{F/Q} as an integer.
Integer field_trace(const FieldElement& x, int degree) {
    Rational t = degree == 1 ? x.a() : x.trace();
    verify(t.get_den() == 1, "trace of an integral element is not an integer");
    return t.get_num();
}

}  // namespace

RightIdeal make_right_ideal(const QuaternionOrder& O, const Lattice& L) {
    require(L.den == 1, "right ideal must be integral");
    Lattice whole = O.as_lattice();
    require(lattice_contains(whole, L), "right ideal must lie in the order");
    require(lattice_product(O, L, whole) == L, "lattice is not a right ideal");
    RightIdeal I;
    I.lattice = L;
    I.norm = lattice_norm_ideal(O, L);
    Integer nm = I.norm.norm();
    verify(lattice_index(L) == Rational(nm * nm), "right ideal index does not match its norm");
    I.norm_generator = arith::totally_positive_generator(O.field(), I.norm);
    I.shortcut_b = O.scale(I.norm_generator, {O.one(), 1});
    I.shortcut_left = lattice_conj(O, L);
    return I;
}

Lattice left_order(const QuaternionOrder& O, const RightIdeal& I) {
    Lattice prod = lattice_product(O, I.lattice, I.shortcut_left);
    return lattice_scale(O, prod, I.norm_generator.inverse());
}

std::optional<OElement> isomorphism(const QuaternionOrder& O, const RightIdeal& I, const RightIdeal& J) {
    const BaseField& F = O.field();
    Lattice colon = lattice_product(O, J.lattice, I.shortcut_left);
    FieldElement target = J.norm_generator * I.norm_generator;
    GramLattice G(lattice_trace_gram(O, colon));
    long bound = to_i64(2 * field_trace(target, F.degree()));
    std::optional<OElement> found;
    for (const auto& v : arith::short_vectors(G, bound)) {
        OElement beta{row_combination(colon, v), colon.den};
        if (O.nrd(beta) == target) {
            found = beta;
            break;
        }
    }
    return found;
}

namespace {

// The sublattices {y in O : v phi(y) = 0 mod q}, one per point v of P^1(Z_F/q).
std::vector<Lattice> order_neighbors(const QuaternionOrder& O, const ResidueSplitting& split) {
    const auto& R = split.ring();
    const Ideal& q = split.modulus();
    p1::P1Index line(O.field(), q);
    std::int64_t p = q.a.get_si();  // Z_F/q is an elementary abelian p-group
    std::size_t r = O.rank();
    std::vector<Lattice> out;
    for (std::size_t pos = 0; pos < line.size(); ++pos) {
        const auto& v = line.point(pos);
        // Linear map Z^r -> (Z/p)^m, x -> v * phi(x), in group coordinates.
        std::vector<std::vector<std::int64_t>> A;
        for (int col = 0; col < 2; ++col)
            for (int part = 0; part < (q.d != 1 ? 2 : 1); ++part) {
                std::vector<std::int64_t> eq(r);
                for (std::size_t k = 0; k < r; ++k) {
                    const Matrix2& m = split.basis_images()[k];
                    Elt w = R.add(R.mul(v.a, m[col]), R.mul(v.b, m[2 + col]));
                    eq[k] = mod_floor(R.coords(w)[part], p);
                }
                A.push_back(eq);
            }
        std::vector<std::size_t> pivot_col;
        std::size_t row = 0;
        for (std::size_t c = 0; c < r && row < A.size(); ++c) {
            std::size_t piv = row;
            while (piv < A.size() && A[piv][c] == 0) ++piv;
            if (piv == A.size()) continue;
            std::swap(A[piv], A[row]);
            std::int64_t inv = inverse_mod(A[row][c], p);
            for (auto& x : A[row]) x = x * inv % p;
            for (std::size_t i = 0; i < A.size(); ++i) {
                if (i == row || A[i][c] == 0) continue;
                std::int64_t f = A[i][c];
                for (std::size_t k = 0; k < r; ++k) A[i][k] = mod_floor(A[i][k] - f * A[row][k], p);
            }
            pivot_col.push_back(c);
            ++row;
        }
        std::vector<OElement> gens;
        for (std::size_t k = 0; k < r; ++k) {
            IntVector e(r, 0);
            e[k] = p;
            gens.push_back({e, 1});
        }
        std::vector<char> is_pivot(r, 0);
        for (auto c : pivot_col) is_pivot[c] = 1;
        for (std::size_t f = 0; f < r; ++f) {
            if (is_pivot[f]) continue;
            IntVector x(r, 0);
            x[f] = 1;
            for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = mod_floor(-A[i][f], p);
            gens.push_back({x, 1});
        }
        out.push_back(lattice_from_generators(gens, r));
    }
    return out;
}

// An element g of I generating I locally at q: v_q(nrd g) = v_q(nrd I).
OElement local_generator(const QuaternionOrder& O, const RightIdeal& I, const PrimeIdeal& q) {
    const BaseField& F = O.field();
    int target = arith::valuation(F, I.norm, q);
    GramLattice G(lattice_trace_gram(O, I.lattice));
    std::optional<OElement> found;
    for (long bound = 2 * to_i64(field_trace(I.norm_generator, F.degree())); !found; bound *= 2) {
        G.enumerate(bound, [&](const std::vector<long>& v, long) {
            if (found) return;
            OElement g{row_combination(I.lattice, v), 1};
            FieldElement n = O.nrd(g);
            if (arith::valuation(F, arith::principal_ideal(F, n), q) == target) found = g;
        });
        verify(bound < (1L << 40), "no local generator found");
    }
    return *found;
}

}  // namespace

std::vector<RightIdeal> neighbors(const QuaternionOrder& O, const RightIdeal& I, const ResidueSplitting& split) {
    const BaseField& F = O.field();
    const Ideal& q = split.modulus();
    auto qs = arith::factor_ideal(F, q);
    require(qs.size() == 1 && qs[0].second == 1, "neighbors: q must be prime");
    OElement g = local_generator(O, I, qs[0].first);
    std::vector<OElement> qI;
    for (const auto& t : arith::basis(F, q))
        for (std::size_t k = 0; k < I.lattice.rows.size(); ++k) qI.push_back(O.scale(t, I.lattice.element(k)));
    std::vector<RightIdeal> out;
    for (const auto& L : order_neighbors(O, split)) {
        std::vector<OElement> gens = qI;
        for (std::size_t k = 0; k < L.rows.size(); ++k) gens.push_back(O.mul(g, L.element(k)));
        RightIdeal J = make_right_ideal(O, lattice_from_generators(gens, O.rank()));
        verify(J.norm == arith::multiply(F, I.norm, q), "neighbor has the wrong norm");
        verify(lattice_contains(I.lattice, J.lattice), "neighbor is not contained in the ideal");
        out.push_back(std::move(J));
    }
    return out;
}

Rational IdealClassSet::mass() const {
    Rational m = 0;
    for (const auto& c : classes) m += Rational(1, c.weight());
    return m;
}

PrimeIdeal choose_neighbor_prime(const BaseField& F, const Ideal& disc, const Ideal& avoid) {
    for (long bound = 10;; bound *= 2) {
        for (const auto& P : arith::primes_up_to(F, bound)) {
            if (!arith::add(F, P.ideal, disc).is_unit()) continue;
            if (!arith::add(F, P.ideal, avoid).is_unit()) continue;
            return P;
        }
        require(bound < 1000000, "no admissible neighbor prime");
    }
}

namespace {

IdealClass make_class(const QuaternionOrder& O, RightIdeal I, long theta_count) {
    IdealClass c;
    c.ideal = std::move(I);
    c.left_order = left_order(O, c.ideal);
    c.units = unit_group(O, c.left_order);
    c.theta = theta_fingerprint(O, c.left_order, theta_count);
    return c;
}

// Index of the class isomorphic to J, if any.
std::optional<std::size_t> find_class(const QuaternionOrder& O, const std::vector<IdealClass>& classes,
                                      const RightIdeal& J, const std::vector<long>& theta) {
    for (std::size_t k = 0; k < classes.size(); ++k) {
        if (classes[k].theta != theta) continue;
        if (isomorphism(O, classes[k].ideal, J)) return k;
    }
    return std::nullopt;
}

}  // namespace

IdealClassSet right_ideal_classes(const LoadedAlgebra& B, const Ideal& avoid, long theta_count) {
    const QuaternionOrder& O = B.order;
    require(B.algebra.totally_definite(), "right_ideal_classes: algebra is not totally definite");
    IdealClassSet set;
    set.q = choose_neighbor_prime(O.field(), B.discriminant, avoid);
    ResidueSplitting split(O, set.q.ideal, B.discriminant);
    set.classes.push_back(make_class(O, make_right_ideal(O, O.as_lattice()), theta_count));
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t k = queue.front();
        queue.pop_front();
        for (auto& J : neighbors(O, set.classes[k].ideal, split)) {
            Lattice left = left_order(O, J);
            auto theta = theta_fingerprint(O, left, theta_count);
            if (find_class(O, set.classes, J, theta)) continue;
            set.classes.push_back(make_class(O, std::move(J), theta_count));
            queue.push_back(set.classes.size() - 1);
        }
    }
    return set;
}

IdealClassSet rechoose_coprime(const LoadedAlgebra& B, const IdealClassSet& classes, const Ideal& N) {
    const BaseField& F = B.order.field();
    bool coprime = true;
    for (const auto& c : classes.classes)
        if (!arith::add(F, c.ideal.norm, N).is_unit()) coprime = false;
    if (coprime) return classes;
    long theta_count = static_cast<long>(classes.classes[0].theta.size());
    IdealClassSet fresh = right_ideal_classes(B, N, theta_count);
    verify(fresh.size() == classes.size(), "class number changed with the neighbor prime");
    IdealClassSet out;
    out.q = fresh.q;
    out.classes.resize(classes.size());
    std::vector<char> used(classes.size(), 0);
    for (auto& c : fresh.classes) {
        auto k = find_class(B.order, classes.classes, c.ideal, c.theta);
        verify(k.has_value() && !used[*k], "re-chosen representative matches no unused class");
        used[*k] = 1;
        out.classes[*k] = std::move(c);
    }
    return out;
}

}  // namespace hmf::quat
