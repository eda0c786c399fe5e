#include "doctest.h"

#include "hmf/p1.hpp"

#include <map>
#include <random>
#include <set>

using namespace hmf;
using namespace hmf::arith;
using namespace hmf::p1;

namespace {

// Brute-force P^1: classes of unimodular pairs under unit scaling.
std::size_t brute_force_size(const BaseField& F, const Ideal& N) {
    ResidueRing R(F, N);
    std::vector<Elt> units;
    for (Elt u = 0; u < R.size(); ++u)
        if (R.is_unit(u)) units.push_back(u);
    std::set<std::pair<Elt, Elt>> seen;
    std::size_t classes = 0;
    for (Elt a = 0; a < R.size(); ++a)
        for (Elt b = 0; b < R.size(); ++b) {
            // unimodular: no prime contains both
            bool ok = true;
            for (const auto& [P, e] : R.factorization()) {
                (void)e;
                ResidueRing Rp(F, P.ideal);
                if (R.reduce_to(a, Rp) == 0 && R.reduce_to(b, Rp) == 0) ok = false;
            }
            if (!ok || seen.count({a, b})) continue;
            ++classes;
            for (Elt u : units) seen.insert({R.mul(u, a), R.mul(u, b)});
        }
    return classes;
}

std::size_t formula_size(const BaseField& F, const Ideal& N) {
    Rational s(N.norm());
    for (const auto& [P, e] : factor_ideal(F, N)) {
        (void)e;
        s *= Rational(P.norm() + 1, P.norm());
    }
    return s.get_num().get_ui();
}

}  // namespace

TEST_CASE("build_p1 examples") {
    BaseField Q = make_field(0);
    P1Index p2(Q, Ideal{2, 0, 1});
    CHECK(p2.size() == 3);
    P1Index p6(Q, Ideal{6, 0, 1});
    CHECK(p6.size() == 12);
    CHECK(brute_force_size(Q, Ideal{6, 0, 1}) == 12);
    BaseField F = make_field(5);
    P1Index f2(F, principal_ideal(F, F.from_int(2)));
    CHECK(f2.size() == 5);
    CHECK(P1Index(Q, Ideal{1, 0, 1}).size() == 1);
}

TEST_CASE("P1 size formula against brute force") {
    BaseField Q = make_field(0);
    for (long m = 1; m <= 200; ++m) {
        Ideal N{m, 0, 1};
        P1Index idx(Q, N);
        CHECK(idx.size() == formula_size(Q, N));
        if (m <= 60) CHECK(idx.size() == brute_force_size(Q, N));
    }
    BaseField F = make_field(5);
    for (long m = 1; m <= 200; ++m)
        for (const auto& N : ideals_of_norm(F, m)) {
            P1Index idx(F, N);
            CHECK(idx.size() == formula_size(F, N));
            if (m <= 30) CHECK(idx.size() == brute_force_size(F, N));
        }
}

TEST_CASE("normalize examples") {
    BaseField Q = make_field(0);
    P1Index p2(Q, Ideal{2, 0, 1});
    std::size_t pos11 = p2.normalize(1, 1);
    CHECK(p2.point(pos11).a == 1);
    CHECK(p2.point(pos11).b == 1);

    P1Index p6(Q, Ideal{6, 0, 1});
    CHECK(p6.normalize(5, 1) == p6.normalize(25 % 6, 5));
    // (2,3) is unimodular mod 6; its class under brute force equivalence.
    std::size_t pos = p6.normalize(2, 3);
    const ResidueRing& R = p6.ring();
    std::set<std::size_t> hits;
    for (Elt u = 0; u < 6; ++u)
        if (R.is_unit(u)) hits.insert(p6.normalize(R.mul(u, 2), R.mul(u, 3)));
    CHECK(hits == std::set<std::size_t>{pos});
    CHECK_THROWS_AS(p6.normalize(2, 4), PreconditionError);
}

TEST_CASE("divisor blocks") {
    BaseField Q = make_field(0);
    P1Index p6(Q, Ideal{6, 0, 1});
    // Blocks ordered by divisor: (1), (2), (3), (6).
    std::vector<Integer> divs;
    for (const auto& D : p6.divisor_blocks()) divs.push_back(D.norm());
    CHECK(divs == std::vector<Integer>{1, 2, 3, 6});
    for (std::size_t pos = 0; pos < p6.size(); ++pos) {
        Integer a = p6.point(pos).a;
        CHECK(gcd(a, Integer(6)) == p6.divisor(pos).a);
    }
}

TEST_CASE("gl2_action examples") {
    BaseField Q = make_field(0);
    P1Index p2(Q, Ideal{2, 0, 1});
    auto id = p2.gl2_action({1, 0, 0, 1});
    for (std::size_t i = 0; i < id.size(); ++i) CHECK(id[i] == i);
    auto sw = p2.gl2_action({0, 1, 1, 0});
    std::size_t p01 = p2.normalize(0, 1), p10 = p2.normalize(1, 0), p11 = p2.normalize(1, 1);
    CHECK(sw[p01] == p10);
    CHECK(sw[p10] == p01);
    CHECK(sw[p11] == p11);

    P1Index p3(Q, Ideal{3, 0, 1});
    auto shift = p3.gl2_action({1, 1, 0, 1});
    std::size_t q01 = p3.normalize(0, 1);
    CHECK(shift[q01] == q01);
    std::size_t x = p3.normalize(1, 0);
    std::set<std::size_t> orbit{x, shift[x], shift[shift[x]]};
    CHECK(orbit.size() == 3);
    CHECK(shift[shift[shift[x]]] == x);
    CHECK_THROWS_AS(p3.gl2_action({1, 0, 0, 0}), PreconditionError);
}

TEST_CASE("gl2_action is a homomorphism and normalize is projective") {
    std::mt19937 rng(5);
    BaseField F = make_field(5);
    BaseField Q = make_field(0);
    std::vector<std::pair<BaseField, Ideal>> cases{
        {Q, Ideal{12, 0, 1}}, {Q, Ideal{35, 0, 1}}, {F, ideals_of_norm(F, 20)[0]}, {F, ideals_of_norm(F, 44)[1]}};
    for (const auto& [K, N] : cases) {
        P1Index idx(K, N);
        const ResidueRing& R = idx.ring();
        std::uniform_int_distribution<Elt> el(0, R.size() - 1);
        auto random_unimodular = [&]() {
            while (true) {
                Matrix2 m{el(rng), el(rng), el(rng), el(rng)};
                if (R.is_unit(det(R, m))) return m;
            }
        };
        for (int t = 0; t < 50; ++t) {
            Matrix2 m1 = random_unimodular(), m2 = random_unimodular();
            auto p1 = idx.gl2_action(m1), p2 = idx.gl2_action(m2), p12 = idx.gl2_action(multiply(R, m1, m2));
            for (std::size_t pos = 0; pos < idx.size(); ++pos) CHECK(p12[pos] == p2[p1[pos]]);
        }
        for (int t = 0; t < 50; ++t) {
            Elt u = el(rng);
            if (!R.is_unit(u)) continue;
            std::size_t pos = std::uniform_int_distribution<std::size_t>(0, idx.size() - 1)(rng);
            Point p = idx.point(pos);
            CHECK(idx.normalize(p.a, p.b) == pos);
            CHECK(idx.normalize(R.mul(u, p.a), R.mul(u, p.b)) == pos);
        }
    }
}
