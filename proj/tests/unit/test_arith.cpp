#include "doctest.h"

#include "hmf/arith/field.hpp"
#include "hmf/arith/ideal.hpp"
#include "hmf/arith/lattice.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace hmf;
using namespace hmf::arith;

TEST_CASE("make_field builds Q and the allowlisted quadratic fields") {
    BaseField Q = make_field(0);
    CHECK(Q.degree() == 1);
    CHECK(Q.label() == "1.1.1.1");

    BaseField F5 = make_field(5);
    CHECK(F5.degree() == 2);
    CHECK(F5.discriminant() == 5);
    CHECK(F5.omega_t() == 1);
    CHECK(F5.omega_s() == 1);
    CHECK(F5.fundamental_unit() == F5.omega());  // (1+sqrt5)/2
    CHECK(F5.fundamental_unit().norm() == -1);

    BaseField F8 = make_field(8);
    CHECK(F8.radicand() == 2);
    CHECK(F8.discriminant() == 8);
    CHECK(F8.fundamental_unit() == F8.element(1, 1));  // 1 + sqrt2
    CHECK(make_field(2).discriminant() == 8);

    CHECK(make_field(13).fundamental_unit() == make_field(13).element(1, 1));
    CHECK(make_field(17).fundamental_unit() == make_field(17).element(3, 2));
}

TEST_CASE("make_field rejects unsupported input") {
    CHECK_THROWS_AS(make_field(9), PreconditionError);
    CHECK_THROWS_AS(make_field(3), PreconditionError);   // disc 12 not on the allowlist
    CHECK_THROWS_AS(make_field(12), PreconditionError);
    CHECK_THROWS_AS(make_field(-5), PreconditionError);
}

TEST_CASE("fundamental unit is minimal among units with small coordinates") {
    // Independent brute force: every unit x > 1 with coordinates <= 10 is a power of eps.
    for (long d : {5L, 8L, 13L, 17L}) {
        BaseField F = make_field(d);
        FieldElement eps = F.fundamental_unit();
        for (long a = -10; a <= 10; ++a)
            for (long b = -10; b <= 10; ++b) {
                FieldElement x = F.element(a, b);
                if (x.norm() != 1 && x.norm() != -1) continue;
                if (x.to_double(0) <= 1.0 + 1e-9) continue;
                FieldElement y = x;
                int steps = 0;
                while (y.to_double(0) > 1.0 + 1e-9 && steps < 50) {
                    y = y / eps;
                    ++steps;
                }
                CHECK(y == F.one());
            }
    }
}

TEST_CASE("field config parsing and re-verification") {
    auto cfg = parse_field_config("# Q(sqrt5)\nd = 5\nallowlisted = true\nunit = 0 1\n");
    CHECK(cfg.d == 5);
    CHECK(field_from_config(cfg).discriminant() == 5);
    auto bad = parse_field_config("d = 5\nallowlisted = true\nunit = 1 1\n");
    CHECK_THROWS_AS(field_from_config(bad), VerificationError);
    auto off = parse_field_config("d = 5\nallowlisted = false\nunit = 0 1\n");
    CHECK_THROWS_AS(field_from_config(off), PreconditionError);
    CHECK_THROWS_AS(parse_field_config("d = 5\ncolour = red\n"), ParseError);
}

TEST_CASE("embedding signs are exact") {
    BaseField F = make_field(5);
    FieldElement w = F.omega();
    CHECK(w.sign(0) == 1);
    CHECK(w.sign(1) == -1);  // (1 - sqrt5)/2 < 0
    FieldElement x = F.element(2, 1);  // (5 + sqrt5)/2
    CHECK(x.is_totally_positive());
    // A large near-cancellation: 1346269 - 832040*w has tiny positive image under sigma_1.
    FieldElement y = F.element(-832040, 1346269);
    CHECK(y.sign(0) == 1);
    CHECK(y.sign(1) == -1);
    FieldElement z = F.element(1346269, -832040);
    CHECK(z.sign(0) == 1);
    CHECK(z.sign(1) == 1);
}

TEST_CASE("factor_ideal examples") {
    BaseField F = make_field(5);
    auto f11 = factor_ideal(F, principal_ideal(F, F.from_int(11)));
    REQUIRE(f11.size() == 2);
    CHECK(f11[0].first.root == 4);
    CHECK(f11[1].first.root == 8);
    CHECK(f11[0].second == 1);
    CHECK(f11[1].second == 1);
    CHECK(f11[0].first.label() == "11.4");

    auto f2 = factor_ideal(F, principal_ideal(F, F.from_int(2)));
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].first.norm() == 4);
    CHECK(f2[0].first.residue_degree == 2);
    CHECK(f2[0].first.label() == "4");

    CHECK(factor_ideal(F, unit_ideal()).empty());

    auto f5 = factor_ideal(F, principal_ideal(F, F.from_int(5)));
    REQUIRE(f5.size() == 1);
    CHECK(f5[0].first.ramified);
    CHECK(f5[0].second == 2);
}

TEST_CASE("prime label table ordering for Q(sqrt5) up to norm 11") {
    BaseField F = make_field(5);
    auto ps = primes_up_to(F, 11);
    std::vector<std::string> labels;
    for (const auto& p : ps) labels.push_back(p.label());
    CHECK(labels == std::vector<std::string>{"4", "5.3", "9", "11.4", "11.8"});
}

TEST_CASE("totally positive generators") {
    BaseField F = make_field(5);
    CHECK(totally_positive_generator(F, principal_ideal(F, F.from_int(2))) == F.from_int(2));
    FieldElement sqrt5 = F.element(-1, 2);
    CHECK(totally_positive_generator(F, principal_ideal(F, sqrt5)) == F.element(2, 1));
    BaseField Q = make_field(0);
    CHECK(totally_positive_generator(Q, Ideal{7, 0, 1}) == Q.from_int(7));

    // Every ideal of small norm gets a totally positive generator of the right norm.
    for (long d : {5L, 8L, 13L, 17L}) {
        BaseField K = make_field(d);
        for (long m = 1; m <= 60; ++m)
            for (const auto& I : ideals_of_norm(K, m)) {
                FieldElement g = totally_positive_generator(K, I);
                CHECK(g.is_totally_positive());
                CHECK(g.norm() == m);
                CHECK(principal_ideal(K, g) == I);
            }
    }
}

TEST_CASE("square classes") {
    BaseField Q = make_field(0);
    CHECK(square_class_equal(Q, Q.from_int(5), Q.from_int(20)));
    CHECK_FALSE(square_class_equal(Q, Q.from_int(5), Q.from_int(-5)));
    CHECK_THROWS_AS(square_class_equal(Q, Q.from_int(0), Q.from_int(1)), PreconditionError);
    BaseField F = make_field(5);
    CHECK(square_class_equal(F, F.omega() * F.omega(), F.one()));
}

TEST_CASE("square class invariants under random multipliers") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> coord(-9, 9);
    for (long d : {5L, 8L, 13L, 17L}) {
        BaseField F = make_field(d);
        FieldElement eps = F.fundamental_unit();
        // eps is not a square: exhaustive search over small roots.
        bool eps_square = false;
        for (long a = -30; a <= 30; ++a)
            for (long b = -30; b <= 30; ++b)
                if (F.element(a, b) * F.element(a, b) == eps) eps_square = true;
        CHECK_FALSE(eps_square);
        for (int trial = 0; trial < 20; ++trial) {
            FieldElement x = F.element(coord(rng), coord(rng));
            if (x.is_zero()) continue;
            FieldElement t = F.element(coord(rng), coord(rng));
            if (t.is_zero()) t = F.one();
            CHECK(square_class_equal(F, x, x * t * t));
            CHECK_FALSE(square_class_equal(F, x, eps * x));
        }
    }
}

TEST_CASE("ideal arithmetic properties on random ideals") {
    std::mt19937 rng(11);
    for (long d : {5L, 8L, 13L, 17L}) {
        BaseField F = make_field(d);
        std::vector<Ideal> pool;
        for (long m = 1; m <= 300; ++m)
            for (const auto& I : ideals_of_norm(F, m)) pool.push_back(I);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int trial = 0; trial < 100; ++trial) {
            const Ideal& I = pool[pick(rng)];
            const Ideal& J = pool[pick(rng)];
            Ideal IJ = multiply(F, I, J);
            CHECK(IJ.norm() == I.norm() * J.norm());
            CHECK(ideal_from_generators(F, basis(F, IJ)) == IJ);
            CHECK(contains(F, I, IJ));
            CHECK(divide_exact(F, IJ, J) == I);
        }
        // factor and re-multiply
        for (int trial = 0; trial < 100; ++trial) {
            std::uniform_int_distribution<long> nm(1, 10000);
            auto ideals = ideals_of_norm(F, nm(rng));
            if (ideals.empty()) continue;
            const Ideal& N = ideals[0];
            Ideal prod = unit_ideal();
            for (const auto& [P, e] : factor_ideal(F, N)) prod = multiply(F, prod, power(F, P.ideal, e));
            CHECK(prod == N);
        }
    }
}

TEST_CASE("ideal counts agree with the product over prime factorizations") {
    // Dedekind zeta coefficients from splitting types, independent of HNF enumeration.
    for (long d : {5L, 8L, 13L}) {
        BaseField F = make_field(d);
        for (long m = 1; m <= 200; ++m) {
            long expected = 1;
            for (const auto& [p, e] : factor_integer(Integer(m))) {
                auto ps = primes_above(F, p);
                long count = 0;
                if (ps.size() == 2) count = e + 1;
                else if (ps[0].ramified) count = 1;
                else count = (e % 2 == 0) ? 1 : 0;
                expected *= count;
            }
            CHECK(static_cast<long>(ideals_of_norm(F, m).size()) == expected);
        }
    }
}

TEST_CASE("hnf_rows canonical form") {
    IntMatrix g{{4, 6}, {2, 2}, {0, 2}};
    IntMatrix h = hnf_rows(g, 2);
    REQUIRE(h.size() == 2);
    CHECK(h[0][1] == 0);
    CHECK(h[0][0] > 0);
    CHECK(h[1][1] > 0);
    CHECK(h[1][0] >= 0);
    CHECK(h[1][0] < h[0][0]);
    CHECK(hnf_index(h) == 4);  // det of span{(4,6),(2,2),(0,2)}
    CHECK(hnf_rows(h, 2) == h);
}

namespace {

std::vector<SmallVector> box_oracle(const IntMatrix& g, long target, long box) {
    std::size_t n = g.size();
    std::vector<SmallVector> out;
    SmallVector v(n, -box);
    while (true) {
        long s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += g[i][j].get_si() * v[i] * v[j];
        bool nonzero = std::any_of(v.begin(), v.end(), [](long c) { return c != 0; });
        if (s == target && nonzero) {
            SmallVector w = v;
            for (long c : w) {
                if (c == 0) continue;
                if (c < 0)
                    for (auto& t : w) t = -t;
                break;
            }
            out.push_back(w);
        }
        std::size_t k = 0;
        while (k < n && v[k] == box) v[k++] = -box;
        if (k == n) break;
        ++v[k];
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

TEST_CASE("short_vectors examples") {
    GramLattice id2(IntMatrix{{1, 0}, {0, 1}});
    CHECK(short_vectors(id2, 1) == std::vector<SmallVector>{{0, 1}, {1, 0}});
    CHECK(short_vectors(id2, 2) == std::vector<SmallVector>{{1, -1}, {1, 1}});
    GramLattice a2(IntMatrix{{2, 1}, {1, 2}});
    CHECK(short_vectors(a2, 2).size() == 3);
    CHECK(short_vectors(a2, 2) == box_oracle(IntMatrix{{2, 1}, {1, 2}}, 2, 2));
    CHECK_THROWS_AS(GramLattice(IntMatrix{{1, 2}, {2, 1}}), PreconditionError);
}

TEST_CASE("short_vectors agrees with box enumeration on random forms") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> entry(-3, 3);
    int tested = 0;
    while (tested < 40) {
        std::size_t n = 2 + tested % 3;  // ranks 2..4
        // G = A^T A + I has entries <= 10 for small A.
        IntMatrix A(n, IntVector(n));
        for (auto& r : A)
            for (auto& x : r) x = entry(rng);
        IntMatrix G(n, IntVector(n, 0));
        bool small = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) G[i][j] += A[k][i] * A[k][j];
                if (i == j) G[i][j] += 1;
                if (abs(G[i][j]) > 10) small = false;
            }
        if (!small) continue;
        ++tested;
        GramLattice L(G);
        std::uniform_int_distribution<long> tgt(1, 50);
        long target = tgt(rng);
        // Smallest eigenvalue is >= 1, so |v_i| <= sqrt(50) < 8.
        CHECK(short_vectors(L, target) == box_oracle(G, target, 7));
    }
}

TEST_CASE("representation numbers of Z^4") {
    GramLattice z4(IntMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    auto r = representation_numbers(z4, 6);
    // Jacobi: r_4(n) = 8 * sum of divisors not divisible by 4.
    CHECK(r == std::vector<long>{1, 8, 24, 32, 24, 48});
}
