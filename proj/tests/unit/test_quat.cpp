#include "doctest.h"

#include "hmf/quat/ideals.hpp"
#include "hmf/quat/splitting.hpp"

#include <random>

using namespace hmf;
using namespace hmf::arith;
using namespace hmf::quat;

namespace {

std::string data(const std::string& rel) { return std::string(HMF_DATA_DIR) + "/" + rel; }

LoadedAlgebra load(const std::string& file) {
    AlgebraConfig cfg = read_algebra_config(data("algebras/" + file));
    return load_algebra_config(make_field(cfg.field_d), cfg);
}

// Brute-force solubility of a x^2 + b y^2 = z^2 modulo p^k over Z, primitive
// solutions only. For odd p not dividing a b, any solution mod p lifts.
bool soluble_mod(long a, long b, long p, int k) {
    long m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    std::vector<char> square(m, 0), unit_square(m, 0);
    for (long z = 0; z < m; ++z) {
        square[z * z % m] = 1;
        if (z % p != 0) unit_square[z * z % m] = 1;
    }
    for (long x = 0; x < m; ++x)
        for (long y = 0; y < m; ++y) {
            long v = ((a * x % m * x + b * y % m * y) % m + m) % m;
            bool primitive_xy = x % p != 0 || y % p != 0;
            if (primitive_xy ? square[v] : unit_square[v]) return true;
        }
    return false;
}

}  // namespace

TEST_CASE("hilbert symbol examples over Q") {
    BaseField Q = make_field(0);
    FieldElement m1 = Q.from_int(-1);
    CHECK(hilbert_symbol_real(m1, m1, 0) == -1);
    CHECK(hilbert_symbol(Q, m1, m1, primes_above(Q, 2)[0]) == -1);
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L})
        CHECK(hilbert_symbol(Q, m1, m1, primes_above(Q, p)[0]) == 1);
    // Mod 8 analysis by brute force for (-1,-1) at 2: no primitive solution.
    CHECK_FALSE(soluble_mod(-1, -1, 2, 3));
    CHECK(soluble_mod(-1, -1, 3, 2));
}

TEST_CASE("tame hilbert symbol agrees with brute-force solubility") {
    BaseField Q = make_field(0);
    for (long p : {3L, 5L, 7L, 11L, 13L})
        for (long a : {-1L, 2L, -3L, 5L, -11L, 3 * p, -p})
            for (long b : {-1L, -2L, 7L, -13L, p, -p}) {
                if (a % (p * p) == 0 || b % (p * p) == 0) continue;
                int tame = hilbert_symbol(Q, Q.from_int(a), Q.from_int(b), primes_above(Q, p)[0]);
                bool sol = soluble_mod(a, b, p, 3);
                CHECK(tame == (sol ? 1 : -1));
            }
}

TEST_CASE("hilbert symbol satisfies reciprocity over quadratic fields") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<long> c(-12, 12);
    for (long d : {5L, 8L, 13L, 17L}) {
        BaseField F = make_field(d);
        for (int trial = 0; trial < 8; ++trial) {
            FieldElement a = F.element(c(rng), c(rng)), b = F.element(c(rng), c(rng));
            if (a.is_zero() || b.is_zero()) continue;
            int prod = hilbert_symbol_real(a, b, 0) * hilbert_symbol_real(a, b, 1);
            std::vector<Integer> ps{2};
            for (const auto& x : {a, b})
                for (const auto& [p, e] : factor_integer(Rational(abs(x.norm())).get_num())) ps.push_back(p);
            std::sort(ps.begin(), ps.end());
            ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
            for (const auto& p : ps)
                for (const auto& P : primes_above(F, p)) {
                    int h = hilbert_symbol(F, a, b, P);
                    Integer q = P.norm();
                    if (P.p == 2 || q * q * q <= 3000) CHECK(h == hilbert_symbol_by_search(F, a, b, P));
                    prod *= h;
                }
            CHECK(prod == 1);
        }
    }
}

TEST_CASE("quaternion algebra norm is multiplicative") {
    std::mt19937 rng(1);
    std::uniform_int_distribution<long> c(-5, 5);
    for (long d : {0L, 5L, 17L}) {
        BaseField F = make_field(d);
        QuaternionAlgebra A(F, F.from_int(-1), F.from_int(-3));
        auto rnd = [&] {
            Quaternion x = A.zero();
            for (auto& comp : x) comp = d == 0 ? F.from_int(c(rng)) : F.element(c(rng), c(rng));
            return x;
        };
        for (int t = 0; t < 30; ++t) {
            Quaternion x = rnd(), y = rnd(), z = rnd();
            CHECK(A.nrd(A.mul(A.mul(x, y), z)) == A.nrd(x) * A.nrd(y) * A.nrd(z));
            CHECK(A.trd(x) == A.add(x, A.conj(x))[0]);
            CHECK(A.mul(x, A.conj(x)) == A.scalar(A.nrd(x)));
        }
    }
}

TEST_CASE("load_algebra_config accepts the shipped maximal orders") {
    auto ico = load("q5_icosian.alg");
    CHECK(ico.discriminant.is_unit());
    CHECK(ico.ramified.empty());
    auto d11 = load("q_d11.alg");
    CHECK(d11.discriminant.norm() == 11);
    for (const char* f : {"q_d2.alg", "q_d3.alg", "q_d5.alg", "q_d7.alg", "q_d13.alg", "q8_max.alg",
                          "q13_max.alg", "q17_max.alg"})
        CHECK_NOTHROW(load(f));
}

TEST_CASE("load_algebra_config rejects bad inputs by kind") {
    try {
        load("q_lipschitz.alg");
        FAIL("Lipschitz order accepted");
    } catch (const OrderError& e) {
        CHECK(e.kind() == OrderError::Kind::NotMaximal);
        CHECK(std::string(e.what()).find("norm 4") != std::string::npos);
    }
    BaseField Q = make_field(0);
    auto cfg = read_algebra_config(data("algebras/q_d11.alg"));
    auto wrong_ram = cfg;
    wrong_ram.ramified = {"7"};
    try {
        load_algebra_config(Q, wrong_ram);
        FAIL("wrong ramification accepted");
    } catch (const OrderError& e) {
        CHECK(e.kind() == OrderError::Kind::WrongRamification);
    }
    auto nonintegral = cfg;
    nonintegral.basis[2] = {0, Rational(1, 3), 0, 0};
    try {
        load_algebra_config(Q, nonintegral);
        FAIL("non-integral basis accepted");
    } catch (const OrderError& e) {
        CHECK(e.kind() == OrderError::Kind::NotIntegral);
    }
    CHECK_THROWS_AS(parse_algebra_config("field = 0\na = -1\nb = -1\nbasis\n1 x 0 0\n"), ParseError);
}

TEST_CASE("unit groups and theta fingerprints") {
    auto hur = load("q_d2.alg");
    Lattice O = hur.order.as_lattice();
    CHECK(unit_group(hur.order, O).size() == 12);
    auto theta = theta_fingerprint(hur.order, O, 4);
    CHECK(theta[0] == 1);
    CHECK(theta[1] == 24);
    // Hurwitz order theta series: 24 * sum of odd divisors.
    CHECK(theta[2] == 24);
    CHECK(theta[3] == 96);

    BaseField Q = make_field(0);
    QuaternionAlgebra A(Q, Q.from_int(-1), Q.from_int(-1));
    std::vector<std::vector<Rational>> lip{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    QuaternionOrder L(A, lip);
    CHECK(unit_group(L, L.as_lattice()).size() == 4);
    CHECK(theta_fingerprint(L, L.as_lattice(), 2)[1] == 8);

    auto ico = load("q5_icosian.alg");
    CHECK(unit_group(ico.order, ico.order.as_lattice()).size() == 60);
}

namespace {

OElement random_element(const QuaternionOrder& O, std::mt19937& rng, int range) {
    std::uniform_int_distribution<long> c(-range, range);
    OElement x{IntVector(O.rank()), 1};
    for (auto& v : x.c) v = c(rng);
    return x;
}

}  // namespace

TEST_CASE("residue splitting is a verified ring map") {
    std::mt19937 rng(9);
    struct Case {
        const char* file;
        long d;
        std::vector<long> norms;
    };
    for (const auto& cs : std::vector<Case>{{"q_d2.alg", 0, {3, 9, 15, 25, 27}},
                                            {"q_d11.alg", 0, {2, 6, 12, 35}},
                                            {"q5_icosian.alg", 5, {4, 5, 11, 20, 31}}}) {
        auto B = load(cs.file);
        const BaseField& F = B.order.field();
        for (long nm : cs.norms)
            for (const auto& N : ideals_of_norm(F, nm)) {
                ResidueSplitting phi(B.order, N, B.discriminant);
                const auto& R = phi.ring();
                CHECK(phi.image(OElement{B.order.one(), 1}) == Matrix2{R.one(), 0, 0, R.one()});
                for (int t = 0; t < 100; ++t) {
                    OElement x = random_element(B.order, rng, 20), y = random_element(B.order, rng, 20);
                    CHECK(p1::det(R, phi.image(x)) == R.from_element(B.order.nrd(x)));
                    CHECK(phi.image(B.order.mul(x, y)) == p1::multiply(R, phi.image(x), phi.image(y)));
                }
            }
    }
    auto B11 = load("q_d11.alg");
    CHECK_THROWS_AS(ResidueSplitting(B11.order, Ideal{22, 0, 1}, B11.discriminant), PreconditionError);
}

TEST_CASE("Hurwitz splitting mod 3 spans all of M_2(F_3)") {
    auto hur = load("q_d2.alg");
    ResidueSplitting phi(hur.order, Ideal{3, 0, 1}, hur.discriminant);
    // Independent rank computation over F_3 of the four basis images.
    std::vector<std::array<long, 4>> rows;
    for (const auto& m : phi.basis_images()) rows.push_back({m[0], m[1], m[2], m[3]});
    int rank = 0;
    for (int c = 0; c < 4; ++c) {
        int p = rank;
        while (p < 4 && rows[p][c] % 3 == 0) ++p;
        if (p == 4) continue;
        std::swap(rows[p], rows[rank]);
        for (int r = 0; r < 4; ++r) {
            if (r == rank) continue;
            long f = rows[r][c] * rows[rank][c] % 3;  // inverse of x mod 3 is x
            for (int j = 0; j < 4; ++j) rows[r][j] = ((rows[r][j] - f * rows[rank][j]) % 3 + 3) % 3;
        }
        ++rank;
    }
    CHECK(rank == 4);
}

TEST_CASE("right ideal classes") {
    auto hur = load("q_d2.alg");
    auto h2 = right_ideal_classes(hur);
    CHECK(h2.size() == 1);
    CHECK(h2.classes[0].weight() == 12);

    auto d11 = load("q_d11.alg");
    auto h11 = right_ideal_classes(d11);
    REQUIRE(h11.size() == 2);
    std::vector<std::size_t> w{h11.classes[0].weight(), h11.classes[1].weight()};
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<std::size_t>{2, 3});
    CHECK(h11.mass() == Rational(5, 6));  // (D - 1)/12

    auto ico = load("q5_icosian.alg");
    auto h5 = right_ideal_classes(ico);
    CHECK(h5.size() == 1);
    CHECK(h5.classes[0].weight() == 60);
}

TEST_CASE("class set invariants under a change of neighbor prime") {
    // Eichler mass formula over Q: sum 1/w = (D - 1)/12 (with w counted mod +-1).
    for (long D : {2L, 3L, 5L, 7L, 11L, 13L}) {
        auto B = load("q_d" + std::to_string(D) + ".alg");
        auto a = right_ideal_classes(B);
        Rational expected(D - 1, 12);
        expected.canonicalize();
        CHECK(a.mass() == expected);
        auto b = right_ideal_classes(B, a.q.ideal);
        CHECK(b.q.p != a.q.p);
        CHECK(b.size() == a.size());
        CHECK(b.mass() == a.mass());
        std::vector<std::vector<long>> ta, tb;
        for (const auto& c : a.classes) ta.push_back(c.theta);
        for (const auto& c : b.classes) tb.push_back(c.theta);
        std::sort(ta.begin(), ta.end());
        std::sort(tb.begin(), tb.end());
        CHECK(ta == tb);
        // Pairwise isomorphism test is consistent.
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) {
                bool iso = isomorphism(B.order, a.classes[i].ideal, a.classes[j].ideal).has_value();
                CHECK(iso == (i == j));
            }
        auto r = rechoose_coprime(B, a, a.q.ideal);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(isomorphism(B.order, a.classes[i].ideal, r.classes[i].ideal).has_value());
            CHECK(arith::add(B.order.field(), r.classes[i].ideal.norm, a.q.ideal).is_unit());
        }
    }
}

TEST_CASE("theta fingerprints of isomorphic ideals agree") {
    std::mt19937 rng(23);
    auto B = load("q_d11.alg");
    auto cls = right_ideal_classes(B);
    for (const auto& c : cls.classes)
        for (int t = 0; t < 5; ++t) {
            OElement x = random_element(B.order, rng, 3);
            if (B.order.nrd(x).is_zero()) continue;
            RightIdeal J = make_right_ideal(B.order, lattice_left_mul(B.order, x, c.ideal.lattice));
            CHECK(theta_fingerprint(B.order, left_order(B.order, J), kDefaultThetaCount) == c.theta);
            CHECK(isomorphism(B.order, c.ideal, J).has_value());
        }
}
