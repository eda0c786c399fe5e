#include "doctest.h"

#include "hmf/brandt.hpp"

#include <algorithm>
#include <numeric>

using namespace hmf;
using namespace hmf::arith;
using namespace hmf::brandt;
using namespace hmf::quat;
using linalg::operator*;
using linalg::operator-;

namespace {

std::string data(const std::string& rel) { return std::string(HMF_DATA_DIR) + "/" + rel; }

LoadedAlgebra load(const std::string& file) {
    AlgebraConfig cfg = read_algebra_config(data("algebras/" + file));
    return load_algebra_config(make_field(cfg.field_d), cfg);
}

// Genus of X_0(N) from the index, elliptic points and cusps.
long genus_x0(long N) {
    long mu_num = N, mu_den = 1;
    long nu2 = 1, nu3 = 1;
    long n = N;
    for (long p = 2; p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        mu_num *= p + 1;
        mu_den *= p;
        const long chi4 = p == 2 ? 0 : (p % 4 == 1 ? 1 : -1);
        const long chi3 = p == 3 ? 0 : (p % 3 == 1 ? 1 : -1);
        nu2 = (p == 2 && e >= 2) ? 0 : nu2 * (1 + chi4);
        nu3 = (p == 3 && e >= 2) ? 0 : nu3 * (1 + chi3);
    }
    const long mu = mu_num / mu_den;
    long cusps = 0;
    for (long d = 1; d <= N; ++d) {
        if (N % d) continue;
        long g = std::gcd(d, N / d);
        long phi = g;
        for (long p = 2, m = g; p <= m; ++p)
            if (m % p == 0) {
                phi = phi / p * (p - 1);
                while (m % p == 0) m /= p;
            }
        cusps += phi;
    }
    // g = 1 + mu/12 - nu2/4 - nu3/3 - cusps/2, computed over 12
    const long twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    REQUIRE(twelve_g % 12 == 0);
    return twelve_g / 12;
}

struct Setup {
    LoadedAlgebra B;
    IdealClassSet classes;
};

Setup setup(const std::string& file) {
    Setup s{load(file), {}};
    s.classes = right_ideal_classes(s.B);
    return s;
}

linalg::HeckeSpace full_space(const BrandtModule& M, long prime_bound, std::vector<PrimeIdeal>* used = nullptr) {
    const BaseField& F = M.field();
    linalg::HeckeSpace S;
    S.dim = M.dim();
    const Ideal ND = multiply(F, M.level(), M.algebra().discriminant);
    for (const auto& p : primes_up_to(F, prime_bound)) {
        if (!add(F, ND, p.ideal).is_unit()) continue;
        S.add(hecke_label(p), linalg::to_rational(hecke_operator(M, p).matrix));
        if (used) used->push_back(p);
    }
    return S;
}

std::vector<Integer> int_roots(const linalg::IntPolynomial& f) {
    std::vector<Integer> roots;
    for (const auto& [g, m] : linalg::factor(f)) {
        REQUIRE(g.size() == 2);
        for (int k = 0; k < m; ++k) roots.push_back(-g[0] / g[1]);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

linalg::IntPolynomial charpoly_of(const HeckeOperator& T) { return linalg::charpoly(T.matrix); }

}  // namespace

TEST_CASE("genus oracle sanity") {
    CHECK(genus_x0(11) == 1);
    CHECK(genus_x0(22) == 2);
    CHECK(genus_x0(33) == 3);
    CHECK(genus_x0(37) == 2);
    CHECK(genus_x0(1) == 0);
    CHECK(genus_x0(6) == 0);
}

TEST_CASE("D=11, level 1") {
    Setup s = setup("q_d11.alg");
    const BaseField& Q = s.B.order.field();
    BrandtModule M(s.B, s.classes, unit_ideal());
    CHECK(M.dim() == 2);
    const auto primes = primes_up_to(Q, 7);
    REQUIRE(primes.size() == 4);
    auto T2 = hecke_operator(M, primes[0]);
    auto T3 = hecke_operator(M, primes[1]);
    CHECK(int_roots(charpoly_of(T2)) == std::vector<Integer>{-2, 3});
    CHECK(int_roots(charpoly_of(T3)) == std::vector<Integer>{-1, 4});
    CHECK(is_self_adjoint(M, T2.matrix));
    CHECK(is_self_adjoint(M, T3.matrix));

    // W_11 from the two-sided ideal: +-1 spectrum, commutes with T_2
    const PrimeIdeal p11 = factor_ideal(Q, principal_ideal(Q, Q.from_int(11)))[0].first;
    auto W = atkin_lehner(M, p11, 1);
    auto Wq = linalg::to_rational(W.matrix);
    auto T2q = linalg::to_rational(T2.matrix);
    CHECK(linalg::is_zero(Wq * T2q - T2q * Wq));
    for (const auto& r : int_roots(charpoly_of(W))) CHECK(abs(r) == 1);

    linalg::HeckeSpace S;
    S.dim = 2;
    S.add(T2.label, T2q);
    S.add(T3.label, linalg::to_rational(T3.matrix));
    S.add("T5", linalg::to_rational(hecke_operator(M, primes[2]).matrix));
    auto split = eisenstein_and_cusp(S, {primes[0], primes[1], primes[2]});
    CHECK(split.eisenstein.size() == 1);
    CHECK(split.cusp.dim == 1);
    CHECK(split.cusp.op("T2") == linalg::QMatrix{{Rational(-2)}});
}

TEST_CASE("module dimensions from orbit enumeration") {
    SUBCASE("Hurwitz order, level 3") {
        Setup s = setup("q_d2.alg");
        const BaseField& Q = s.B.order.field();
        BrandtModule M(s.B, s.classes, principal_ideal(Q, Q.from_int(3)));
        CHECK(M.dim() == 1);
        CHECK(M.basis()[0].orbit_size == 4);
        CHECK(M.basis()[0].stabilizer == 3);
    }
    SUBCASE("D=11, level 2") {
        Setup s = setup("q_d11.alg");
        const BaseField& Q = s.B.order.field();
        BrandtModule M(s.B, s.classes, principal_ideal(Q, Q.from_int(2)));
        CHECK(M.dim() == 3);
        std::vector<PrimeIdeal> used;
        auto S = full_space(M, 13, &used);
        auto split = eisenstein_and_cusp(S, used);
        CHECK(split.cusp.dim == 2);
        CHECK(split.cusp.dim == static_cast<std::size_t>(genus_x0(22) - 2 * genus_x0(2)));
    }
    SUBCASE("level meeting the discriminant is rejected") {
        Setup s = setup("q_d11.alg");
        const BaseField& Q = s.B.order.field();
        CHECK_THROWS_AS(BrandtModule(s.B, s.classes, principal_ideal(Q, Q.from_int(22))), PreconditionError);
    }
}

TEST_CASE("Hecke algebra properties, D=11 level 3") {
    Setup s = setup("q_d11.alg");
    const BaseField& Q = s.B.order.field();
    BrandtModule M(s.B, s.classes, principal_ideal(Q, Q.from_int(3)));
    std::vector<PrimeIdeal> used;
    auto S = full_space(M, 30, &used);
    for (const auto& p : used) {
        const auto T = linalg::to_integer(S.op(hecke_label(p)));
        CHECK(is_self_adjoint(M, T));
        // constants are eigenvectors with eigenvalue Nm(p)+1
        auto ones = linalg::apply(S.op(hecke_label(p)), linalg::QVector(M.dim(), Rational(1)));
        for (const auto& x : ones) CHECK(x == Rational(p.norm() + 1));
        CHECK(linalg::conjugates_real(linalg::primitive_part(linalg::charpoly(S.op(hecke_label(p)))), {0, 1}));
    }
    for (std::size_t a = 0; a < S.labels.size(); ++a)
        for (std::size_t b = a + 1; b < S.labels.size(); ++b) {
            const auto& A = S.op(S.labels[a]);
            const auto& B = S.op(S.labels[b]);
            CHECK(linalg::is_zero(A * B - B * A));
        }
    const PrimeIdeal p3 = primes_up_to(Q, 3)[1];
    const PrimeIdeal p11 = factor_ideal(Q, principal_ideal(Q, Q.from_int(11)))[0].first;
    for (const auto& W : {atkin_lehner(M, p3, 1), atkin_lehner(M, p11, 1)}) {
        auto Wq = linalg::to_rational(W.matrix);
        CHECK(linalg::is_zero(Wq * Wq - linalg::identity_matrix(M.dim())));
        for (const auto& label : {"T2", "T5", "T7"}) {
            const auto& T = S.op(label);
            CHECK(linalg::is_zero(Wq * T - T * Wq));
        }
    }
    auto split = eisenstein_and_cusp(S, used);
    CHECK(split.cusp.dim == static_cast<std::size_t>(genus_x0(33) - 2 * genus_x0(3)));
}

TEST_CASE("cusp dimensions match the genus formula on small levels") {
    for (long D : {2L, 3L, 5L, 7L}) {
        Setup s = setup("q_d" + std::to_string(D) + ".alg");
        const BaseField& Q = s.B.order.field();
        for (long m = 1; D * m <= 60; ++m) {
            if (std::gcd(D, m) != 1) continue;
            bool squarefree = true;
            for (long p = 2; p * p <= m; ++p)
                if (m % (p * p) == 0) squarefree = false;
            if (!squarefree) continue;
            BrandtModule M(s.B, s.classes, principal_ideal(Q, Q.from_int(m)));
            std::vector<PrimeIdeal> used;
            auto S = full_space(M, 20, &used);
            auto split = eisenstein_and_cusp(S, used);
            INFO("D=" << D << " M=" << m);
            CHECK(split.cusp.dim == static_cast<std::size_t>(genus_x0(D * m) - 2 * genus_x0(m)));
            CHECK(split.eisenstein.size() == 1);
        }
    }
}

TEST_CASE("icosian order over Q(sqrt 5)") {
    Setup s = setup("q5_icosian.alg");
    const BaseField& F = s.B.order.field();
    BrandtModule M(s.B, s.classes, unit_ideal());
    CHECK(M.dim() == 1);
    CHECK(M.basis()[0].stabilizer == 60);
    std::vector<PrimeIdeal> used;
    auto S = full_space(M, 20, &used);
    auto split = eisenstein_and_cusp(S, used);
    CHECK(split.cusp.dim == 0);

    // a level of norm 31: row sums and self-adjointness
    auto levels = ideals_of_norm(F, 31);
    REQUIRE(levels.size() == 2);
    for (const auto& N : levels) {
        BrandtModule M31(s.B, s.classes, N);
        std::vector<PrimeIdeal> used31;
        auto S31 = full_space(M31, 12, &used31);
        for (const auto& label : S31.labels) CHECK(is_self_adjoint(M31, linalg::to_integer(S31.op(label))));
        auto split31 = eisenstein_and_cusp(S31, used31);
        CHECK(split31.cusp.dim == 1);
    }
}
