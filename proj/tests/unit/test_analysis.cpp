#include "doctest.h"

#include "hmf/analysis.hpp"

#include <functional>

using namespace hmf;
using namespace hmf::analysis;
using arith::PrimeIdeal;

namespace {

// a_p = p + 1 - #E(F_p) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, by brute force.
long trace_of_frobenius(long p, long a1, long a2, long a3, long a4, long a6) {
    long count = 1;
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
            long lhs = (y * y + a1 * x * y + a3 * y) % p;
            long rhs = (((x * x % p) * x) + a2 * x * x + a4 * x + a6) % p;
            if (((lhs - rhs) % p + p) % p == 0) ++count;
        }
    return p + 1 - count;
}

long a11(long p) { return trace_of_frobenius(p, 0, -1, 1, -10, -20); }
long a32(long p) { return trace_of_frobenius(p, 0, 0, 0, -1, 0); }

// q-expansion of q prod (1-q^n)^2 (1-q^{11n})^2, the newform of level 11.
std::vector<long> eta_11(long bound) {
    std::vector<long> c(bound + 1, 0);
    c[1] = 1;
    auto mul_factor = [&](long step) {
        // multiply by (1 - q^step)
        for (long k = bound; k >= step; --k) c[k] -= c[k - step];
    };
    for (long n = 1; n <= bound; ++n) {
        mul_factor(n);
        mul_factor(n);
        if (11 * n <= bound) {
            mul_factor(11 * n);
            mul_factor(11 * n);
        }
    }
    return c;
}

NewformRecord rational_record(const arith::BaseField& F, long bound, const arith::Ideal& disc, const arith::Ideal& level,
                              const std::function<long(const PrimeIdeal&)>& ap) {
    NewformRecord r;
    r.field_label = F.label();
    r.disc = disc;
    r.level = level;
    r.heckefield = {0, 1};
    r.prime_bound = bound;
    const arith::Ideal ND = arith::multiply(F, disc, level);
    for (const auto& p : arith::primes_up_to(F, bound)) {
        if (!arith::add(F, ND, p.ideal).is_unit()) continue;
        r.primes.push_back(p.label());
        r.eigenvalues.push_back({Rational(ap(p))});
    }
    return r;
}

arith::Ideal rational_ideal(const arith::BaseField& F, long n) { return arith::principal_ideal(F, F.from_int(n)); }

NewformRecord form_11a(long bound) {
    const auto Q = arith::make_field(0);
    auto r = rational_record(Q, bound, rational_ideal(Q, 11), arith::unit_ideal(),
                             [](const PrimeIdeal& p) { return a11(to_i64(p.p)); });
    r.al = {{"11", -a11(11)}};
    return r;
}

}  // namespace

TEST_CASE("Hecke field arithmetic") {
    HeckeField E({-1, -1, 1});  // x^2 - x - 1
    const QVector x{0, 1};
    CHECK(E.mul(x, x) == QVector{1, 1});
    CHECK(E.sub(E.mul(x, x), E.add(x, E.from_rational(1))) == QVector{0, 0});
    CHECK(E.is_rational(E.from_rational(Rational(3, 2))));
    CHECK_FALSE(E.is_rational(x));
}

TEST_CASE("fundamental discriminants") {
    CHECK(fundamental_discriminant(5) == 5);
    CHECK(fundamental_discriminant(-16) == -4);
    CHECK(fundamental_discriminant(-11) == -11);
    CHECK(fundamental_discriminant(12) == 12);
    CHECK(fundamental_discriminant(8) == 8);
    CHECK(fundamental_discriminant(-3 * 49) == -3);
}

TEST_CASE("CM detection") {
    const auto Q = arith::make_field(0);
    SUBCASE("level 11 form has no CM") {
        auto r = form_11a(50);
        REQUIRE(r.eigenvalues.size() >= 10);
        CHECK(detect_cm(r, Q).verdict == CMVerdict::NotCM);
    }
    SUBCASE("y^2 = x^3 - x has CM by Q(i)") {
        auto r = rational_record(Q, 60, rational_ideal(Q, 2), arith::unit_ideal(),
                                 [](const PrimeIdeal& p) { return a32(to_i64(p.p)); });
        long inert_zero = 0;
        for (long p = 3; p <= 60; ++p)
            if (is_prime(p) && p % 4 == 3 && a32(p) == 0) ++inert_zero;
        const auto res = detect_cm(r, Q);
        CHECK(res.verdict == CMVerdict::Candidate);
        CHECK(res.disc == -4);
        CHECK(res.evidence == inert_zero);
    }
    SUBCASE("all eigenvalues zero gives no information") {
        auto r = rational_record(Q, 50, rational_ideal(Q, 2), arith::unit_ideal(), [](const PrimeIdeal&) { return 0L; });
        CHECK(detect_cm(r, Q).verdict == CMVerdict::Untested);
    }
    SUBCASE("too few eigenvalues") {
        auto r = form_11a(20);
        CHECK(r.eigenvalues.size() < 10);
        CHECK_THROWS_AS(detect_cm(r, Q), PreconditionError);
    }
}

TEST_CASE("base change detection over Q(sqrt 5)") {
    const auto F = arith::make_field(5);
    const auto Q = arith::make_field(0);
    const long bound = 60;
    const std::vector<NewformRecord> qdb{form_11a(bound)};
    // synthetic base change of the level 11 form
    auto bc_ap = [](const PrimeIdeal& p) {
        const long l = to_i64(p.p);
        return p.residue_degree == 1 ? a11(l) : a11(l) * a11(l) - 2 * l;
    };
    auto r = rational_record(F, bound, arith::unit_ideal(), rational_ideal(F, 11), bc_ap);
    REQUIRE(detect_base_change(r, F).verdict == BaseChangeVerdict::Stage1Only);
    const auto res = detect_base_change(r, F, &qdb);
    CHECK(res.verdict == BaseChangeVerdict::Matched);
    CHECK(res.match == qdb[0].label());
    CHECK(res.evidence > 0);

    SUBCASE("conjugate eigenvalues disagree") {
        auto bad = r;
        // first split prime; the ramified prime is its own conjugate
        for (std::size_t k = 0; k < bad.primes.size(); ++k)
            if (bad.primes[k].find('.') != std::string::npos && bad.primes[k].rfind("5.", 0) != 0) {
                bad.eigenvalues[k][0] += 1;
                break;
            }
        CHECK(detect_base_change(bad, F).verdict == BaseChangeVerdict::NotBaseChange);
    }
    SUBCASE("level not stable under conjugation") {
        const auto n11 = arith::ideals_of_norm(F, 11);
        REQUIRE(n11.size() == 2);
        auto other = rational_record(F, bound, arith::unit_ideal(), n11[0], bc_ap);
        CHECK(detect_base_change(other, F).verdict == BaseChangeVerdict::NotBaseChange);
    }
    SUBCASE("no stage two without a matching rational form") {
        auto shifted = r;
        for (std::size_t k = 0; k < shifted.primes.size(); ++k)
            if (shifted.primes[k] == "4") shifted.eigenvalues[k][0] += 2;
        CHECK(detect_base_change(shifted, F, &qdb).verdict == BaseChangeVerdict::Candidate);
    }
    SUBCASE("over Q the question does not apply") {
        CHECK(detect_base_change(qdb[0], Q).verdict == BaseChangeVerdict::NotApplicable);
    }
}

TEST_CASE("L-series coefficients") {
    SUBCASE("level 11 form matches the eta product") {
        const auto Q = arith::make_field(0);
        const long bound = 150;
        auto r = form_11a(bound);
        const auto L = lfunction_coefficients(r, Q, bound);
        CHECK(L.conductor == 11);
        CHECK(L.gamma_exponent == 1);
        CHECK(L.missing_norms.empty());
        const auto eta = eta_11(bound);
        for (long n = 1; n <= bound; ++n) {
            INFO("n=" << n);
            REQUIRE(L.coefficients[n].has_value());
            CHECK((*L.coefficients[n])[0] == eta[n]);
        }
    }
    SUBCASE("Q(sqrt 5), level of norm 31") {
        const auto F = arith::make_field(5);
        const auto N = arith::ideals_of_norm(F, 31)[0];
        // arbitrary integer data; only the multiplicative structure matters here
        auto r = rational_record(F, 80, arith::unit_ideal(), N,
                                 [](const PrimeIdeal& p) { return to_i64(p.norm() % 7) - 3; });
        r.al = {{arith::factor_ideal(F, N)[0].first.label(), -1}};
        const long bound = 80;
        const auto L = lfunction_coefficients(r, F, bound);
        CHECK(L.conductor == 775);
        CHECK(L.gamma_exponent == 2);
        CHECK(L.missing_norms.empty());
        const auto a = ideal_coefficients(r, F, bound);
        const auto one = a.at(arith::unit_ideal());
        CHECK(one == QVector{1});
        // multiplicativity on coprime pairs, Hecke recursion on prime squares
        for (const auto& [m, am] : a)
            for (const auto& [n, an] : a) {
                if (m.norm() * n.norm() > bound || !arith::add(F, m, n).is_unit()) continue;
                CHECK(a.at(arith::multiply(F, m, n)) == QVector{am[0] * an[0]});
            }
        for (const auto& p : arith::primes_up_to(F, 8)) {
            const auto ap = a.at(p.ideal)[0];
            const auto ap2 = a.at(arith::power(F, p.ideal, 2))[0];
            CHECK(ap2 == ap * ap - Rational(p.norm()));
        }
        const auto aN = a.at(N)[0];
        CHECK(aN == 1);
        // coefficient sums over ideals of each norm
        for (long n = 1; n <= bound; ++n) {
            Rational s = 0;
            for (const auto& m : arith::ideals_of_norm(F, n)) s += a.at(m)[0];
            CHECK((*L.coefficients[n])[0] == s);
        }
    }
    SUBCASE("square level factors are reported missing") {
        const auto Q = arith::make_field(0);
        auto r = rational_record(Q, 30, rational_ideal(Q, 2), rational_ideal(Q, 9), [](const PrimeIdeal&) { return 0L; });
        r.al = {{"2", 1}, {"9", 1}};
        const auto L = lfunction_coefficients(r, Q, 30);
        CHECK(L.conductor == 18);
        CHECK(L.missing_norms == std::vector<long>{3, 6, 9, 12, 15, 18, 21, 24, 27, 30});
        CHECK((*L.coefficients[2])[0] == -1);
    }
}

TEST_CASE("Hecke field statistics") {
    CHECK(hecke_field_stats({}).csv() == "field_label,disc_E,count\n");
    NewformRecord r;
    r.field_label = "2.2.5.1";
    r.heckefield = {-1, -1, 1};
    NewformRecord s = r;
    s.heckefield = {1, 0, 1};
    NewformRecord t = r;
    t.heckefield = {-8, 0, 1};
    NewformRecord u = r;
    u.heckefield = {0, 1};
    const auto st = hecke_field_stats({r, s, t, u, r});
    CHECK(st.csv() == "field_label,disc_E,count\n2.2.5.1,-4,1\n2.2.5.1,5,2\n2.2.5.1,8,1\n");
    CHECK(st.real == 3);
    CHECK(st.imaginary == 1);
    CHECK(st.max_real_disc.at("2.2.5.1") == 8);
}

TEST_CASE("verdict names round trip") {
    for (auto v : {CMVerdict::NotCM, CMVerdict::Candidate, CMVerdict::Untested, CMVerdict::Insufficient})
        CHECK(parse_cm_verdict(to_string(v)) == v);
    for (auto v : {BaseChangeVerdict::NotApplicable, BaseChangeVerdict::NotBaseChange, BaseChangeVerdict::Stage1Only,
                   BaseChangeVerdict::Candidate, BaseChangeVerdict::Matched})
        CHECK(parse_base_change_verdict(to_string(v)) == v);
    CHECK_THROWS_AS(parse_cm_verdict("maybe"), PreconditionError);
}
