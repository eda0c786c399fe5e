#include "doctest.h"

#include "hmf/db.hpp"

#include <random>
#include <sstream>

using namespace hmf;
using namespace hmf::db;

namespace {

std::string data(const std::string& rel) { return std::string(HMF_DATA_DIR) + "/" + rel; }

// a_p = p + 1 - #E(F_p), all projective points of the reduction counted.
long trace_of_frobenius(long p, long a1, long a2, long a3, long a4, long a6) {
    long count = 1;
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
            const long lhs = y * y + a1 * x * y + a3 * y;
            const long rhs = x * x * x + a2 * x * x + a4 * x + a6;
            if (((lhs - rhs) % p + p) % p == 0) ++count;
        }
    return p + 1 - count;
}

long a11(long p) { return trace_of_frobenius(p, 0, -1, 1, -10, -20); }
long a33(long p) { return trace_of_frobenius(p, 1, 1, 0, -11, 0); }
long a44(long p) { return trace_of_frobenius(p, 0, 1, 0, 3, -1); }

// Number of ideals of norm m in Q(sqrt 5): sum over d | m of (5/d).
long zeta5_coefficient(long m) {
    long s = 0;
    for (long d = 1; d <= m; ++d) {
        if (m % d) continue;
        const long r = d % 5;
        s += r == 0 ? 0 : (r == 1 || r == 4) ? 1 : -1;
    }
    return s;
}

NewformRecord random_record(std::mt19937& rng) {
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    NewformRecord r;
    r.field_label = pick(0, 1) ? "1.1.1.1" : "2.2.5.1";
    r.disc = {pick(1, 50), 0, 1};
    const long d = pick(1, 3);
    r.level = {d * pick(1, 20), 0, d};
    r.level.b = d * pick(0, r.level.a.get_si() / d - 1);
    r.index = static_cast<std::size_t>(pick(0, 5));
    const long deg = pick(1, 3);
    r.heckefield.clear();
    for (long k = 0; k < deg; ++k) r.heckefield.push_back(pick(-30, 30));
    r.heckefield.push_back(pick(1, 2));
    const long np = pick(0, 12);
    for (long k = 0; k < np; ++k) {
        r.primes.push_back(std::to_string(pick(2, 100)) + (pick(0, 1) ? "." + std::to_string(pick(0, 99)) : ""));
        linalg::QVector v;
        for (long j = 0; j < deg; ++j) v.push_back(Rational(pick(-1000, 1000), pick(1, 6)));
        for (auto& x : v) x.canonicalize();
        r.eigenvalues.push_back(v);
    }
    for (long k = pick(0, 3); k > 0; --k) r.al.emplace_back(std::to_string(pick(2, 50)), pick(0, 1) ? 1 : -1);
    r.cm = static_cast<analysis::CMVerdict>(pick(0, 3));
    r.cm_disc = pick(-100, 100);
    r.cm_evidence = pick(0, 20);
    r.bc = static_cast<analysis::BaseChangeVerdict>(pick(0, 4));
    if (pick(0, 1)) r.bc_match = "1.1.1.1-11.11.0.1-1.1.0.1-0";
    r.bc_evidence = pick(0, 20);
    r.prime_bound = pick(2, 500);
    r.version = kVersion;
    return r;
}

const FieldSetup& d11() {
    static const FieldSetup s = load_field_setup(data("fields/q_d11.field"));
    return s;
}

const FieldSetup& q5() {
    static const FieldSetup s = load_field_setup(data("fields/q5.field"));
    return s;
}

arith::Ideal rational_ideal(long n) { return {n, 0, 1}; }

}  // namespace

TEST_CASE("serialization round trip") {
    std::mt19937 rng(20240917);
    std::vector<NewformRecord> records;
    for (int k = 0; k < 100; ++k) {
        const auto r = random_record(rng);
        const std::string line = serialize(r);
        CHECK(parse_record(line) == r);
        CHECK(serialize(parse_record(line)) == line);
        records.push_back(r);
    }
    std::stringstream ss;
    write_database(ss, records);
    CHECK(read_database(ss) == records);
}

TEST_CASE("parse errors carry a position") {
    const auto recs = build_database(d11(), 1, 1, 20);
    REQUIRE(recs.size() == 1);
    const std::string line = serialize(recs[0]);
    CHECK(line.find("eigenvalues=[[-2],") != std::string::npos);  // rational field: singleton vectors

    auto position_of = [](const std::string& text) -> long {
        try {
            parse_record(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    const auto at = line.find("dim=1");
    std::string bad = line;
    bad[at + 4] = 'x';
    CHECK(position_of(bad) == static_cast<long>(at + 4));
    bad = line;
    bad.replace(line.find("cm=insufficient"), 15, "cm=maybe");
    CHECK(position_of(bad) == static_cast<long>(line.find("cm=") + 3));
    CHECK(position_of(line + ";") == static_cast<long>(line.size()));
    CHECK(position_of("") == 0);
    CHECK(position_of(line.substr(0, 40)) >= 0);
    bad = line;
    bad.replace(line.find("[-2]"), 4, "[4/2]");
    CHECK(position_of(bad) >= 0);
}

TEST_CASE("prime labels over Q(sqrt 5)") {
    const auto F = arith::make_field(5);
    std::vector<std::string> labels;
    for (const auto& p : arith::primes_up_to(F, 11)) labels.push_back(p.label());
    // roots of x^2 - x - 1 modulo 5 and 11, by search
    std::vector<std::string> expected{"4"};
    for (long p : {5L, 11L})
        for (long a = 0; a < p; ++a)
            if ((a * a - a - 1) % p == 0) expected.push_back(std::to_string(p) + "." + std::to_string(a));
    expected.insert(expected.begin() + 2, "9");
    CHECK(labels == expected);
    CHECK(labels == std::vector<std::string>{"4", "5.3", "9", "11.4", "11.8"});
}

TEST_CASE("level enumeration covers each ideal once") {
    const auto F = arith::make_field(5);
    for (long m = 1; m <= 200; ++m) {
        const auto ideals = arith::ideals_of_norm(F, m);
        INFO("m=" << m);
        CHECK(static_cast<long>(ideals.size()) == zeta5_coefficient(m));
        for (std::size_t k = 1; k < ideals.size(); ++k) CHECK(ideals[k - 1] < ideals[k]);
    }
}

TEST_CASE("D=11 mini database") {
    BuildReport report;
    const auto recs = build_database(d11(), 1, 4, 20, &report);
    REQUIRE(report.levels.size() == 4);
    CHECK(report.levels[0].cusp_dim == 1);
    CHECK(report.levels[1].new_dim == 0);
    REQUIRE(recs.size() == 3);

    // level (1): the conductor 11 curve
    CHECK(recs[0].level == rational_ideal(1));
    CHECK(recs[0].dim() == 1);
    for (std::size_t k = 0; k < recs[0].primes.size(); ++k) {
        const long p = std::stol(recs[0].primes[k]);
        CHECK(recs[0].eigenvalues[k] == linalg::QVector{Rational(a11(p))});
    }
    CHECK(recs[0].al == std::vector<std::pair<std::string, int>>{{"11", -a11(11)}});

    // level (3) is the conductor 33 curve, level (4) the conductor 44 one
    CHECK(recs[1].level == rational_ideal(3));
    for (std::size_t k = 0; k < recs[1].primes.size(); ++k)
        CHECK(recs[1].eigenvalues[k][0] == a33(std::stol(recs[1].primes[k])));
    CHECK(recs[1].al == std::vector<std::pair<std::string, int>>{{"3", -a33(3)}, {"11", -a33(11)}});
    CHECK(recs[2].level == rational_ideal(4));
    for (std::size_t k = 0; k < recs[2].primes.size(); ++k)
        CHECK(recs[2].eigenvalues[k][0] == a44(std::stol(recs[2].primes[k])));
    CHECK(recs[2].al[1] == std::pair<std::string, int>{"11", -a44(11)});

    SUBCASE("queries") {
        CHECK(query(recs, {}).size() == 3);
        const auto level1 = query(recs, {{"dim", "1"}, {"norm", "1"}});
        REQUIRE(level1.size() == 1);
        CHECK(level1[0] == recs[0]);
        CHECK(query(recs, {{"dim", "1"}}).size() == 3);
        CHECK(query(recs, {{"norm", "5..100"}}).empty());
        CHECK(query(recs, {{"norm", "2..3"}}).size() == 1);
        CHECK(query(recs, {{"field", "1.1.1.1"}, {"disc", "11"}}).size() == 3);
        CHECK(query(recs, {{"cm", "not"}}).empty());
        CHECK_THROWS_AS(query(recs, {{"colour", "red"}}), PreconditionError);
        CHECK_THROWS_AS(parse_filter("norm"), PreconditionError);
        CHECK_THROWS_AS(parse_filter("dim=a..b"), PreconditionError);
        const std::string csv = format_csv(query(recs, {{"norm", "1"}}));
        CHECK(csv.substr(0, csv.find('\n')) == "field,disc,level,level_norm,index,dim,heckefield,al,cm,cm_disc,bc,eigenvalues");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
        const std::string table = format_table(recs);
        CHECK(std::count(table.begin(), table.end(), '\n') == 4);
    }
    SUBCASE("empty range") {
        BuildReport empty;
        CHECK(build_database(d11(), 5, 4, 20, &empty).empty());
        CHECK(empty.levels.empty());
        CHECK(empty.record_count() == 0);
    }
    SUBCASE("levels meeting the discriminant are skipped") {
        BuildReport r11;
        const auto recs11 = build_database(d11(), 11, 11, 20, &r11);
        CHECK(recs11.empty());
        REQUIRE(r11.levels.size() == 1);
        CHECK(r11.levels[0].skipped);
    }
    SUBCASE("spot checks") {
        for (const auto& sc : spot_check(d11(), recs, 6, 5)) CHECK(sc.ok);
        auto broken = recs;
        broken[0].eigenvalues[0][0] += 1;
        const auto bad = spot_check(d11(), {broken[0]}, 3, 1);
        for (const auto& sc : bad)
            if (sc.prime == broken[0].primes[0]) CHECK_FALSE(sc.ok);
    }
}

TEST_CASE("crosscheck between the two algebras") {
    const std::string dir = data("algebras");
    SUBCASE("N = 33") {
        const auto rep = crosscheck_pnew(dir, 33, 3, 11, 50);
        CHECK(rep.agree);
        CHECK(rep.constituents == 1);
        CHECK(rep.dim_p == 1);
        // the values themselves against the curve of conductor 33
        Pipeline pipe(load_algebra_setup(dir + "/q_d3.alg"), 50);
        const auto recs = pipe.records(rational_ideal(11));
        REQUIRE(recs.size() == 1);
        for (long r : {2L, 5L, 7L, 13L}) CHECK((*recs[0].eigenvalue(std::to_string(r)))[0] == a33(r));
        CHECK(recs[0].al == std::vector<std::pair<std::string, int>>{{"3", -a33(3)}, {"11", -a33(11)}});
    }
    SUBCASE("N = 22 has no newforms") {
        const auto rep = crosscheck_pnew(dir, 22, 2, 11, 50);
        CHECK(rep.agree);
        CHECK(rep.dim_p == 0);
        CHECK(rep.dim_q == 0);
    }
    SUBCASE("bad input") {
        CHECK_THROWS_AS(crosscheck_pnew(dir, 33, 3, 3, 50), PreconditionError);
        CHECK_THROWS_AS(crosscheck_pnew(dir, 9 * 11, 3, 11, 50), PreconditionError);
        CHECK_THROWS_AS(crosscheck_pnew(dir, 17 * 19, 17, 19, 50), PreconditionError);
    }
}

TEST_CASE("Q(sqrt 5) small levels") {
    BuildReport report;
    const auto recs = build_database(q5(), 1, 40, 50, &report);
    REQUIRE(recs.size() >= 2);
    CHECK(recs.front().level.norm() == 31);
    const auto norm31 = query(recs, {{"norm", "31"}});
    REQUIRE(norm31.size() == 2);
    for (const auto& r : norm31) CHECK(r.dim() == 1);
    // every level of each norm appears once, and conjugates give conjugate eigenvalues
    std::size_t levels = 0;
    for (long m = 1; m <= 40; ++m) levels += static_cast<std::size_t>(zeta5_coefficient(m));
    CHECK(report.levels.size() == levels);
    const auto F = arith::make_field(5);
    CHECK(arith::conjugate(F, norm31[0].level) == norm31[1].level);
    for (std::size_t k = 0; k < norm31[0].primes.size(); ++k) {
        const auto& p = norm31[0].primes[k];
        if (p == "4" || p == "9" || p.rfind("5.", 0) == 0) CHECK(*norm31[1].eigenvalue(p) == norm31[0].eigenvalues[k]);
    }
    // determinism
    CHECK(build_database(q5(), 1, 40, 50) == recs);
}
