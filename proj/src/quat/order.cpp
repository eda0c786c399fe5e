#include "hmf/quat/order.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hmf::quat {

using arith::hnf_index;
using arith::hnf_rows;
using arith::reduce_mod_hnf;

namespace {

using RMatrix = std::vector<std::vector<Rational>>;

// Inverse of a square rational matrix; empty result when singular.
RMatrix inverse(RMatrix m) {
    std::size_t n = m.size();
    RMatrix inv(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return {};
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Rational f = 1 / m[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            m[c][k] *= f;
            inv[c][k] *= f;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational g = m[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                m[r][k] -= g * m[c][k];
                inv[r][k] -= g * inv[c][k];
            }
        }
    }
    return inv;
}

bool integral_vector(const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q.get_den() == 1; });
}

IntVector to_integers(const std::vector<Rational>& v) {
    IntVector out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(q.get_num());
    return out;
}

OElement canonical(OElement x) {
    Integer g = x.den;
    for (const auto& c : x.c) g = gcd(g, c);
    if (x.den < 0) g = -abs(g);
    if (g != 1 && g != 0) {
        for (auto& c : x.c) c /= g;
        x.den /= g;
    }
    return x;
}

Integer bilinear(const IntVector& x, const IntMatrix& G, const IntVector& y) {
    Integer s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0) continue;
        Integer t = 0;
        for (std::size_t l = 0; l < y.size(); ++l) t += G[k][l] * y[l];
        s += x[k] * t;
    }
    return s;
}

Integer integer_of(const Rational& q, const std::string& what) {
    verify(q.get_den() == 1, what + ": expected an integer, got " + q.get_str());
    return q.get_num();
}

}  // namespace

QuaternionOrder::QuaternionOrder(QuaternionAlgebra A, std::vector<std::vector<Rational>> basis) : A_(std::move(A)) {
    using K = OrderError::Kind;
    const std::size_t r = A_.rational_dim();
    if (basis.size() != r) throw OrderError(K::Degenerate, "order basis must have " + std::to_string(r) + " vectors");
    for (const auto& v : basis) {
        if (v.size() != r) throw OrderError(K::Degenerate, "order basis vector has the wrong length");
        basis_.push_back(A_.from_vector(v));
    }
    to_order_ = inverse(basis);
    if (to_order_.empty()) throw OrderError(K::Degenerate, "order basis is linearly dependent");
    for (std::size_t k = 0; k < r; ++k) {
        if (!A_.trd(basis_[k]).is_integral() || !A_.nrd(basis_[k]).is_integral())
            throw OrderError(K::NotIntegral, "order basis element " + std::to_string(k) + " is not integral");
    }
    auto coords_rational = [&](const Quaternion& q) {
        std::vector<Rational> v = A_.to_vector(q), o(r, 0);
        for (std::size_t i = 0; i < r; ++i)
            if (v[i] != 0)
                for (std::size_t j = 0; j < r; ++j) o[j] += v[i] * to_order_[i][j];
        return o;
    };
    mult_.assign(r, std::vector<IntVector>(r));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
            auto o = coords_rational(A_.mul(basis_[k], basis_[l]));
            if (!integral_vector(o)) throw OrderError(K::NotClosed, "order basis is not closed under multiplication");
            mult_[k][l] = to_integers(o);
        }
    auto one = coords_rational(A_.one());
    if (!integral_vector(one)) throw OrderError(K::MissingOne, "order does not contain 1");
    one_ = to_integers(one);
    const BaseField& F = A_.field();
    for (std::size_t k = 0; k < r; ++k) {
        auto c = coords_rational(A_.conj(basis_[k]));
        verify(integral_vector(c), "order is not stable under conjugation");
        conj_.push_back(to_integers(c));
        if (F.degree() == 2) {
            auto w = coords_rational(A_.mul(A_.scalar(F.omega()), basis_[k]));
            verify(integral_vector(w), "order is not a Z_F-module");
            omega_.push_back(to_integers(w));
        }
    }
    trace_gram_.assign(r, IntVector(r));
    nrd_gram_.assign(F.degree(), IntMatrix(r, IntVector(r)));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l) {
            FieldElement t = A_.trd(A_.mul(basis_[k], A_.conj(basis_[l])));
            trace_gram_[k][l] = integer_of(F.degree() == 1 ? t.a() : t.trace(), "trace gram");
            nrd_gram_[0][k][l] = integer_of(t.a(), "nrd gram");
            if (F.degree() == 2) nrd_gram_[1][k][l] = integer_of(t.b(), "nrd gram");
        }
}

Quaternion QuaternionOrder::element(const OElement& x) const {
    Quaternion q = A_.zero();
    for (std::size_t k = 0; k < rank(); ++k)
        if (x.c[k] != 0) {
            Quaternion t = basis_[k];
            FieldElement s = field().element(Rational(x.c[k]));
            for (auto& comp : t) comp *= s;
            q = A_.add(q, t);
        }
    Rational inv(1, 1);
    inv /= Rational(x.den);
    for (auto& comp : q) comp *= field().element(inv);
    return q;
}

OElement QuaternionOrder::coordinates(const Quaternion& x) const {
    std::vector<Rational> v = A_.to_vector(x), o(rank(), 0);
    for (std::size_t i = 0; i < rank(); ++i)
        if (v[i] != 0)
            for (std::size_t j = 0; j < rank(); ++j) o[j] += v[i] * to_order_[i][j];
    Integer den = 1;
    for (const auto& q : o) den = lcm(den, q.get_den());
    OElement out{IntVector(rank()), den};
    for (std::size_t j = 0; j < rank(); ++j) out.c[j] = Rational(o[j] * den).get_num();
    return canonical(out);
}

IntVector QuaternionOrder::mul(const IntVector& x, const IntVector& y) const {
    std::size_t r = rank();
    IntVector z(r, 0);
    for (std::size_t k = 0; k < r; ++k) {
        if (x[k] == 0) continue;
        for (std::size_t l = 0; l < r; ++l) {
            if (y[l] == 0) continue;
            Integer f = x[k] * y[l];
            const IntVector& m = mult_[k][l];
            for (std::size_t c = 0; c < r; ++c)
                if (m[c] != 0) z[c] += f * m[c];
        }
    }
    return z;
}

OElement QuaternionOrder::mul(const OElement& x, const OElement& y) const {
    return canonical({mul(x.c, y.c), x.den * y.den});
}

IntVector QuaternionOrder::conj(const IntVector& x) const {
    IntVector z(rank(), 0);
    for (std::size_t k = 0; k < rank(); ++k)
        if (x[k] != 0)
            for (std::size_t c = 0; c < rank(); ++c) z[c] += x[k] * conj_[k][c];
    return z;
}

OElement QuaternionOrder::scale(const FieldElement& s, const OElement& x) const {
    Integer den = s.denominator();
    Integer s0 = Rational(s.a() * den).get_num(), s1 = Rational(s.b() * den).get_num();
    IntVector z(rank(), 0);
    for (std::size_t k = 0; k < rank(); ++k) {
        if (x.c[k] == 0) continue;
        z[k] += s0 * x.c[k];
        if (s1 != 0)
            for (std::size_t c = 0; c < rank(); ++c) z[c] += s1 * x.c[k] * omega_[k][c];
    }
    return canonical({z, x.den * den});
}

FieldElement QuaternionOrder::nrd(const OElement& x) const {
    Rational d2(x.den * x.den * 2);
    Rational c0(bilinear(x.c, nrd_gram_[0], x.c));
    Rational c1 = field().degree() == 2 ? Rational(bilinear(x.c, nrd_gram_[1], x.c)) : Rational(0);
    return field().element(c0 / d2, c1 / d2);
}

FieldElement QuaternionOrder::trd(const OElement& x) const { return A_.trd(element(x)); }

Integer QuaternionOrder::gram_determinant() const {
    RMatrix m(rank(), std::vector<Rational>(rank()));
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < rank(); ++j) m[i][j] = trace_gram_[i][j];
    // Plain elimination for the determinant.
    Rational det = 1;
    for (std::size_t c = 0; c < rank(); ++c) {
        std::size_t p = c;
        while (p < rank() && m[p][c] == 0) ++p;
        if (p == rank()) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < rank(); ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < rank(); ++k) m[r][k] -= f * m[c][k];
        }
    }
    return abs(integer_of(det, "gram determinant"));
}

Lattice QuaternionOrder::as_lattice() const {
    std::vector<OElement> gens;
    for (std::size_t k = 0; k < rank(); ++k) {
        IntVector e(rank(), 0);
        e[k] = 1;
        gens.push_back({e, 1});
    }
    return lattice_from_generators(gens, rank());
}

// ---------------------------------------------------------------- lattices

Lattice lattice_from_generators(const std::vector<OElement>& gens, std::size_t rank) {
    Integer D = 1;
    for (const auto& g : gens) D = lcm(D, g.den);
    IntMatrix m;
    m.reserve(gens.size());
    for (const auto& g : gens) {
        Integer f = D / g.den;
        IntVector row(rank);
        for (std::size_t k = 0; k < rank; ++k) row[k] = g.c[k] * f;
        m.push_back(std::move(row));
    }
    Lattice L{hnf_rows(std::move(m), rank), D};
    require(L.rows.size() == rank, "lattice_from_generators: generators do not span a full lattice");
    Integer g = L.den;
    for (const auto& row : L.rows)
        for (const auto& x : row) g = gcd(g, x);
    if (g != 1) {
        for (auto& row : L.rows)
            for (auto& x : row) x /= g;
        L.den /= g;
    }
    return L;
}

Lattice lattice_product(const QuaternionOrder& O, const Lattice& L, const Lattice& M) {
    std::vector<OElement> gens;
    gens.reserve(L.rows.size() * M.rows.size());
    for (const auto& x : L.rows)
        for (const auto& y : M.rows) gens.push_back({O.mul(x, y), L.den * M.den});
    return lattice_from_generators(gens, O.rank());
}

Lattice lattice_conj(const QuaternionOrder& O, const Lattice& L) {
    std::vector<OElement> gens;
    for (const auto& x : L.rows) gens.push_back({O.conj(x), L.den});
    return lattice_from_generators(gens, O.rank());
}

Lattice lattice_scale(const QuaternionOrder& O, const Lattice& L, const FieldElement& c) {
    std::vector<OElement> gens;
    for (std::size_t k = 0; k < L.rows.size(); ++k) gens.push_back(O.scale(c, L.element(k)));
    return lattice_from_generators(gens, O.rank());
}

Lattice lattice_left_mul(const QuaternionOrder& O, const OElement& x, const Lattice& L) {
    std::vector<OElement> gens;
    for (std::size_t k = 0; k < L.rows.size(); ++k) gens.push_back(O.mul(x, L.element(k)));
    return lattice_from_generators(gens, O.rank());
}

bool lattice_contains(const Lattice& L, const OElement& x) {
    IntVector y(x.c.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        Integer t = x.c[k] * L.den;
        if (!mpz_divisible_p(t.get_mpz_t(), x.den.get_mpz_t())) return false;
        y[k] = t / x.den;
    }
    IntVector r = reduce_mod_hnf(std::move(y), L.rows);
    return std::all_of(r.begin(), r.end(), [](const Integer& z) { return z == 0; });
}

bool lattice_contains(const Lattice& L, const Lattice& M) {
    for (std::size_t k = 0; k < M.rows.size(); ++k)
        if (!lattice_contains(L, M.element(k))) return false;
    return true;
}

Rational lattice_index(const Lattice& L) {
    Integer d = 1;
    for (std::size_t k = 0; k < L.rows.size(); ++k) d *= L.den;
    Rational q(hnf_index(L.rows), d);
    q.canonicalize();
    return q;
}

namespace {

IntMatrix transformed_gram(const Lattice& L, const IntMatrix& G, const std::string& what) {
    std::size_t r = L.rows.size();
    IntMatrix out(r, IntVector(r));
    Integer d2 = L.den * L.den;
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k; l < r; ++l) {
            Integer v = bilinear(L.rows[k], G, L.rows[l]);
            verify(mpz_divisible_p(v.get_mpz_t(), d2.get_mpz_t()) != 0, what + ": lattice is not integral");
            out[k][l] = out[l][k] = v / d2;
        }
    return out;
}

}  // namespace

IntMatrix lattice_trace_gram(const QuaternionOrder& O, const Lattice& L) {
    return transformed_gram(L, O.trace_gram(), "trace gram");
}

IntMatrix lattice_nrd_gram(const QuaternionOrder& O, const Lattice& L, int c) {
    return transformed_gram(L, O.nrd_gram(c), "nrd gram");
}

Ideal lattice_norm_ideal(const QuaternionOrder& O, const Lattice& L) {
    const BaseField& F = O.field();
    std::vector<FieldElement> gens;
    std::size_t r = L.rows.size();
    std::vector<IntMatrix> grams;
    for (int c = 0; c < F.degree(); ++c) grams.push_back(lattice_nrd_gram(O, L, c));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = k; l < r; ++l) {
            // nrd(b_k) on the diagonal, trd(b_k conj b_l) off it.
            Rational c0 = grams[0][k][l], c1 = F.degree() == 2 ? Rational(grams[1][k][l]) : Rational(0);
            if (k == l) {
                c0 /= 2;
                c1 /= 2;
            }
            if (c0 != 0 || c1 != 0) gens.push_back(F.element(c0, c1));
        }
    return arith::ideal_from_generators(F, gens);
}

namespace {

OElement sign_canonical(OElement x) {
    x = canonical(std::move(x));
    for (const auto& c : x.c) {
        if (c == 0) continue;
        if (c < 0)
            for (auto& z : x.c) z = -z;
        break;
    }
    return x;
}

bool oelement_less(const OElement& x, const OElement& y) {
    if (x.den != y.den) return x.den < y.den;
    return x.c < y.c;
}

}  // namespace

std::vector<OElement> unit_group(const QuaternionOrder& O, const Lattice& Lord) {
    require(O.algebra().totally_definite(), "unit_group: algebra is not totally definite");
    const BaseField& F = O.field();
    GramLattice G(lattice_trace_gram(O, Lord));
    std::vector<OElement> units;
    for (const auto& v : arith::short_vectors(G, 2L * F.degree())) {
        OElement x{IntVector(O.rank(), 0), Lord.den};
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0)
                for (std::size_t c = 0; c < O.rank(); ++c) x.c[c] += Lord.rows[k][c] * v[k];
        if (O.nrd(x) != F.one()) continue;
        units.push_back(sign_canonical(x));
    }
    OElement id = sign_canonical({O.one(), 1});
    std::sort(units.begin(), units.end(), oelement_less);
    auto it = std::find(units.begin(), units.end(), id);
    verify(it != units.end(), "unit_group: identity missing from enumeration");
    std::rotate(units.begin(), it, it + 1);
    std::set<std::pair<Integer, IntVector>> members;
    for (const auto& u : units) members.insert({u.den, u.c});
    for (const auto& u : units)
        for (const auto& w : units) {
            OElement p = sign_canonical(O.mul(u, w));
            verify(members.count({p.den, p.c}) == 1, "unit_group: not closed under multiplication");
        }
    return units;
}

std::vector<long> theta_fingerprint(const QuaternionOrder& O, const Lattice& Lord, long count) {
    require(count >= 1, "theta_fingerprint: count must be positive");
    GramLattice G(lattice_trace_gram(O, Lord));
    auto r = arith::representation_numbers(G, 2 * count - 1);
    std::vector<long> theta(count, 0);
    for (long n = 0; n < count; ++n) theta[n] = r[2 * n];
    return theta;
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
}

std::vector<Rational> parse_rationals(const std::string& text, std::size_t pos) {
    std::istringstream in(text);
    std::string tok;
    std::vector<Rational> out;
    while (in >> tok) {
        Rational q;
        if (q.set_str(tok, 10) != 0) throw ParseError("algebra config: bad rational '" + tok + "'", pos);
        if (q.get_den() == 0) throw ParseError("algebra config: zero denominator", pos);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

}  // namespace

AlgebraConfig parse_algebra_config(const std::string& text) {
    AlgebraConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t offset = 0;
    bool in_basis = false, have_field = false;
    while (std::getline(in, line)) {
        std::size_t pos = offset;
        offset += line.size() + 1;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (in_basis) {
            cfg.basis.push_back(parse_rationals(line, pos));
            continue;
        }
        if (line == "basis") {
            in_basis = true;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("algebra config: expected key = value", pos);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "field") {
            try {
                cfg.field_d = std::stol(value);
            } catch (const std::exception&) {
                throw ParseError("algebra config: bad field", pos);
            }
            have_field = true;
        } else if (key == "a") {
            cfg.a = parse_rationals(value, pos);
        } else if (key == "b") {
            cfg.b = parse_rationals(value, pos);
        } else if (key == "ramified") {
            std::istringstream vs(value);
            std::string label;
            while (vs >> label) cfg.ramified.push_back(label);
        } else {
            throw ParseError("algebra config: unknown key '" + key + "'", pos);
        }
    }
    if (!have_field) throw ParseError("algebra config: missing field", offset);
    if (cfg.a.empty() || cfg.b.empty()) throw ParseError("algebra config: missing a or b", offset);
    if (!in_basis) throw ParseError("algebra config: missing basis", offset);
    return cfg;
}

AlgebraConfig read_algebra_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open algebra config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra_config(ss.str());
}

LoadedAlgebra load_algebra_config(const BaseField& F, const AlgebraConfig& cfg) {
    using K = OrderError::Kind;
    if (arith::make_field(cfg.field_d).discriminant() != F.discriminant())
        throw OrderError(K::FieldMismatch, "algebra config is for a different field");
    auto elt = [&](const std::vector<Rational>& c) {
        require(static_cast<int>(c.size()) == F.degree(), "algebra config: a and b need one coordinate per degree");
        return F.element(c[0], F.degree() == 2 ? c[1] : Rational(0));
    };
    QuaternionAlgebra A(F, elt(cfg.a), elt(cfg.b));
    if (!A.totally_definite()) throw OrderError(K::WrongRamification, "algebra is not totally definite");
    std::vector<PrimeIdeal> ram = A.finite_ramification();
    std::vector<std::string> labels;
    for (const auto& P : ram) labels.push_back(P.label());
    std::vector<std::string> declared = cfg.ramified;
    std::sort(declared.begin(), declared.end());
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != declared) {
        std::string got;
        for (const auto& l : labels) got += " " + l;
        throw OrderError(K::WrongRamification, "algebra ramifies at {" + got + " } which differs from the declared set");
    }
    // Ramification at an even number of places overall (Hilbert reciprocity).
    verify((ram.size() + F.degree()) % 2 == 0, "ramification set violates reciprocity");

    QuaternionOrder O(A, cfg.basis);
    Ideal disc = arith::unit_ideal();
    for (const auto& P : ram) disc = arith::multiply(F, disc, P.ideal);
    Integer dF = F.discriminant();
    Integer expected = dF * dF * dF * dF * disc.norm() * disc.norm();
    Integer got = O.gram_determinant();
    if (got != expected) {
        Integer reduced = isqrt(got) / (dF * dF);
        throw OrderError(K::NotMaximal, "order is not maximal: reduced discriminant has norm " + reduced.get_str() +
                                            ", expected " + disc.norm().get_str());
    }
    return {A, O, ram, disc};
}

}  // namespace hmf::quat
