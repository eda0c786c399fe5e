#include "hmf/arith/ideal.hpp"

#include "hmf/arith/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hmf::arith {

bool Ideal::operator<(const Ideal& o) const {
    Integer n1 = norm(), n2 = o.norm();
    if (n1 != n2) return n1 < n2;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return d < o.d;
}

std::string Ideal::str() const {
    std::ostringstream os;
    os << "[" << norm() << "," << a << "," << b << "," << d << "]";
    return os.str();
}

std::string PrimeIdeal::label() const {
    if (residue_degree == 2 || field_degree == 1) return norm().get_str();
    return norm().get_str() + "." + root.get_str();
}

bool PrimeIdeal::operator<(const PrimeIdeal& o) const {
    if (norm() != o.norm()) return norm() < o.norm();
    if (residue_degree != o.residue_degree) return residue_degree < o.residue_degree;
    return root < o.root;
}

Ideal unit_ideal() { return Ideal{}; }

Ideal ideal_from_generators(const BaseField& F, std::span<const FieldElement> gens) {
    if (F.degree() == 1) {
        Integer g = 0;
        for (const auto& x : gens) {
            require(x.is_integral(), "ideal_from_generators: non-integral generator");
            g = gcd(g, x.a().get_num());
        }
        require(g != 0, "ideal_from_generators: zero ideal");
        return Ideal{g, 0, 1};
    }
    IntMatrix rows;
    FieldElement w = F.omega();
    for (const auto& x : gens) {
        require(x.is_integral(), "ideal_from_generators: non-integral generator");
        FieldElement xw = x * w;
        rows.push_back({x.a().get_num(), x.b().get_num()});
        rows.push_back({xw.a().get_num(), xw.b().get_num()});
    }
    IntMatrix h = hnf_rows(rows, 2);
    require(h.size() == 2, "ideal_from_generators: zero ideal");
    return Ideal{h[0][0], h[1][0], h[1][1]};
}

Ideal principal_ideal(const BaseField& F, const FieldElement& x) {
    FieldElement g[1] = {x};
    return ideal_from_generators(F, g);
}

std::vector<FieldElement> basis(const BaseField& F, const Ideal& I) {
    if (F.degree() == 1) return {F.element(Rational(I.a))};
    return {F.element(Rational(I.a), 0), F.element(Rational(I.b), Rational(I.d))};
}

Ideal multiply(const BaseField& F, const Ideal& I, const Ideal& J) {
    if (F.degree() == 1) return Ideal{I.a * J.a, 0, 1};
    auto bi = basis(F, I), bj = basis(F, J);
    std::vector<FieldElement> gens;
    for (const auto& x : bi)
        for (const auto& y : bj) gens.push_back(x * y);
    return ideal_from_generators(F, gens);
}

Ideal add(const BaseField& F, const Ideal& I, const Ideal& J) {
    auto gens = basis(F, I);
    auto bj = basis(F, J);
    gens.insert(gens.end(), bj.begin(), bj.end());
    return ideal_from_generators(F, gens);
}

Ideal power(const BaseField& F, const Ideal& I, int e) {
    Ideal r = unit_ideal();
    for (int k = 0; k < e; ++k) r = multiply(F, r, I);
    return r;
}

Ideal conjugate(const BaseField& F, const Ideal& I) {
    if (F.degree() == 1) return I;
    auto b = basis(F, I);
    for (auto& x : b) x = x.conjugate();
    return ideal_from_generators(F, b);
}

std::pair<Integer, Integer> reduce(const Ideal& I, const Integer& x0, const Integer& x1) {
    Integer q = floor_div(x1, I.d);
    Integer r1 = x1 - q * I.d;
    Integer r0 = mod_floor(x0 - q * I.b, I.a);
    return {r0, r1};
}

bool contains(const BaseField& F, const Ideal& I, const FieldElement& x) {
    (void)F;
    if (!x.is_integral()) return false;
    auto [r0, r1] = reduce(I, x.a().get_num(), x.b().get_num());
    return r0 == 0 && r1 == 0;
}

bool contains(const BaseField& F, const Ideal& I, const Ideal& J) {
    for (const auto& x : basis(F, J))
        if (!contains(F, I, x)) return false;
    return true;
}

Ideal divide_exact(const BaseField& F, const Ideal& I, const Ideal& J) {
    if (F.degree() == 1) {
        require(I.a % J.a == 0, "divide_exact: divisor does not divide");
        return Ideal{I.a / J.a, 0, 1};
    }
    Ideal P = multiply(F, I, conjugate(F, J));
    Integer n = J.norm();
    auto gens = basis(F, P);
    for (auto& g : gens) {
        g = g.with(g.a() / n, g.b() / n);
        require(g.is_integral(), "divide_exact: divisor does not divide");
    }
    Ideal out = ideal_from_generators(F, gens);
    verify(multiply(F, out, J) == I, "divide_exact: product check failed");
    return out;
}

std::vector<PrimeIdeal> primes_above(const BaseField& F, const Integer& p) {
    require(is_prime(p), "primes_above: " + p.get_str() + " is not prime");
    if (F.degree() == 1) return {PrimeIdeal{Ideal{p, 0, 1}, p, 1, false, 0, 1}};
    std::vector<Integer> roots;
    for (Integer r = 0; r < p; ++r)
        if (mod_floor(r * r - F.omega_t() * r - F.omega_s(), p) == 0) roots.push_back(r);
    std::vector<PrimeIdeal> out;
    if (roots.empty()) {
        out.push_back(PrimeIdeal{Ideal{p, 0, p}, p, 2, false, 0, 2});
        return out;
    }
    bool ramified = roots.size() == 1;
    for (const auto& r : roots) {
        Ideal I{p, mod_floor(-r, p), 1};
        out.push_back(PrimeIdeal{I, p, 1, ramified, r, 2});
    }
    std::sort(out.begin(), out.end());
    return out;
}

int valuation(const BaseField& F, const Ideal& N, const PrimeIdeal& P) {
    require(N.norm() != 0, "valuation: zero ideal");
    int v = 0;
    Ideal Pk = P.ideal;
    while (N.norm() % Pk.norm() == 0 && contains(F, Pk, N)) {
        ++v;
        Pk = multiply(F, Pk, P.ideal);
    }
    return v;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const BaseField& F, const Ideal& N) {
    require(N.norm() != 0, "factor_ideal: zero ideal");
    std::vector<std::pair<PrimeIdeal, int>> out;
    for (const auto& [p, e] : factor_integer(N.norm())) {
        (void)e;
        for (const auto& P : primes_above(F, p)) {
            int v = valuation(F, N, P);
            if (v > 0) out.emplace_back(P, v);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Ideal check = unit_ideal();
    for (const auto& [P, v] : out) check = multiply(F, check, power(F, P.ideal, v));
    verify(check == N, "factor_ideal: re-multiplication does not reproduce " + N.str());
    return out;
}

std::vector<Ideal> ideals_of_norm(const BaseField& F, long m) {
    require(m >= 1, "ideals_of_norm: norm must be positive");
    if (F.degree() == 1) return {Ideal{m, 0, 1}};
    std::vector<Ideal> out;
    for (long d = 1; d * d <= m; ++d) {
        if (m % (d * d) != 0) continue;
        long ap = m / (d * d);
        for (long bp = 0; bp < ap; ++bp) {
            long cond = F.omega_s() - (F.omega_t() + bp) * bp;
            if (mod_floor(cond, ap) != 0) continue;
            out.push_back(Ideal{Integer(d * ap), Integer(d * bp), Integer(d)});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PrimeIdeal> primes_up_to(const BaseField& F, long bound) {
    std::vector<PrimeIdeal> out;
    for (long p = 2; p <= bound; ++p) {
        if (!is_prime(p)) continue;
        for (const auto& P : primes_above(F, p))
            if (P.norm() <= bound) out.push_back(P);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Ideal> divisors(const BaseField& F, const Ideal& N) {
    std::vector<Ideal> out{unit_ideal()};
    for (const auto& [P, e] : factor_ideal(F, N)) {
        std::vector<Ideal> next;
        for (const auto& D : out) {
            Ideal cur = D;
            for (int k = 0; k <= e; ++k) {
                next.push_back(cur);
                cur = multiply(F, cur, P.ideal);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FieldElement normalize_totally_positive(const BaseField& F, FieldElement g) {
    require(g.is_totally_positive(), "normalize_totally_positive: element is not totally positive");
    if (F.degree() == 1) return g;
    FieldElement u = F.totally_positive_unit();
    FieldElement ui = u.inverse();
    while ((g * u).trace() < g.trace()) g *= u;
    while ((g * ui).trace() < g.trace()) g *= ui;
    for (const auto& w : {u, ui}) {
        FieldElement h = g * w;
        if (h.trace() == g.trace() && lex_less(h, g)) g = h;
    }
    return g;
}

FieldElement totally_positive_generator(const BaseField& F, const Ideal& I) {
    if (F.degree() == 1) return F.element(Rational(I.a));
    Integer nm = I.norm();
    auto bas = basis(F, I);
    // sigma_0(x) - sigma_1(x) = v*d*sqrt(delta) for x = u*a + v*(b + d*omega).
    double delta = std::sqrt(static_cast<double>(F.omega_t() * F.omega_t() + 4 * F.omega_s()));
    double a = I.a.get_d(), dd = I.d.get_d();
    double s0 = bas[1].to_double(0);
    FieldElement g;
    bool found = false;
    for (double B = std::sqrt(nm.get_d()) + 1; !found && B < 1e9; B *= 2) {
        long vmax = static_cast<long>(std::ceil(2 * B / (dd * delta))) + 1;
        for (long v = -vmax; v <= vmax && !found; ++v) {
            long ulo = static_cast<long>(std::floor((-B - v * s0) / a)) - 1;
            long uhi = static_cast<long>(std::ceil((B - v * s0) / a)) + 1;
            for (long u = ulo; u <= uhi; ++u) {
                FieldElement x = bas[0] * F.from_int(u) + bas[1] * F.from_int(v);
                Rational n = x.norm();
                if (n == Rational(nm) || n == Rational(-nm)) {
                    g = x;
                    found = true;
                    break;
                }
            }
        }
    }
    verify(found, "totally_positive_generator: no generator found for " + I.str());
    if (g.norm() < 0) g *= F.fundamental_unit();
    if (g.sign(0) < 0) g = -g;
    verify(g.is_totally_positive(), "totally_positive_generator: sign normalization failed");
    g = normalize_totally_positive(F, g);
    verify(principal_ideal(F, g) == I, "totally_positive_generator: generator check failed");
    return g;
}

bool is_square(const BaseField& F, const FieldElement& x, FieldElement* root) {
    if (x.is_zero()) {
        if (root) *root = F.zero();
        return true;
    }
    if (F.degree() == 1) {
        Rational r;
        if (!rational_sqrt(x.a(), r)) return false;
        if (root) *root = F.element(r);
        return true;
    }
    // Write x = c0 + c1*sqrt(d) and solve (u + v*sqrt(d))^2 = x.
    const long d = F.radicand();
    Rational c0, c1;
    if (F.omega_t() == 1) {
        c0 = x.a() + x.b() / 2;
        c1 = x.b() / 2;
    } else {
        c0 = x.a();
        c1 = x.b();
    }
    auto to_field = [&](const Rational& u, const Rational& v) {
        return F.omega_t() == 1 ? F.element(u - v, 2 * v) : F.element(u, v);
    };
    std::vector<FieldElement> candidates;
    Rational r;
    if (c1 == 0) {
        if (rational_sqrt(c0, r)) candidates.push_back(to_field(r, 0));
        if (rational_sqrt(c0 / d, r)) candidates.push_back(to_field(0, r));
    } else {
        Rational n2 = c0 * c0 - c1 * c1 * d, n;
        if (rational_sqrt(n2, n)) {
            for (const Rational& u2 : {Rational((c0 + n) / 2), Rational((c0 - n) / 2)}) {
                Rational u;
                if (u2 != 0 && rational_sqrt(u2, u)) candidates.push_back(to_field(u, c1 / (2 * u)));
            }
        }
    }
    for (const auto& w : candidates) {
        if (w * w == x) {
            if (root) *root = w;
            return true;
        }
    }
    return false;
}

bool square_class_equal(const BaseField& F, const FieldElement& x, const FieldElement& y) {
    require(!x.is_zero() && !y.is_zero(), "square_class_equal: zero input");
    return is_square(F, x * y);
}

}  // namespace hmf::arith
