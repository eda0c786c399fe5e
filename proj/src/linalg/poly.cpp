#include "hmf/linalg/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

namespace hmf::linalg {

IntPolynomial trim(IntPolynomial f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

QPolynomial trim(QPolynomial f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

QPolynomial to_q(const IntPolynomial& f) {
    QPolynomial g;
    for (const auto& c : f) g.emplace_back(c);
    return trim(g);
}

Integer content(const IntPolynomial& f) {
    Integer g = 0;
    for (const auto& c : f) g = hmf::gcd(g, c);
    return g;
}

IntPolynomial primitive_part(const IntPolynomial& f) {
    IntPolynomial g = trim(f);
    if (g.empty()) return g;
    Integer c = content(g);
    if (g.back() < 0) c = -c;
    for (auto& x : g) x /= c;
    return g;
}

IntPolynomial primitive_part(const QPolynomial& f) {
    QPolynomial g = trim(f);
    Integer den = 1;
    for (const auto& c : g) den = hmf::lcm(den, c.get_den());
    IntPolynomial h;
    for (const auto& c : g) h.push_back(Rational(c * den).get_num());
    return primitive_part(h);
}

QPolynomial add(const QPolynomial& f, const QPolynomial& g) {
    QPolynomial h(std::max(f.size(), g.size()), Rational(0));
    for (std::size_t i = 0; i < f.size(); ++i) h[i] += f[i];
    for (std::size_t i = 0; i < g.size(); ++i) h[i] += g[i];
    return trim(h);
}

QPolynomial sub(const QPolynomial& f, const QPolynomial& g) {
    QPolynomial h(std::max(f.size(), g.size()), Rational(0));
    for (std::size_t i = 0; i < f.size(); ++i) h[i] += f[i];
    for (std::size_t i = 0; i < g.size(); ++i) h[i] -= g[i];
    return trim(h);
}

QPolynomial mul(const QPolynomial& f, const QPolynomial& g) {
    if (f.empty() || g.empty()) return {};
    QPolynomial h(f.size() + g.size() - 1, Rational(0));
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    return trim(h);
}

IntPolynomial mul(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.empty() || g.empty()) return {};
    IntPolynomial h(f.size() + g.size() - 1, Integer(0));
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    return trim(h);
}

QPolynomial derivative(const QPolynomial& f) {
    QPolynomial d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
    return trim(d);
}

std::pair<QPolynomial, QPolynomial> divmod(const QPolynomial& f, const QPolynomial& g) {
    require(!trim(g).empty(), "polynomial division by zero");
    QPolynomial r = trim(f);
    const QPolynomial d = trim(g);
    if (r.size() < d.size()) return {{}, r};
    QPolynomial q(r.size() - d.size() + 1, Rational(0));
    const Rational inv = 1 / d.back();
    while (r.size() >= d.size()) {
        const std::size_t shift = r.size() - d.size();
        const Rational c = r.back() * inv;
        q[shift] = c;
        for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
        r.pop_back();
        r = trim(r);
    }
    return {trim(q), r};
}

QPolynomial monic(const QPolynomial& f) {
    QPolynomial g = trim(f);
    if (g.empty()) return g;
    const Rational inv = 1 / g.back();
    for (auto& c : g) c *= inv;
    return g;
}

QPolynomial gcd(const QPolynomial& f, const QPolynomial& g) {
    QPolynomial a = trim(f), b = trim(g);
    while (!b.empty()) {
        QPolynomial r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

bool is_squarefree(const QPolynomial& f) { return degree(gcd(f, derivative(f))) == 0; }

QPolynomial radical(const QPolynomial& f) {
    QPolynomial g = monic(f);
    if (g.size() <= 1) return g;
    return monic(divmod(g, gcd(g, derivative(g))).first);
}

Rational evaluate(const QPolynomial& f, const Rational& x) {
    Rational v = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) v = v * x + *it;
    return v;
}

QMatrix evaluate(const QPolynomial& f, const QMatrix& A) {
    const std::size_t n = rows(A);
    QMatrix V = zero_matrix(n, n);
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        V = V * A;
        for (std::size_t i = 0; i < n; ++i) V[i][i] += *it;
    }
    return V;
}

namespace {

// ---- characteristic polynomials ------------------------------------------

std::vector<std::uint64_t> charpoly_mod(const ZMatrix& A, std::uint64_t p) {
    const std::size_t n = A.size();
    std::vector<std::vector<std::uint64_t>> H(n, std::vector<std::uint64_t>(n));
    const Integer P(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H[i][j] = mod_floor(A[i][j], P).get_ui();
    auto inv = [p](std::uint64_t a) { return static_cast<std::uint64_t>(inverse_mod(static_cast<std::int64_t>(a), static_cast<std::int64_t>(p))); };
    // Similarity reduction to upper Hessenberg form.
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t piv = j + 1;
        while (piv < n && H[piv][j] == 0) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            std::swap(H[piv], H[j + 1]);
            for (std::size_t r = 0; r < n; ++r) std::swap(H[r][piv], H[r][j + 1]);
        }
        const std::uint64_t pinv = inv(H[j + 1][j]);
        for (std::size_t k = j + 2; k < n; ++k) {
            if (H[k][j] == 0) continue;
            const std::uint64_t u = H[k][j] * pinv % p;
            for (std::size_t c = 0; c < n; ++c) H[k][c] = (H[k][c] + (p - u) * H[j + 1][c]) % p;
            for (std::size_t r = 0; r < n; ++r) H[r][j + 1] = (H[r][j + 1] + u * H[r][k]) % p;
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_i h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    std::vector<std::vector<std::uint64_t>> P_(n + 1);
    P_[0] = {1};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<std::uint64_t> cur(m + 1, 0);
        const auto& prev = P_[m - 1];
        for (std::size_t k = 0; k < prev.size(); ++k) {
            cur[k + 1] = (cur[k + 1] + prev[k]) % p;
            cur[k] = (cur[k] + (p - H[m - 1][m - 1]) * prev[k]) % p;
        }
        std::uint64_t prod = 1;
        for (std::size_t i = m - 1; i >= 1; --i) {
            prod = prod * H[i][i - 1] % p;
            if (prod == 0) break;
            const std::uint64_t coef = H[i - 1][m - 1] * prod % p;
            const auto& q = P_[i - 1];
            for (std::size_t k = 0; k < q.size(); ++k) cur[k] = (cur[k] + (p - coef) * q[k]) % p;
        }
        P_[m] = std::move(cur);
    }
    return P_[n];
}

}  // namespace

IntPolynomial charpoly(const ZMatrix& A) {
    const std::size_t n = A.size();
    for (const auto& row : A) require(row.size() == n, "charpoly: matrix not square");
    if (n == 0) return {Integer(1)};
    // Every eigenvalue is at most the maximal absolute row sum R, so each
    // coefficient is at most (1 + R)^n in absolute value.
    Integer R = 0;
    for (const auto& row : A) {
        Integer s = 0;
        for (const auto& x : row) s += abs(x);
        R = std::max(R, s);
    }
    Integer bound;
    mpz_pow_ui(bound.get_mpz_t(), Integer(R + 1).get_mpz_t(), n);
    bound = 2 * bound + 1;

    IntPolynomial value(n + 1, Integer(0));
    Integer modulus = 1;
    std::uint64_t p = (1ULL << 31);
    while (modulus <= bound) {
        do --p;
        while (!is_prime(Integer(static_cast<unsigned long>(p))));
        const auto cp = charpoly_mod(A, p);
        const Integer P(static_cast<unsigned long>(p));
        // CRT: x = value mod modulus, x = cp mod P.
        Integer inv;
        Integer mm = mod_floor(modulus, P);
        mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), P.get_mpz_t());
        for (std::size_t k = 0; k <= n; ++k) {
            Integer diff = mod_floor(Integer(static_cast<unsigned long>(cp[k])) - value[k], P);
            value[k] += modulus * mod_floor(diff * inv, P);
        }
        modulus *= P;
    }
    for (auto& c : value)
        if (2 * c > modulus) c -= modulus;
    verify(value[n] == 1, "charpoly: leading coefficient not 1");

    // Cayley-Hamilton on a fixed pseudo-random vector.
    std::mt19937 rng(20240917);
    ZVector v(n);
    for (auto& x : v) x = static_cast<long>(rng() % 19) - 9;
    ZVector acc(n, Integer(0));
    for (std::size_t k = n + 1; k-- > 0;) {
        ZVector next(n, Integer(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (A[i][j] != 0 && acc[j] != 0) next[i] += A[i][j] * acc[j];
        for (std::size_t i = 0; i < n; ++i) next[i] += value[k] * v[i];
        acc = std::move(next);
    }
    for (const auto& x : acc) verify(x == 0, "charpoly: Cayley-Hamilton check failed");
    return value;
}

QPolynomial charpoly(const QMatrix& A) {
    const std::size_t n = rows(A);
    Integer d = 1;
    for (const auto& row : A) {
        require(row.size() == n, "charpoly: matrix not square");
        for (const auto& x : row) d = hmf::lcm(d, x.get_den());
    }
    ZMatrix Z(n, ZVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Z[i][j] = Rational(A[i][j] * d).get_num();
    const IntPolynomial c = charpoly(Z);
    // det(x - A) = d^{-n} det(d x - d A)
    QPolynomial out(n + 1);
    Integer dk = 1;  // d^{n-k}
    for (std::size_t k = n + 1; k-- > 0;) {
        out[k] = Rational(c[k], dk);
        out[k].canonicalize();
        dk *= d;
    }
    return out;
}

namespace {

// ---- polynomials modulo m ------------------------------------------------

using ZPoly = IntPolynomial;

ZPoly reduce(ZPoly f, const Integer& m) {
    for (auto& c : f) c = mod_floor(c, m);
    return trim(f);
}

ZPoly zsub(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly h(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) h[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) h[i] -= b[i];
    return reduce(h, m);
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly h(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) h[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) h[i] += b[i];
    return reduce(h, m);
}

ZPoly zmul(const ZPoly& a, const ZPoly& b, const Integer& m) { return reduce(mul(a, b), m); }

Integer inverse_mod_big(const Integer& a, const Integer& m) {
    Integer inv;
    const Integer r = mod_floor(a, m);
    verify(mpz_invert(inv.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t()) != 0, "leading coefficient not invertible");
    return inv;
}

// Division by g whose leading coefficient is a unit mod m.
std::pair<ZPoly, ZPoly> zdivmod(const ZPoly& f, const ZPoly& g, const Integer& m) {
    ZPoly r = reduce(f, m);
    const ZPoly d = reduce(g, m);
    verify(!d.empty(), "modular division by zero");
    if (r.size() < d.size()) return {{}, r};
    const Integer inv = inverse_mod_big(d.back(), m);
    ZPoly q(r.size() - d.size() + 1, Integer(0));
    while (r.size() >= d.size()) {
        const std::size_t shift = r.size() - d.size();
        const Integer c = mod_floor(r.back() * inv, m);
        q[shift] = c;
        for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] = mod_floor(r[shift + i] - c * d[i], m);
        r = trim(r);
    }
    return {trim(q), r};
}

ZPoly zmonic(const ZPoly& f, const Integer& m) {
    ZPoly g = reduce(f, m);
    if (g.empty()) return g;
    const Integer inv = inverse_mod_big(g.back(), m);
    for (auto& c : g) c = mod_floor(c * inv, m);
    return g;
}

ZPoly zgcd(ZPoly a, ZPoly b, const Integer& p) {
    a = reduce(a, p);
    b = reduce(b, p);
    while (!b.empty()) {
        ZPoly r = zdivmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return zmonic(a, p);
}

// s a + t b = 1 mod p for coprime a, b.
void zxgcd(const ZPoly& a, const ZPoly& b, const Integer& p, ZPoly& s, ZPoly& t) {
    ZPoly r0 = reduce(a, p), r1 = reduce(b, p);
    ZPoly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        auto [q, r] = zdivmod(r0, r1, p);
        ZPoly s2 = zsub(s0, zmul(q, s1, p), p);
        ZPoly t2 = zsub(t0, zmul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    verify(r0.size() == 1, "zxgcd: inputs not coprime");
    const Integer inv = inverse_mod_big(r0[0], p);
    s = reduce(s0, p);
    t = reduce(t0, p);
    for (auto& c : s) c = mod_floor(c * inv, p);
    for (auto& c : t) c = mod_floor(c * inv, p);
}

ZPoly zpowmod(ZPoly base, Integer e, const ZPoly& f, const Integer& p) {
    ZPoly result = {1};
    base = zdivmod(base, f, p).second;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = zdivmod(zmul(result, base, p), f, p).second;
        e >>= 1;
        if (e > 0) base = zdivmod(zmul(base, base, p), f, p).second;
    }
    return result;
}

void equal_degree(const ZPoly& g, long d, const Integer& p, std::mt19937& rng, std::vector<ZPoly>& out) {
    if (degree(g) == d) {
        out.push_back(g);
        return;
    }
    Integer pd;
    mpz_pow_ui(pd.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d));
    const Integer e = (pd - 1) / 2;
    for (;;) {
        ZPoly a(static_cast<std::size_t>(degree(g)));
        for (auto& c : a) c = Integer(static_cast<unsigned long>(rng())) % p;
        a = trim(a);
        if (degree(a) < 1) continue;
        ZPoly b = zsub(zpowmod(a, e, g, p), {1}, p);
        ZPoly h = zgcd(b, g, p);
        if (degree(h) > 0 && degree(h) < degree(g)) {
            equal_degree(h, d, p, rng, out);
            equal_degree(zdivmod(g, h, p).first, d, p, rng, out);
            return;
        }
    }
}

// Monic irreducible factors of a monic squarefree polynomial mod an odd prime.
std::vector<ZPoly> factor_mod_p(ZPoly f, const Integer& p) {
    std::mt19937 rng(7919);
    std::vector<ZPoly> out;
    const ZPoly x = {0, 1};
    ZPoly h = zdivmod(x, f, p).second;
    for (long d = 1; degree(f) >= 2 * d; ++d) {
        h = zpowmod(h, p, f, p);
        ZPoly g = zgcd(zsub(h, x, p), f, p);
        if (degree(g) > 0) {
            equal_degree(g, d, p, rng, out);
            f = zdivmod(f, g, p).first;
            h = zdivmod(h, f, p).second;
        }
    }
    if (degree(f) > 0) out.push_back(zmonic(f, p));
    std::sort(out.begin(), out.end(), [](const ZPoly& a, const ZPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

// Lifts f = g h mod p (all monic) to f = g h mod p^(2^k) >= target.
void hensel_pair(const ZPoly& f, ZPoly& g, ZPoly& h, const Integer& p, const Integer& target, Integer& modulus) {
    ZPoly s, t;
    zxgcd(g, h, p, s, t);  // s g + t h = 1
    // normalize to deg s < deg h, deg t < deg g
    {
        auto [q, r] = zdivmod(s, h, p);
        s = r;
        t = zadd(t, zmul(q, g, p), p);
    }
    Integer m = p;
    while (m <= target) {
        const Integer m2 = m * m;
        ZPoly e = zsub(f, zmul(g, h, m2), m2);
        auto [q, r] = zdivmod(zmul(s, e, m2), h, m2);
        ZPoly g2 = zadd(zadd(g, zmul(t, e, m2), m2), zmul(q, g, m2), m2);
        ZPoly h2 = zadd(h, r, m2);
        ZPoly b = zsub(zadd(zmul(s, g2, m2), zmul(t, h2, m2), m2), {1}, m2);
        auto [c, d] = zdivmod(zmul(s, b, m2), h2, m2);
        s = zsub(s, d, m2);
        t = zsub(zsub(t, zmul(t, b, m2), m2), zmul(c, g2, m2), m2);
        g = std::move(g2);
        h = std::move(h2);
        m = m2;
    }
    modulus = m;
}

// f monic mod p^k; factors monic mod p with product f mod p.
void hensel_multi(const ZPoly& f, const std::vector<ZPoly>& factors, std::size_t lo, std::size_t hi, const Integer& p,
                  const Integer& target, std::vector<ZPoly>& lifted, Integer& modulus) {
    if (hi - lo == 1) {
        lifted[lo] = f;
        return;
    }
    const std::size_t mid = (lo + hi) / 2;
    ZPoly g = {1}, h = {1};
    for (std::size_t i = lo; i < mid; ++i) g = zmul(g, factors[i], p);
    for (std::size_t i = mid; i < hi; ++i) h = zmul(h, factors[i], p);
    hensel_pair(f, g, h, p, target, modulus);
    hensel_multi(g, factors, lo, mid, p, target, lifted, modulus);
    hensel_multi(h, factors, mid, hi, p, target, lifted, modulus);
}

ZPoly symmetric(ZPoly f, const Integer& m) {
    for (auto& c : f) {
        c = mod_floor(c, m);
        if (2 * c > m) c -= m;
    }
    return trim(f);
}

// Exact division over Z, if g divides f.
std::optional<IntPolynomial> divide_exact(const IntPolynomial& f, const IntPolynomial& g) {
    auto [q, r] = divmod(to_q(f), to_q(g));
    if (!r.empty()) return std::nullopt;
    IntPolynomial out;
    for (const auto& c : q) {
        if (c.get_den() != 1) return std::nullopt;
        out.push_back(c.get_num());
    }
    return out;
}

// Irreducible factors of a primitive squarefree polynomial of degree >= 1.
std::vector<IntPolynomial> factor_squarefree(const IntPolynomial& f) {
    const long n = degree(f);
    if (n == 1) return {f};
    const Integer lc = f.back();
    // Choose, among the first good primes, one giving the fewest factors.
    std::vector<ZPoly> best;
    Integer best_p = 0;
    int tried = 0;
    for (Integer p = 3; tried < 6; ++p) {
        if (!is_prime(p) || lc % p == 0) continue;
        ZPoly fp = zmonic(f, p);
        ZPoly dp;
        for (std::size_t i = 1; i < fp.size(); ++i) dp.push_back(fp[i] * static_cast<long>(i));
        dp = reduce(dp, p);
        if (dp.empty() || degree(zgcd(fp, dp, p)) != 0) continue;
        ++tried;
        auto fac = factor_mod_p(fp, p);
        if (best_p == 0 || fac.size() < best.size()) {
            best = std::move(fac);
            best_p = p;
        }
        if (best.size() == 1) break;
    }
    if (best.size() == 1) return {f};

    // Mignotte-style bound: factor coefficients are at most 2^n |f|_2.
    Integer norm2sq = 0;
    for (const auto& c : f) norm2sq += c * c;
    Integer bound = isqrt(norm2sq) + 1;
    bound <<= static_cast<unsigned long>(n);
    bound = 2 * abs(lc) * bound;

    const Integer& p = best_p;
    Integer M = p;
    while (M <= bound) M *= M;
    std::vector<ZPoly> lifted(best.size());
    Integer modulus = p;
    const ZPoly fm = zmonic(f, M);
    hensel_multi(fm, best, 0, best.size(), p, bound, lifted, modulus);
    verify(modulus == M, "hensel lifting modulus mismatch");

    std::vector<IntPolynomial> out;
    IntPolynomial rest = f;
    std::vector<ZPoly> pool = lifted;
    std::size_t s = 1;
    while (2 * s <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        for (;;) {
            ZPoly cand = {rest.back()};
            for (auto i : idx) cand = zmul(cand, pool[i], M);
            IntPolynomial g = primitive_part(symmetric(cand, M));
            if (auto q = divide_exact(rest, g)) {
                out.push_back(g);
                rest = *q;
                std::vector<ZPoly> next;
                for (std::size_t i = 0; i < pool.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), i) == idx.end()) next.push_back(pool[i]);
                pool = std::move(next);
                found = true;
                break;
            }
            // next combination
            std::size_t k = s;
            while (k > 0 && idx[k - 1] == pool.size() - s + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (degree(rest) > 0) out.push_back(primitive_part(rest));
    return out;
}

bool poly_less(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

}  // namespace

std::vector<std::pair<IntPolynomial, int>> factor(const IntPolynomial& f0) {
    const IntPolynomial f = primitive_part(f0);
    require(!f.empty(), "factor: zero polynomial");
    std::vector<std::pair<IntPolynomial, int>> out;
    if (degree(f) == 0) return out;
    // Yun's squarefree decomposition.
    QPolynomial a = to_q(f);
    QPolynomial d = derivative(a);
    QPolynomial g = gcd(a, d);
    QPolynomial b = divmod(a, g).first;
    QPolynomial c = divmod(d, g).first;
    QPolynomial e = sub(c, derivative(b));
    for (int i = 1; degree(b) > 0; ++i) {
        QPolynomial ai = gcd(b, e);
        if (degree(ai) > 0)
            for (auto& h : factor_squarefree(primitive_part(ai))) out.emplace_back(h, i);
        b = divmod(b, ai).first;
        c = divmod(e, ai).first;
        e = sub(c, derivative(b));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return poly_less(x.first, y.first);
        return x.second < y.second;
    });
    IntPolynomial prod = {1};
    for (const auto& [h, m] : out)
        for (int k = 0; k < m; ++k) prod = mul(prod, h);
    verify(primitive_part(prod) == f, "factor: product of factors does not reproduce input");
    return out;
}

namespace {

int sign_at(const QPolynomial& f, const std::optional<Rational>& x, int infinity) {
    if (f.empty()) return 0;
    if (x) return sgn(evaluate(f, *x));
    const int s = sgn(f.back());
    if (infinity > 0 || degree(f) % 2 == 0) return s;
    return -s;
}

long variations(const std::vector<QPolynomial>& seq, const std::optional<Rational>& x, int infinity) {
    long v = 0;
    int last = 0;
    for (const auto& f : seq) {
        const int s = sign_at(f, x, infinity);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

}  // namespace

long count_real_roots(const QPolynomial& f0, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    const QPolynomial f = trim(f0);
    require(!f.empty(), "count_real_roots: zero polynomial");
    if (degree(f) == 0) return 0;
    std::vector<QPolynomial> seq = {f, derivative(f)};
    while (!seq.back().empty() && degree(seq.back()) > 0) {
        QPolynomial r = divmod(seq[seq.size() - 2], seq.back()).second;
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        seq.push_back(r);
    }
    return variations(seq, lo, -1) - variations(seq, hi, +1);
}

QPolynomial field_element_charpoly(const IntPolynomial& g, const QVector& phi) {
    const long d = degree(g);
    require(d >= 1, "field_element_charpoly: constant modulus");
    const QPolynomial G = to_q(g);
    QMatrix M = zero_matrix(d, d);
    QPolynomial basis = {Rational(1)};
    const QPolynomial x = {Rational(0), Rational(1)};
    for (long k = 0; k < d; ++k) {
        const QPolynomial col = divmod(mul(trim(phi), basis), G).second;
        for (std::size_t r = 0; r < col.size(); ++r) M[r][k] = col[r];
        basis = mul(basis, x);
    }
    return charpoly(M);
}

Integer quadratic_discriminant(const IntPolynomial& g) {
    require(degree(g) == 2, "quadratic_discriminant: degree must be 2");
    return g[1] * g[1] - 4 * g[0] * g[2];
}

std::string to_string(const IntPolynomial& f) {
    if (f.empty()) return "0";
    std::string out;
    for (long k = degree(f); k >= 0; --k) {
        const Integer& c = f[k];
        if (c == 0) continue;
        const Integer a = abs(c);
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (a != 1 || k == 0) out += a.get_str();
        if (k >= 1) out += "x";
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
}

}  // namespace hmf::linalg
