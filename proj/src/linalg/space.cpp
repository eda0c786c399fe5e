#include "hmf/linalg/space.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace hmf::linalg {

void HeckeSpace::add(const std::string& label, QMatrix m) {
    require(rows(m) == dim && (dim == 0 || cols(m) == dim), "HeckeSpace::add: operator " + label + " has wrong shape");
    if (!has(label)) labels.push_back(label);
    ops[label] = std::move(m);
}

const QMatrix& HeckeSpace::op(const std::string& label) const {
    auto it = ops.find(label);
    require(it != ops.end(), "HeckeSpace: no operator " + label);
    return it->second;
}

namespace {

std::size_t leading(const QVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) return i;
    return v.size();
}

QVector column(const QMatrix& A, std::size_t c) {
    QVector v(rows(A));
    for (std::size_t r = 0; r < rows(A); ++r) v[r] = A[r][c];
    return v;
}

}  // namespace

bool is_invariant(const QMatrix& T, const std::vector<QVector>& W) {
    if (W.empty()) return true;
    const std::size_t n = rows(T);
    const std::size_t k = span_basis(W, n).size();
    std::vector<QVector> all = W;
    for (const auto& w : W) all.push_back(linalg::apply(T, w));
    return span_basis(all, n).size() == k;
}

HeckeSpace quotient(const HeckeSpace& S, const std::vector<QVector>& W) {
    const auto E = span_basis(W, S.dim);
    std::vector<bool> pivot(S.dim, false);
    for (const auto& row : E) pivot[leading(row)] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < S.dim; ++c)
        if (!pivot[c]) free.push_back(c);
    auto project = [&](QVector v) {
        for (const auto& row : E) {
            const std::size_t c = leading(row);
            if (v[c] == 0) continue;
            const Rational f = v[c];
            for (std::size_t j = c; j < S.dim; ++j) v[j] -= f * row[j];
        }
        QVector out;
        for (auto c : free) out.push_back(v[c]);
        return out;
    };
    HeckeSpace Q;
    Q.dim = free.size();
    for (const auto& label : S.labels) {
        const QMatrix& T = S.op(label);
        for (const auto& w : E) {
            const QVector img = project(linalg::apply(T, w));
            verify(std::all_of(img.begin(), img.end(), [](const Rational& x) { return x == 0; }),
                   "quotient: subspace not invariant under " + label);
        }
        QMatrix M = zero_matrix(Q.dim, Q.dim);
        for (std::size_t k = 0; k < free.size(); ++k) {
            const QVector img = project(column(T, free[k]));
            for (std::size_t r = 0; r < Q.dim; ++r) M[r][k] = img[r];
        }
        Q.add(label, std::move(M));
    }
    return Q;
}

HeckeSpace restrict_to(const HeckeSpace& S, const std::vector<QVector>& W) {
    HeckeSpace R;
    R.dim = W.size();
    const QMatrix B = from_columns(W, S.dim);
    for (const auto& label : S.labels) {
        const QMatrix& T = S.op(label);
        QMatrix M = zero_matrix(R.dim, R.dim);
        for (std::size_t k = 0; k < W.size(); ++k) {
            auto x = solve(B, linalg::apply(T, W[k]));
            verify(x.has_value(), "restrict_to: subspace not invariant under " + label);
            for (std::size_t r = 0; r < R.dim; ++r) M[r][k] = (*x)[r];
        }
        R.add(label, std::move(M));
    }
    return R;
}

namespace {

// phi * psi in Q[x]/(g), both as power-basis coordinates.
QVector field_mul(const IntPolynomial& g, const QVector& phi, const QVector& psi) {
    const std::size_t d = static_cast<std::size_t>(degree(g));
    QPolynomial r = divmod(mul(trim(QPolynomial(phi)), trim(QPolynomial(psi))), to_q(g)).second;
    r.resize(d);
    return r;
}

}  // namespace

OldEigensystem old_eigensystem(const HeckeConstituent& c, const std::vector<std::string>& labels,
                               std::size_t multiplicity) {
    OldEigensystem e;
    e.expected_dim = c.dim() * multiplicity;
    std::vector<std::string> have;
    for (const auto& label : labels)
        if (c.eigenvalues.count(label)) have.push_back(label);
    require(!have.empty(), "old_eigensystem: no common operators");
    const std::size_t d = static_cast<std::size_t>(degree(c.g));

    auto combine = [&](const std::vector<std::pair<std::string, Rational>>& coeffs) {
        QVector phi(d);
        for (const auto& [label, k] : coeffs) {
            const QVector& a = c.eigenvalues.at(label);
            for (std::size_t i = 0; i < d; ++i) phi[i] += k * a[i];
        }
        return phi;
    };
    // single operators first, then 1, r, r^2, ... over all of them
    std::vector<std::vector<std::pair<std::string, Rational>>> candidates;
    for (const auto& label : have) candidates.push_back({{label, Rational(1)}});
    for (long r = 1; r <= 64; ++r) {
        std::vector<std::pair<std::string, Rational>> v;
        Rational k(1);
        for (const auto& label : have) {
            v.emplace_back(label, k);
            k *= r;
        }
        candidates.push_back(std::move(v));
    }
    QVector phi;
    for (const auto& cand : candidates) {
        phi = combine(cand);
        const QPolynomial m = radical(field_element_charpoly(c.g, phi));
        if (static_cast<std::size_t>(degree(m)) == d) {
            e.primitive = cand;
            e.minpoly = m;
            break;
        }
    }
    verify(!e.primitive.empty(), "old_eigensystem: no primitive combination among the common operators");

    // columns phi^0, ..., phi^(d-1)
    std::vector<QVector> powers;
    QVector one(d);
    one[0] = 1;
    powers.push_back(one);
    for (std::size_t i = 1; i < d; ++i) powers.push_back(field_mul(c.g, powers.back(), phi));
    const QMatrix B = from_columns(powers, d);
    for (const auto& label : have) {
        auto x = solve(B, c.eigenvalues.at(label));
        verify(x.has_value(), "old_eigensystem: eigenvalue outside Q(phi)");
        e.relations.emplace_back(label, trim(QPolynomial(*x)));
    }
    e.first_minpoly = radical(field_element_charpoly(c.g, c.eigenvalues.at(have.front())));
    return e;
}

namespace {

// f(t) w for t = sum k_i T_i, by Horner on vectors.
QVector apply_poly(const QPolynomial& f, const HeckeSpace& S,
                   const std::vector<std::pair<std::string, Rational>>& t, const QVector& w) {
    auto apply_t = [&](const QVector& v) {
        QVector out(S.dim, Rational(0));
        for (const auto& [label, k] : t) {
            const QVector img = linalg::apply(S.op(label), v);
            for (std::size_t r = 0; r < S.dim; ++r) out[r] += k * img[r];
        }
        return out;
    };
    QVector acc(S.dim, Rational(0));
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        acc = apply_t(acc);
        for (std::size_t r = 0; r < S.dim; ++r) acc[r] += *it * w[r];
    }
    return acc;
}

// {v in span W : F v = 0} where F is given by its action on vectors.
template <class Map>
std::vector<QVector> kernel_of_map(const std::vector<QVector>& W, std::size_t dim, Map F) {
    if (W.empty()) return {};
    std::vector<QVector> images;
    for (const auto& w : W) images.push_back(F(w));
    QMatrix M = zero_matrix(images.front().size(), W.size());
    for (std::size_t k = 0; k < W.size(); ++k)
        for (std::size_t r = 0; r < images[k].size(); ++r) M[r][k] = images[k][r];
    std::vector<QVector> out;
    for (const auto& sol : kernel(M)) {
        QVector v(dim, Rational(0));
        for (std::size_t k = 0; k < W.size(); ++k)
            if (sol[k] != 0)
                for (std::size_t r = 0; r < dim; ++r) v[r] += sol[k] * W[k][r];
        out.push_back(std::move(v));
    }
    return span_basis(out, dim);
}

}  // namespace

std::vector<QVector> old_subspace(const HeckeSpace& S, const OldEigensystem& e, const std::vector<QVector>* start) {
    if (e.expected_dim == 0) return {};
    require(!e.relations.empty(), "old_subspace: no relations");
    std::vector<QVector> K = start ? *start
                                   : span_basis(kernel(evaluate(e.first_minpoly, S.op(e.relations.front().first))),
                                                S.dim);
    auto check = [&](const std::string& at) {
        verify(K.size() >= e.expected_dim, "old_subspace: common eigenspace dropped below the expected dimension " +
                                               std::to_string(e.expected_dim) + " at " + at);
        return K.size() == e.expected_dim;
    };
    if (check(e.relations.front().first)) return K;
    K = kernel_of_map(K, S.dim, [&](const QVector& v) { return apply_poly(e.minpoly, S, e.primitive, v); });
    if (check("the primitive element")) return K;
    for (const auto& [label, h] : e.relations) {
        if (!S.has(label)) continue;
        K = kernel_of_map(K, S.dim, [&](const QVector& v) {
            QVector out = linalg::apply(S.op(label), v);
            const QVector hv = apply_poly(h, S, e.primitive, v);
            for (std::size_t r = 0; r < S.dim; ++r) out[r] -= hv[r];
            return out;
        });
        if (check(label)) return K;
    }
    throw VerificationError("old_subspace: common eigenspace stabilized at dimension " + std::to_string(K.size()) +
                            ", expected " + std::to_string(e.expected_dim) + " (" +
                            std::to_string(e.relations.size()) + " operators tried)");
}

OldNewSplit old_new_split(const HeckeSpace& S, const std::vector<OldEigensystem>& old, std::size_t expected_total) {
    std::vector<QVector> all;
    std::map<std::pair<std::string, QPolynomial>, std::vector<QVector>> first_kernels;
    for (const auto& e : old) {
        if (e.expected_dim == 0) continue;
        require(!e.relations.empty(), "old_new_split: eigensystem without relations");
        const auto key = std::make_pair(e.relations.front().first, e.first_minpoly);
        auto it = first_kernels.find(key);
        if (it == first_kernels.end())
            it = first_kernels.emplace(key, span_basis(kernel(evaluate(key.second, S.op(key.first))), S.dim)).first;
        auto part = old_subspace(S, e, &it->second);
        all.insert(all.end(), part.begin(), part.end());
    }
    OldNewSplit out;
    out.old_basis = span_basis(all, S.dim);
    verify(out.old_basis.size() == expected_total, "old_new_split: old space has dimension " +
                                                       std::to_string(out.old_basis.size()) + ", expected " +
                                                       std::to_string(expected_total));
    out.new_space = quotient(S, out.old_basis);
    return out;
}

namespace {

// Fixed candidate order for primitive elements.
std::vector<std::vector<long>> candidate_vectors(std::size_t m, std::size_t budget) {
    m = std::min<std::size_t>(m, 6);
    std::vector<std::vector<long>> out;
    std::vector<long> c(m, 0);
    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
        if (i == m) {
            if (left == 0) out.push_back(c);
            return;
        }
        for (long v = 0; v <= left; ++v) {
            for (long s : {1L, -1L}) {
                if (v == 0 && s == -1) continue;
                c[i] = s * v;
                rec(i + 1, left - v);
            }
        }
        c[i] = 0;
    };
    for (long w = 1; w <= 3; ++w) rec(0, w);
    auto key = [](const std::vector<long>& v) {
        long w = 0;
        std::size_t last = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            w += std::labs(v[i]);
            if (v[i] != 0) last = i;
        }
        return std::make_pair(w, last);
    };
    // the first nonzero coefficient is positive (t and -t are equivalent)
    std::vector<std::vector<long>> kept;
    for (auto& v : out) {
        for (auto x : v)
            if (x != 0) {
                if (x > 0) kept.push_back(v);
                break;
            }
    }
    auto rank = [](long x) { return x == 0 ? 0L : (x > 0 ? 2 * x - 1 : -2 * x); };
    std::stable_sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
        const auto ka = key(a), kb = key(b);
        if (ka != kb) return ka < kb;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return rank(a[i]) > rank(b[i]);
        return false;
    });
    if (kept.size() > budget) kept.resize(budget);
    return kept;
}

}  // namespace

std::vector<HeckeConstituent> decompose(const HeckeSpace& S, const std::vector<std::string>& family,
                                        std::size_t budget) {
    if (S.dim == 0) return {};
    require(!family.empty(), "decompose: empty operator family");
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const QMatrix& A = S.op(family[i]);
            const QMatrix& B = S.op(family[j]);
            verify(is_zero(A * B - B * A), "decompose: " + family[i] + " and " + family[j] + " do not commute");
        }
    for (const auto& c : candidate_vectors(family.size(), budget)) {
        QMatrix t = zero_matrix(S.dim, S.dim);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0) t = t + scale(S.op(family[k]), Rational(c[k]));
        const QPolynomial chi = charpoly(t);
        if (!is_squarefree(chi)) continue;
        std::vector<HeckeConstituent> out;
        for (const auto& [g, mult] : factor(primitive_part(chi))) {
            verify(mult == 1, "decompose: squarefree charpoly has a repeated factor");
            HeckeConstituent hc;
            hc.g = g;
            for (std::size_t k = 0; k < c.size(); ++k)
                if (c[k] != 0) hc.primitive.emplace_back(family[k], c[k]);
            hc.block = kernel(evaluate(to_q(g), t));
            verify(static_cast<long>(hc.block.size()) == degree(g), "decompose: block dimension differs from deg g");
            out.push_back(std::move(hc));
        }
        std::size_t total = 0;
        for (const auto& hc : out) total += hc.dim();
        verify(total == S.dim, "decompose: blocks do not fill the space");
        return out;
    }
    std::string msg = "decompose: no primitive element among " + std::to_string(budget) + " candidates; family:";
    for (const auto& f : family) msg += " " + f;
    throw VerificationError(msg);
}

namespace {

QMatrix primitive_matrix(const HeckeConstituent& c, const HeckeSpace& S) {
    QMatrix t = zero_matrix(S.dim, S.dim);
    for (const auto& [label, coef] : c.primitive) t = t + scale(S.op(label), Rational(coef));
    return t;
}

}  // namespace

void eigensystem(HeckeConstituent& c, const HeckeSpace& S) {
    const std::size_t d = c.dim();
    require(d >= 1, "eigensystem: empty constituent");
    const QMatrix t = primitive_matrix(c, S);
    // Krylov vectors t^k v for k < 2d - 1; the first d are a basis of the block.
    std::vector<QVector> K = {c.block[0]};
    for (std::size_t k = 1; k + 1 < 2 * d; ++k) K.push_back(linalg::apply(t, K.back()));
    const std::vector<QVector> basis(K.begin(), K.begin() + static_cast<long>(d));
    verify(span_basis(basis, S.dim).size() == d, "eigensystem: block is not cyclic under t (multiplicity one fails)");
    const QMatrix KB = from_columns(basis, S.dim);
    for (const auto& label : S.labels) {
        const QMatrix& T = S.op(label);
        auto coords = solve(KB, linalg::apply(T, K[0]));
        verify(coords.has_value(), "eigensystem: " + label + " does not preserve the block");
        // phi(t) t^j v = sum_k phi_k t^(j+k) v must equal T t^j v
        for (std::size_t j = 0; j < d; ++j) {
            QVector lhs(S.dim, Rational(0));
            for (std::size_t k = 0; k < d; ++k)
                if ((*coords)[k] != 0)
                    for (std::size_t r = 0; r < S.dim; ++r) lhs[r] += (*coords)[k] * K[j + k][r];
            verify(lhs == linalg::apply(T, K[j]), "eigensystem: consistency check failed for " + label);
        }
        c.eigenvalues[label] = *coords;
    }
}

bool conjugates_real(const IntPolynomial& g, const QVector& phi) {
    const QPolynomial h = radical(field_element_charpoly(g, phi));
    return count_real_roots(h) == degree(h);
}

bool conjugates_bounded(const IntPolynomial& g, const QVector& phi, const Rational& bound_sq) {
    const QPolynomial h = radical(field_element_charpoly(g, phi));
    if (count_real_roots(h) != degree(h)) return false;
    // G(x^2) = h(x) h(-x) has the squares of the roots of h as its roots.
    QPolynomial hm = h;
    for (std::size_t i = 1; i < hm.size(); i += 2) hm[i] = -hm[i];
    const QPolynomial prod = mul(h, hm);
    QPolynomial G;
    for (std::size_t i = 0; i < prod.size(); i += 2) G.push_back(prod[i]);
    G = radical(G);
    return count_real_roots(G, std::nullopt, bound_sq) == count_real_roots(G);
}

}  // namespace hmf::linalg
