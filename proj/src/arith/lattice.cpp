#include "hmf/arith/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace hmf::arith {

IntMatrix hnf_rows(IntMatrix rows, std::size_t ncols) {
    for (const auto& r : rows) require(r.size() == ncols, "hnf_rows: ragged generator list");
    IntMatrix pivots;  // collected pivot rows, in decreasing pivot column order
    std::vector<std::size_t> pivot_cols;
    for (std::size_t cc = ncols; cc-- > 0;) {
        // Euclid on column cc among the remaining rows.
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][cc] == 0) continue;
                if (best == rows.size() || abs(rows[i][cc]) < abs(rows[best][cc])) best = i;
            }
            if (best == rows.size()) break;
            bool other_nonzero = false;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == best || rows[i][cc] == 0) continue;
                Integer q = floor_div(rows[i][cc], rows[best][cc]);
                for (std::size_t c = 0; c <= cc; ++c) rows[i][c] -= q * rows[best][c];
                if (rows[i][cc] != 0) other_nonzero = true;
            }
            if (!other_nonzero) {
                IntVector p = std::move(rows[best]);
                rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
                if (p[cc] < 0)
                    for (auto& x : p) x = -x;
                pivots.push_back(std::move(p));
                pivot_cols.push_back(cc);
                break;
            }
        }
    }
    // Reduce entries left of each pivot: process pivots from high column to low.
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        std::size_t c = pivot_cols[k];
        for (std::size_t j = 0; j < k; ++j) {
            Integer q = floor_div(pivots[j][c], pivots[k][c]);
            if (q != 0)
                for (std::size_t t = 0; t <= c; ++t) pivots[j][t] -= q * pivots[k][t];
        }
    }
    std::reverse(pivots.begin(), pivots.end());
    return pivots;
}

Integer hnf_index(const IntMatrix& hnf) {
    Integer d = 1;
    for (std::size_t i = 0; i < hnf.size(); ++i) d *= hnf[i][i];
    return d;
}

IntVector reduce_mod_hnf(IntVector v, const IntMatrix& hnf) {
    for (std::size_t c = hnf.size(); c-- > 0;) {
        Integer q = floor_div(v[c], hnf[c][c]);
        if (q != 0)
            for (std::size_t t = 0; t <= c; ++t) v[t] -= q * hnf[c][t];
    }
    return v;
}

namespace {

// Exact LDL^T positivity check.
bool positive_definite(const IntMatrix& g) {
    std::size_t n = g.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = g[i][j];
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return true;
}

struct LLLState {
    std::vector<IntVector> gram;
    std::vector<std::vector<long>> u;
};

void gso(const std::vector<IntVector>& g, std::vector<std::vector<long double>>& mu,
         std::vector<long double>& bstar) {
    std::size_t n = g.size();
    mu.assign(n, std::vector<long double>(n, 0));
    bstar.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            long double s = g[i][j].get_d();
            for (std::size_t l = 0; l < j; ++l) s -= mu[j][l] * mu[i][l] * bstar[l];
            mu[i][j] = s / bstar[j];
        }
        long double s = g[i][i].get_d();
        for (std::size_t l = 0; l < i; ++l) s -= mu[i][l] * mu[i][l] * bstar[l];
        bstar[i] = s;
    }
}

void size_reduce(LLLState& st, std::size_t k, std::size_t j, const Integer& q) {
    std::size_t n = st.gram.size();
    long ql = to_i64(q);
    for (std::size_t t = 0; t < n; ++t) st.u[k][t] -= ql * st.u[j][t];
    // b_k <- b_k - q b_j
    Integer gkk = st.gram[k][k] - 2 * q * st.gram[k][j] + q * q * st.gram[j][j];
    for (std::size_t t = 0; t < n; ++t) {
        if (t == k) continue;
        st.gram[k][t] -= q * st.gram[j][t];
        st.gram[t][k] = st.gram[k][t];
    }
    st.gram[k][k] = gkk;
}

LLLState lll(const IntMatrix& gram) {
    std::size_t n = gram.size();
    LLLState st{gram, std::vector<std::vector<long>>(n, std::vector<long>(n, 0))};
    for (std::size_t i = 0; i < n; ++i) st.u[i][i] = 1;
    std::vector<std::vector<long double>> mu;
    std::vector<long double> bstar;
    std::size_t k = 1;
    int guard = 0;
    while (k < n) {
        verify(++guard < 100000, "LLL did not terminate");
        gso(st.gram, mu, bstar);
        for (std::size_t j = k; j-- > 0;) {
            long double m = mu[k][j];
            if (std::fabs(m) > 0.5L) {
                Integer q(static_cast<double>(std::llround(m)));
                size_reduce(st, k, j, q);
                gso(st.gram, mu, bstar);
            }
        }
        if (bstar[k] >= (0.99L - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            ++k;
        } else {
            std::swap(st.u[k], st.u[k - 1]);
            std::swap(st.gram[k], st.gram[k - 1]);
            for (std::size_t t = 0; t < n; ++t) std::swap(st.gram[t][k], st.gram[t][k - 1]);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return st;
}

}  // namespace

GramLattice::GramLattice(IntMatrix gram) : gram_(std::move(gram)) {
    std::size_t n = gram_.size();
    for (std::size_t i = 0; i < n; ++i) {
        require(gram_[i].size() == n, "GramLattice: Gram matrix is not square");
        for (std::size_t j = 0; j < i; ++j)
            require(gram_[i][j] == gram_[j][i], "GramLattice: Gram matrix is not symmetric");
    }
    require(positive_definite(gram_), "GramLattice: form is not positive definite");
    LLLState st = lll(gram_);
    transform_ = st.u;
    reduced_gram_.assign(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) reduced_gram_[i][j] = to_i64(st.gram[i][j]);
    // Fincke-Pohst coefficients: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
    chol_.assign(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) chol_[i][j] = static_cast<long double>(reduced_gram_[i][j]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            chol_[j][i] = chol_[i][j];
            chol_[i][j] /= chol_[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) chol_[k][l] -= chol_[k][i] * chol_[i][l];
    }
}

Integer GramLattice::evaluate(const SmallVector& v) const {
    Integer s = 0;
    for (std::size_t i = 0; i < gram_.size(); ++i)
        for (std::size_t j = 0; j < gram_.size(); ++j) s += gram_[i][j] * v[i] * v[j];
    return s;
}

void GramLattice::enumerate(long bound, const std::function<void(const SmallVector&, long)>& visit) const {
    const std::size_t n = rank();
    if (n == 0 || bound <= 0) return;
    const long double slack = 1e-6L * (1 + bound);
    SmallVector x(n, 0), out(n, 0);
    std::vector<long double> remaining(n + 1, 0), center(n, 0);
    std::vector<long> upper(n, 0);
    // zero_above[l]: every coordinate with index > l is zero. Restricting the
    // first nonzero coordinate (from the top) to be positive picks one of +-v.
    std::vector<char> zero_above(n, 1);
    remaining[n] = static_cast<long double>(bound) + slack;

    auto exact_value = [&](const SmallVector& w) {
        __int128 s = 0;
        for (std::size_t a = 0; a < n; ++a) {
            if (w[a] == 0) continue;
            __int128 row = 0;
            for (std::size_t b = 0; b < n; ++b) row += static_cast<__int128>(reduced_gram_[a][b]) * w[b];
            s += row * w[a];
        }
        return static_cast<long>(s);
    };

    auto init_level = [&](std::size_t lvl) {
        long double c = 0;
        for (std::size_t j = lvl + 1; j < n; ++j) c -= chol_[lvl][j] * x[j];
        center[lvl] = c;
        long double r = std::sqrt(std::max<long double>(remaining[lvl + 1], 0) / chol_[lvl][lvl]);
        long lo = static_cast<long>(std::ceil(c - r - 1e-9L));
        long hi = static_cast<long>(std::floor(c + r + 1e-9L));
        if (zero_above[lvl]) lo = std::max<long>(lo, 0);
        x[lvl] = lo - 1;
        upper[lvl] = hi;
    };

    std::size_t i = n - 1;
    init_level(i);
    while (true) {
        ++x[i];
        if (x[i] > upper[i]) {
            if (i == n - 1) break;
            ++i;
            continue;
        }
        long double diff = x[i] - center[i];
        long double rem = remaining[i + 1] - chol_[i][i] * diff * diff;
        if (rem < -slack) continue;
        remaining[i] = rem;
        if (i > 0) {
            zero_above[i - 1] = zero_above[i] && x[i] == 0;
            --i;
            init_level(i);
            continue;
        }
        if (zero_above[0] && x[0] == 0) continue;
        long value = exact_value(x);
        if (value > bound) continue;
        for (std::size_t t = 0; t < n; ++t) {
            long s = 0;
            for (std::size_t k = 0; k < n; ++k) s += x[k] * transform_[k][t];
            out[t] = s;
        }
        visit(out, value);
    }
}

std::vector<SmallVector> short_vectors(const GramLattice& lattice, long target) {
    require(target >= 0, "short_vectors: negative target");
    std::vector<SmallVector> out;
    lattice.enumerate(target, [&](const SmallVector& v, long value) {
        if (value == target) {
            SmallVector w = v;
            // Canonical sign: first nonzero coordinate positive.
            for (long c : w) {
                if (c == 0) continue;
                if (c < 0)
                    for (auto& t : w) t = -t;
                break;
            }
            out.push_back(std::move(w));
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> representation_numbers(const GramLattice& lattice, long count) {
    std::vector<long> out(static_cast<std::size_t>(std::max<long>(count, 0)), 0);
    if (count <= 0) return out;
    out[0] = 1;
    lattice.enumerate(count - 1, [&](const SmallVector&, long value) { out[static_cast<std::size_t>(value)] += 2; });
    return out;
}

}  // namespace hmf::arith
