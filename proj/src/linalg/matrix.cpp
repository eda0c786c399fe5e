#include "hmf/linalg/matrix.hpp"

namespace hmf::linalg {

QMatrix zero_matrix(std::size_t r, std::size_t c) { return QMatrix(r, QVector(c, Rational(0))); }

QMatrix identity_matrix(std::size_t n) {
    QMatrix I = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

std::size_t rows(const QMatrix& A) { return A.size(); }
std::size_t cols(const QMatrix& A) { return A.empty() ? 0 : A[0].size(); }

QMatrix operator*(const QMatrix& A, const QMatrix& B) {
    require(cols(A) == rows(B), "matrix product: shape mismatch");
    const std::size_t n = rows(A), m = cols(B), k = cols(A);
    QMatrix C = zero_matrix(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            const Rational& a = A[i][t];
            for (std::size_t j = 0; j < m; ++j)
                if (B[t][j] != 0) C[i][j] += a * B[t][j];
        }
    return C;
}

QMatrix operator+(const QMatrix& A, const QMatrix& B) {
    require(rows(A) == rows(B) && cols(A) == cols(B), "matrix sum: shape mismatch");
    QMatrix C = A;
    for (std::size_t i = 0; i < rows(A); ++i)
        for (std::size_t j = 0; j < cols(A); ++j) C[i][j] += B[i][j];
    return C;
}

QMatrix operator-(const QMatrix& A, const QMatrix& B) {
    require(rows(A) == rows(B) && cols(A) == cols(B), "matrix difference: shape mismatch");
    QMatrix C = A;
    for (std::size_t i = 0; i < rows(A); ++i)
        for (std::size_t j = 0; j < cols(A); ++j) C[i][j] -= B[i][j];
    return C;
}

QMatrix scale(const QMatrix& A, const Rational& c) {
    QMatrix C = A;
    for (auto& row : C)
        for (auto& x : row) x *= c;
    return C;
}

QVector apply(const QMatrix& A, const QVector& v) {
    require(cols(A) == v.size(), "matrix-vector product: shape mismatch");
    QVector w(rows(A), Rational(0));
    for (std::size_t i = 0; i < rows(A); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (A[i][j] != 0 && v[j] != 0) w[i] += A[i][j] * v[j];
    return w;
}

QMatrix transpose(const QMatrix& A) {
    QMatrix T = zero_matrix(cols(A), rows(A));
    for (std::size_t i = 0; i < rows(A); ++i)
        for (std::size_t j = 0; j < cols(A); ++j) T[j][i] = A[i][j];
    return T;
}

bool is_zero(const QMatrix& A) {
    for (const auto& row : A)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

QMatrix from_columns(const std::vector<QVector>& vectors, std::size_t dim) {
    QMatrix M = zero_matrix(dim, vectors.size());
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        require(vectors[k].size() == dim, "from_columns: vector length mismatch");
        for (std::size_t r = 0; r < dim; ++r) M[r][k] = vectors[k][r];
    }
    return M;
}

QMatrix to_rational(const ZMatrix& A) {
    QMatrix Q(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
        for (const auto& x : A[i]) Q[i].push_back(Rational(x));
    return Q;
}

ZMatrix to_integer(const QMatrix& A) {
    ZMatrix Z(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
        for (const auto& x : A[i]) {
            verify(x.get_den() == 1, "matrix entry is not an integer");
            Z[i].push_back(x.get_num());
        }
    return Z;
}

std::vector<std::size_t> row_reduce(QMatrix& A) {
    std::vector<std::size_t> pivots;
    const std::size_t n = rows(A), m = cols(A);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
        std::size_t p = r;
        while (p < n && A[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(A[p], A[r]);
        const Rational inv = 1 / A[r][c];
        for (std::size_t j = c; j < m; ++j) A[r][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || A[i][c] == 0) continue;
            const Rational f = A[i][c];
            for (std::size_t j = c; j < m; ++j)
                if (A[r][j] != 0) A[i][j] -= f * A[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(QMatrix A) { return row_reduce(A).size(); }

std::vector<QVector> kernel(const QMatrix& A) {
    QMatrix R = A;
    const std::size_t m = cols(A);
    const auto pivots = row_reduce(R);
    std::vector<bool> is_pivot(m, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<QVector> basis;
    for (std::size_t f = 0; f < m; ++f) {
        if (is_pivot[f]) continue;
        QVector v(m, Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -R[k][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVector> solve(const QMatrix& A, const QVector& b) {
    require(rows(A) == b.size(), "solve: shape mismatch");
    const std::size_t m = cols(A);
    QMatrix Aug = A;
    for (std::size_t i = 0; i < rows(A); ++i) Aug[i].push_back(b[i]);
    const auto pivots = row_reduce(Aug);
    if (!pivots.empty() && pivots.back() == m) return std::nullopt;
    QVector x(m, Rational(0));
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = Aug[k][m];
    return x;
}

std::vector<QVector> span_basis(const std::vector<QVector>& vectors, std::size_t dim) {
    QMatrix M = vectors;
    for (const auto& v : M) require(v.size() == dim, "span_basis: vector length mismatch");
    const auto pivots = row_reduce(M);
    M.resize(pivots.size());
    return M;
}

std::vector<QVector> intersect(const std::vector<QVector>& U, const std::vector<QVector>& V, std::size_t dim) {
    if (U.empty() || V.empty()) return {};
    // Solve sum a_k u_k = sum b_k v_k.
    QMatrix M = zero_matrix(dim, U.size() + V.size());
    for (std::size_t k = 0; k < U.size(); ++k)
        for (std::size_t r = 0; r < dim; ++r) M[r][k] = U[k][r];
    for (std::size_t k = 0; k < V.size(); ++k)
        for (std::size_t r = 0; r < dim; ++r) M[r][U.size() + k] = -V[k][r];
    std::vector<QVector> out;
    for (const auto& sol : kernel(M)) {
        QVector w(dim, Rational(0));
        for (std::size_t k = 0; k < U.size(); ++k)
            if (sol[k] != 0)
                for (std::size_t r = 0; r < dim; ++r) w[r] += sol[k] * U[k][r];
        out.push_back(std::move(w));
    }
    return span_basis(out, dim);
}

std::vector<QVector> kernel_within(const QMatrix& A, const std::vector<QVector>& W, std::size_t dim) {
    if (W.empty()) return {};
    require(cols(A) == dim, "kernel_within: shape mismatch");
    QMatrix AW = zero_matrix(rows(A), W.size());
    for (std::size_t k = 0; k < W.size(); ++k) {
        const QVector img = apply(A, W[k]);
        for (std::size_t r = 0; r < rows(A); ++r) AW[r][k] = img[r];
    }
    std::vector<QVector> out;
    for (const auto& sol : kernel(AW)) {
        QVector w(dim, Rational(0));
        for (std::size_t k = 0; k < W.size(); ++k)
            if (sol[k] != 0)
                for (std::size_t r = 0; r < dim; ++r) w[r] += sol[k] * W[k][r];
        out.push_back(std::move(w));
    }
    return span_basis(out, dim);
}

}  // namespace hmf::linalg
