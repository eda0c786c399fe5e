#pragma once

#include "hmf/common.hpp"

#include <optional>

namespace hmf::linalg {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major
using ZVector = std::vector<Integer>;
using ZMatrix = std::vector<ZVector>;

QMatrix zero_matrix(std::size_t rows, std::size_t cols);
QMatrix identity_matrix(std::size_t n);
std::size_t rows(const QMatrix& A);
std::size_t cols(const QMatrix& A);

QMatrix operator*(const QMatrix& A, const QMatrix& B);
QMatrix operator+(const QMatrix& A, const QMatrix& B);
QMatrix operator-(const QMatrix& A, const QMatrix& B);
QMatrix scale(const QMatrix& A, const Rational& c);
QVector apply(const QMatrix& A, const QVector& v);
QMatrix transpose(const QMatrix& A);
bool is_zero(const QMatrix& A);

// Columns as a matrix: result(r, k) = vectors[k][r].
QMatrix from_columns(const std::vector<QVector>& vectors, std::size_t dim);

QMatrix to_rational(const ZMatrix& A);
// Entries must all be integers.
ZMatrix to_integer(const QMatrix& A);

// Reduced row echelon form in place; returns pivot columns. Pivots are taken
// left to right, the first nonzero row entry in column order.
std::vector<std::size_t> row_reduce(QMatrix& A);
std::size_t rank(QMatrix A);

// Basis of {v : A v = 0}, one vector per free column in increasing order,
// with that free coordinate 1 and the other free coordinates 0.
std::vector<QVector> kernel(const QMatrix& A);

// Some x with A x = b, if one exists.
std::optional<QVector> solve(const QMatrix& A, const QVector& b);

// Row-echelon basis of the span of the given vectors.
std::vector<QVector> span_basis(const std::vector<QVector>& vectors, std::size_t dim);

// Basis of the intersection of two subspaces given by spanning vectors.
std::vector<QVector> intersect(const std::vector<QVector>& U, const std::vector<QVector>& V, std::size_t dim);

// Row-echelon basis of {v in span W : A v = 0}. Much cheaper than
// intersecting with kernel(A) when W is small.
std::vector<QVector> kernel_within(const QMatrix& A, const std::vector<QVector>& W, std::size_t dim);

}  // namespace hmf::linalg
