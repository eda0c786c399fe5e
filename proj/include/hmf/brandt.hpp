#pragma once

#include "hmf/linalg/space.hpp"
#include "hmf/quat/ideals.hpp"

#include <map>
#include <memory>

namespace hmf::brandt {

using arith::BaseField;
using arith::Ideal;
using arith::PrimeIdeal;
using linalg::QVector;
using linalg::ZMatrix;

struct BasisVector {
    std::size_t cls;  // ideal class index
    std::size_t pos;  // least P^1 position in the orbit
    std::size_t orbit_size;
    std::size_t stabilizer;  // |Gamma_cls| / orbit_size
};

struct HeckeOperator {
    std::string label;  // "T<prime label>" or "W<prime label>"
    Ideal ideal;        // p or p^e
    // Function convention: (T f)(b) = sum_c matrix[b][c] f(c).
    ZMatrix matrix;
};

// Elements of given reduced norm in I_i conj(I_j), shared between the
// modules of one algebra: they do not depend on the level.
class ElementCache {
public:
    const std::vector<quat::OElement>* find(const std::string& key) const;
    const std::vector<quat::OElement>& insert(const std::string& key, std::vector<quat::OElement> elements);
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::string, std::vector<quat::OElement>> map_;
};

// The free module on pairs (class, Gamma_class-orbit on P^1(Z_F/N)).
class BrandtModule {
public:
    // `classes` may have representatives of any norm; they are re-chosen
    // prime to N when needed.
    BrandtModule(const quat::LoadedAlgebra& B, const quat::IdealClassSet& classes, const Ideal& N,
                 std::shared_ptr<ElementCache> cache = nullptr);

    const BaseField& field() const { return B_->order.field(); }
    const quat::LoadedAlgebra& algebra() const { return *B_; }
    const quat::IdealClassSet& classes() const { return classes_; }
    const Ideal& level() const { return N_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisVector>& basis() const { return basis_; }
    const p1::P1Index& line() const { return *line_; }
    const quat::ResidueSplitting& splitting() const { return split_; }
    // Basis index of the orbit of `pos` in class `cls`.
    std::size_t index(std::size_t cls, std::size_t pos) const { return orbit_of_[cls][pos]; }
    // Diagonal of the form making every T_p self-adjoint: 1 / stabilizer.
    std::vector<Rational> inner_product_weights() const;

    // Elements alpha of I_i conj(I_j) with nrd(alpha) = c * n_i * n_j, one
    // of each +-alpha pair, in enumeration order.
    std::vector<quat::OElement> elements_of_norm(std::size_t i, std::size_t j, const arith::FieldElement& c) const;

private:
    std::shared_ptr<const quat::LoadedAlgebra> B_;
    quat::IdealClassSet classes_;
    Ideal N_;
    std::unique_ptr<p1::P1Index> line_;
    quat::ResidueSplitting split_;
    std::vector<BasisVector> basis_;
    std::vector<std::vector<std::size_t>> orbit_of_;
    struct Colon {
        quat::Lattice lattice;
        arith::GramLattice gram;
    };
    std::vector<std::vector<Colon>> colon_;  // colon_[i][j] = I_i conj(I_j)
    std::shared_ptr<ElementCache> cache_;
};

std::string hecke_label(const PrimeIdeal& p);
std::string atkin_lehner_label(const PrimeIdeal& p);

// T_p for p prime to N disc(B). Throws VerificationError if a row does not
// count Nm(p)+1 neighbors.
HeckeOperator hecke_operator(const BrandtModule& M, const PrimeIdeal& p);

// W_{p^e} for p^e exactly dividing N, or W_p for p dividing disc(B) (e = 1).
// Each row has exactly one nonzero entry; W^2 = 1 is verified.
HeckeOperator atkin_lehner(const BrandtModule& M, const PrimeIdeal& p, int e);

// Checks D T = T^t D with D = diag(inner_product_weights()).
bool is_self_adjoint(const BrandtModule& M, const ZMatrix& T);

struct EisensteinSplit {
    std::vector<QVector> eisenstein;  // basis of the Eisenstein subspace
    linalg::HeckeSpace cusp;          // quotient with induced operators
};

// Eis = intersection of ker(T_p - (Nm p + 1)) over at least three T_p of the
// space; the cusp part is the quotient.
EisensteinSplit eisenstein_and_cusp(const linalg::HeckeSpace& full, const std::vector<PrimeIdeal>& test_primes);

}  // namespace hmf::brandt
