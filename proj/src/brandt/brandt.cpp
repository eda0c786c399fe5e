#include "hmf/brandt.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace hmf::brandt {

using p1::Elt;
using p1::Matrix2;
using quat::OElement;

namespace {

Integer field_trace(const arith::FieldElement& x, int degree) {
    Rational t = degree == 1 ? x.a() : x.trace();
    verify(t.get_den() == 1, "trace of an integral element is not an integer");
    return t.get_num();
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

const std::vector<OElement>* ElementCache::find(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
}

const std::vector<OElement>& ElementCache::insert(const std::string& key, std::vector<OElement> elements) {
    return map_.insert_or_assign(key, std::move(elements)).first->second;
}

BrandtModule::BrandtModule(const quat::LoadedAlgebra& B, const quat::IdealClassSet& classes, const Ideal& N,
                           std::shared_ptr<ElementCache> cache)
    : B_(std::make_shared<quat::LoadedAlgebra>(B)), N_(N), cache_(std::move(cache)) {
    const BaseField& F = B.order.field();
    require(arith::add(F, N, B.discriminant).is_unit(), "BrandtModule: level " + N.str() +
                                                            " meets the discriminant " + B.discriminant.str());
    classes_ = quat::rechoose_coprime(B, classes, N);
    const quat::QuaternionOrder& O = B_->order;
    line_ = std::make_unique<p1::P1Index>(F, N);
    split_ = quat::ResidueSplitting(O, N, B.discriminant);

    const std::size_t h = classes_.size();
    orbit_of_.assign(h, std::vector<std::size_t>(line_->size()));
    std::size_t total = 0;
    for (std::size_t i = 0; i < h; ++i) {
        const auto& cls = classes_.classes[i];
        std::vector<std::size_t> parent(line_->size());
        std::iota(parent.begin(), parent.end(), 0);
        for (std::size_t u = 1; u < cls.units.size(); ++u) {
            const auto perm = line_->gl2_action(split_.image(cls.units[u]));
            for (std::size_t x = 0; x < perm.size(); ++x) {
                std::size_t a = find_root(parent, x), b = find_root(parent, perm[x]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
        std::map<std::size_t, std::size_t> index_of_root;
        for (std::size_t x = 0; x < line_->size(); ++x) {
            const std::size_t r = find_root(parent, x);
            auto it = index_of_root.find(r);
            if (it == index_of_root.end()) {
                it = index_of_root.emplace(r, basis_.size()).first;
                basis_.push_back({i, x, 0, 0});
            }
            orbit_of_[i][x] = it->second;
            basis_[it->second].orbit_size += 1;
        }
        for (const auto& [r, k] : index_of_root) {
            (void)r;
            BasisVector& b = basis_[k];
            verify(cls.weight() % b.orbit_size == 0, "BrandtModule: orbit size does not divide the unit group order");
            b.stabilizer = cls.weight() / b.orbit_size;
            total += b.orbit_size;
        }
    }
    verify(total == h * line_->size(), "BrandtModule: orbits do not partition the projective lines");

    colon_.resize(h);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            quat::Lattice L = quat::lattice_product(O, classes_.classes[i].ideal.lattice,
                                                    classes_.classes[j].ideal.shortcut_left);
            colon_[i].push_back({L, arith::GramLattice(quat::lattice_trace_gram(O, L))});
        }
}

std::vector<Rational> BrandtModule::inner_product_weights() const {
    std::vector<Rational> w;
    for (const auto& b : basis_) w.emplace_back(1, b.stabilizer);
    return w;
}

std::vector<OElement> BrandtModule::elements_of_norm(std::size_t i, std::size_t j, const arith::FieldElement& c) const {
    const quat::QuaternionOrder& O = B_->order;
    const arith::FieldElement target =
        c * classes_.classes[i].ideal.norm_generator * classes_.classes[j].ideal.norm_generator;
    const Colon& col = colon_[i][j];
    std::string key;
    if (cache_) {
        std::ostringstream os;
        os << target.a() << ' ' << target.b() << " /" << col.lattice.den;
        for (const auto& row : col.lattice.rows)
            for (const auto& x : row) os << ' ' << x;
        key = os.str();
        if (const auto* hit = cache_->find(key)) return *hit;
    }
    const long bound = to_i64(2 * field_trace(target, field().degree()));
    std::vector<OElement> out;
    for (const auto& v : arith::short_vectors(col.gram, bound)) {
        OElement x{arith::IntVector(O.rank(), 0), col.lattice.den};
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0)
                for (std::size_t r = 0; r < O.rank(); ++r) x.c[r] += col.lattice.rows[k][r] * v[k];
        if (O.nrd(x) == target) out.push_back(std::move(x));
    }
    if (cache_) cache_->insert(key, out);
    return out;
}

std::string hecke_label(const PrimeIdeal& p) { return "T" + p.label(); }
std::string atkin_lehner_label(const PrimeIdeal& p) { return "W" + p.label(); }

HeckeOperator hecke_operator(const BrandtModule& M, const PrimeIdeal& p) {
    const BaseField& F = M.field();
    const Ideal ND = arith::multiply(F, M.level(), M.algebra().discriminant);
    require(arith::add(F, ND, p.ideal).is_unit(), "hecke_operator: " + p.label() + " divides the level or discriminant");
    const arith::FieldElement pi = arith::totally_positive_generator(F, p.ideal);
    const std::size_t n = M.dim(), h = M.classes().size();
    std::vector<std::vector<long>> raw(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            const auto alphas = M.elements_of_norm(i, j, pi);
            for (const auto& alpha : alphas) {
                const Matrix2 m = M.splitting().image(alpha);
                for (std::size_t b = 0; b < n; ++b) {
                    if (M.basis()[b].cls != i) continue;
                    raw[b][M.index(j, M.line().act(M.basis()[b].pos, m))] += 1;
                }
            }
        }
    HeckeOperator T{hecke_label(p), p.ideal, ZMatrix(n, linalg::ZVector(n, Integer(0)))};
    const long degree = to_i64(p.norm()) + 1;
    for (std::size_t b = 0; b < n; ++b) {
        long sum = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const long w = static_cast<long>(M.classes().classes[M.basis()[c].cls].weight());
            verify(raw[b][c] % w == 0, "hecke_operator: count not divisible by the unit group order");
            T.matrix[b][c] = raw[b][c] / w;
            sum += raw[b][c] / w;
        }
        verify(sum == degree, "hecke_operator: " + T.label + " row " + std::to_string(b) + " counts " +
                                  std::to_string(sum) + " neighbors, expected " + std::to_string(degree));
    }
    return T;
}

HeckeOperator atkin_lehner(const BrandtModule& M, const PrimeIdeal& p, int e) {
    const BaseField& F = M.field();
    const bool ramified = !arith::add(F, M.algebra().discriminant, p.ideal).is_unit();
    const Ideal pe = arith::power(F, p.ideal, e);
    if (ramified) {
        require(e == 1, "atkin_lehner: exponent must be 1 at a ramified prime");
        require(arith::valuation(F, M.algebra().discriminant, p) == 1, "atkin_lehner: discriminant not squarefree");
    } else {
        require(e >= 1 && arith::valuation(F, M.level(), p) == e, "atkin_lehner: " + p.label() + "^" +
                                                                       std::to_string(e) + " does not exactly divide the level");
    }
    const arith::FieldElement c = arith::totally_positive_generator(F, pe);
    const auto& R = M.splitting().ring();
    const auto& line = M.line();
    // For p^e || N: level structure at p^e is replaced by the image line, the
    // rest is transported by x -> x phi(alpha).
    arith::ResidueRing Rpe(F, ramified ? arith::unit_ideal() : pe);
    Elt eps = 0;
    if (!ramified) {
        arith::ResidueRing Rrest(F, arith::divide_exact(F, M.level(), pe));
        bool found = false;
        for (Elt x = 0; x < R.size() && !found; ++x)
            if (R.reduce_to(x, Rpe) == Rpe.one() && R.reduce_to(x, Rrest) == 0) {
                eps = x;
                found = true;
            }
        verify(found, "atkin_lehner: no CRT idempotent");
    }
    const Elt one_minus_eps = R.sub(R.one(), eps);

    const std::size_t n = M.dim(), h = M.classes().size();
    std::vector<std::map<std::size_t, long>> hits(n);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            for (const auto& alpha : M.elements_of_norm(i, j, c)) {
                const Matrix2 m = M.splitting().image(alpha);
                for (std::size_t b = 0; b < n; ++b) {
                    if (M.basis()[b].cls != i) continue;
                    const auto& x = line.point(M.basis()[b].pos);
                    if (ramified) {
                        hits[b][M.index(j, line.act(M.basis()[b].pos, m))] += 1;
                        continue;
                    }
                    const Elt va = R.add(R.mul(x.a, m[0]), R.mul(x.b, m[2]));
                    const Elt vb = R.add(R.mul(x.a, m[1]), R.mul(x.b, m[3]));
                    if (R.reduce_to(va, Rpe) != 0 || R.reduce_to(vb, Rpe) != 0) continue;
                    // y completes x to a basis at p
                    const bool b_unit = Rpe.is_unit(R.reduce_to(x.b, Rpe));
                    const Elt wa = b_unit ? m[0] : m[2];
                    const Elt wb = b_unit ? m[1] : m[3];
                    const Elt na = R.add(R.mul(eps, wa), R.mul(one_minus_eps, va));
                    const Elt nb = R.add(R.mul(eps, wb), R.mul(one_minus_eps, vb));
                    hits[b][M.index(j, line.normalize(na, nb))] += 1;
                }
            }
        }
    HeckeOperator W{atkin_lehner_label(p), pe, ZMatrix(n, linalg::ZVector(n, Integer(0)))};
    for (std::size_t b = 0; b < n; ++b) {
        verify(hits[b].size() == 1, "atkin_lehner: " + W.label + " row " + std::to_string(b) + " has " +
                                        std::to_string(hits[b].size()) + " targets, expected 1");
        const auto [col, count] = *hits[b].begin();
        const long w = static_cast<long>(M.classes().classes[M.basis()[col].cls].weight());
        verify(count == w, "atkin_lehner: " + W.label + " target counted " + std::to_string(count) +
                               " times, expected " + std::to_string(w));
        W.matrix[b][col] = 1;
    }
    for (std::size_t b = 0; b < n; ++b) {
        std::size_t c = 0;
        while (W.matrix[b][c] == 0) ++c;
        verify(W.matrix[c][b] == 1, "atkin_lehner: " + W.label + " is not an involution");
    }
    return W;
}

bool is_self_adjoint(const BrandtModule& M, const ZMatrix& T) {
    const auto w = M.inner_product_weights();
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = 0; j < T.size(); ++j)
            if (w[i] * T[i][j] != T[j][i] * w[j]) return false;
    return true;
}

EisensteinSplit eisenstein_and_cusp(const linalg::HeckeSpace& full, const std::vector<PrimeIdeal>& test_primes) {
    require(test_primes.size() >= 3, "eisenstein_and_cusp: need at least three test primes");
    const std::size_t n = full.dim;
    std::vector<QVector> K;
    bool started = false;
    for (const auto& p : test_primes) {
        const std::string label = hecke_label(p);
        require(full.has(label), "eisenstein_and_cusp: missing operator " + label);
        linalg::QMatrix A = full.op(label);
        for (std::size_t k = 0; k < n; ++k) A[k][k] -= Rational(p.norm() + 1);
        K = started ? linalg::kernel_within(A, K, n) : linalg::span_basis(linalg::kernel(A), n);
        started = true;
    }
    if (n > 0) {
        std::vector<QVector> with_ones = K;
        with_ones.push_back(QVector(n, Rational(1)));
        verify(linalg::span_basis(with_ones, n).size() == K.size(), "eisenstein_and_cusp: constants are not Eisenstein");
    }
    EisensteinSplit out;
    out.eisenstein = K;
    out.cusp = linalg::quotient(full, K);
    return out;
}

}  // namespace hmf::brandt
