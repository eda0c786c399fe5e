#include "hmf/p1.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace hmf::p1 {

using arith::Ideal;

P1Index::P1Index(const arith::BaseField& F, const Ideal& N) : field_(F), ring_(F, N) {
    if (ring_.size() == 1) {
        points_.push_back({0, 0});
        block_of_.push_back(0);
        divisors_.push_back(arith::unit_ideal());
        position_of_radix_.push_back(0);
        return;
    }
    const auto& factors = ring_.factorization();
    for (const auto& [P, e] : factors) {
        Local L;
        Ideal Q = arith::power(F, P.ideal, e);
        L.ring = ResidueRing(F, Q);
        L.prime_norm = to_i64(P.norm());
        L.exponent = e;
        std::vector<Ideal> powers;
        for (int k = 1; k <= e; ++k) powers.push_back(arith::power(F, P.ideal, k));
        std::int64_t S = L.ring.size();
        L.unit.assign(S, 0);
        L.inverse.assign(S, 0);
        L.valuation.assign(S, 0);
        L.nonunit_rank.assign(S, -1);
        for (Elt x = 0; x < S; ++x) {
            auto c = L.ring.coords(x);
            int v = 0;
            for (int k = 0; k < e; ++k) {
                auto [r0, r1] = arith::reduce(powers[k], Integer(c[0]), Integer(c[1]));
                if (r0 != 0 || r1 != 0) break;
                v = k + 1;
            }
            L.valuation[x] = v;
            L.unit[x] = v == 0;
            if (v > 0) {
                L.nonunit_rank[x] = static_cast<std::int64_t>(L.nonunits.size());
                L.nonunits.push_back(x);
            }
        }
        for (Elt x = 0; x < S; ++x)
            if (L.unit[x]) L.inverse[x] = L.ring.inverse(x);
        L.from_global.resize(ring_.size());
        for (Elt g = 0; g < ring_.size(); ++g) L.from_global[g] = ring_.reduce_to(g, L.ring);
        verify(static_cast<std::int64_t>(L.nonunits.size()) * L.prime_norm == S,
               "P1Index: maximal ideal has the wrong size");
        locals_.push_back(std::move(L));
    }

    // CRT idempotents.
    for (std::size_t i = 0; i < locals_.size(); ++i) {
        Elt found = -1;
        for (Elt g = 0; g < ring_.size() && found < 0; ++g) {
            bool ok = true;
            for (std::size_t j = 0; j < locals_.size() && ok; ++j) {
                Elt want = i == j ? locals_[j].ring.one() : 0;
                ok = locals_[j].from_global[g] == want;
            }
            if (ok) found = g;
        }
        verify(found >= 0, "P1Index: CRT idempotent not found");
        idempotents_.push_back(found);
    }

    auto lift = [&](std::size_t i, Elt local) {
        auto c = locals_[i].ring.coords(local);
        return ring_.mul(ring_.encode(c[0], c[1]), idempotents_[i]);
    };

    std::int64_t total = 1;
    std::vector<std::int64_t> stride;
    for (const auto& L : locals_) {
        stride.push_back(total);
        total *= L.count();
    }
    struct Entry {
        Ideal divisor;
        Elt a, b;
        std::int64_t radix;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(total));
    std::map<std::vector<int>, Ideal> divisor_cache;
    std::vector<std::int64_t> digit(locals_.size(), 0);
    for (std::int64_t r = 0; r < total; ++r) {
        std::int64_t rem = r;
        Elt a = 0, b = 0;
        std::vector<int> exps(locals_.size());
        for (std::size_t i = 0; i < locals_.size(); ++i) {
            const Local& L = locals_[i];
            digit[i] = rem % L.count();
            rem /= L.count();
            Elt la, lb;
            if (digit[i] < L.ring.size()) {
                la = L.ring.one();
                lb = digit[i];
                exps[i] = 0;
            } else {
                la = L.nonunits[static_cast<std::size_t>(digit[i] - L.ring.size())];
                lb = L.ring.one();
                exps[i] = L.valuation[la];
            }
            a = ring_.add(a, lift(i, la));
            b = ring_.add(b, lift(i, lb));
        }
        auto it = divisor_cache.find(exps);
        if (it == divisor_cache.end()) {
            Ideal D = arith::unit_ideal();
            for (std::size_t i = 0; i < locals_.size(); ++i)
                D = arith::multiply(F, D, arith::power(F, factors[i].first.ideal, exps[i]));
            it = divisor_cache.emplace(exps, D).first;
        }
        entries.push_back({it->second, a, b, r});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        if (!(x.divisor == y.divisor)) return x.divisor < y.divisor;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    position_of_radix_.assign(static_cast<std::size_t>(total), 0);
    for (std::size_t pos = 0; pos < entries.size(); ++pos) {
        const Entry& e = entries[pos];
        if (divisors_.empty() || !(divisors_.back() == e.divisor)) divisors_.push_back(e.divisor);
        points_.push_back({e.a, e.b});
        block_of_.push_back(divisors_.size() - 1);
        position_of_radix_[static_cast<std::size_t>(e.radix)] = pos;
    }
}

std::int64_t P1Index::local_position(const Local& L, Elt a, Elt b) const {
    if (L.unit[a]) return L.ring.mul(b, L.inverse[a]);
    require(L.unit[b], "P1Index::normalize: pair is not unimodular (degenerate column)");
    Elt an = L.ring.mul(a, L.inverse[b]);
    return L.ring.size() + L.nonunit_rank[an];
}

bool P1Index::is_unimodular(Elt a, Elt b) const {
    for (const auto& L : locals_)
        if (!L.unit[L.from_global[a]] && !L.unit[L.from_global[b]]) return false;
    return true;
}

std::size_t P1Index::normalize(Elt a, Elt b) const {
    if (locals_.empty()) return 0;
    std::int64_t radix = 0, stride = 1;
    for (const auto& L : locals_) {
        radix += stride * local_position(L, L.from_global[a], L.from_global[b]);
        stride *= L.count();
    }
    return position_of_radix_[static_cast<std::size_t>(radix)];
}

std::size_t P1Index::act(std::size_t pos, const Matrix2& m) const {
    const Point& p = points_[pos];
    const ResidueRing& R = ring_;
    Elt a = R.add(R.mul(p.a, m[0]), R.mul(p.b, m[2]));
    Elt b = R.add(R.mul(p.a, m[1]), R.mul(p.b, m[3]));
    return normalize(a, b);
}

std::vector<std::size_t> P1Index::gl2_action(const Matrix2& m) const {
    require(ring_.is_unit(det(ring_, m)), "gl2_action: determinant is not a unit");
    std::vector<std::size_t> perm(size());
    std::vector<char> hit(size(), 0);
    for (std::size_t pos = 0; pos < size(); ++pos) {
        perm[pos] = act(pos, m);
        verify(!hit[perm[pos]], "gl2_action: induced map is not a permutation");
        hit[perm[pos]] = 1;
    }
    return perm;
}

Elt det(const ResidueRing& R, const Matrix2& m) { return R.sub(R.mul(m[0], m[3]), R.mul(m[1], m[2])); }

Matrix2 multiply(const ResidueRing& R, const Matrix2& x, const Matrix2& y) {
    return {R.add(R.mul(x[0], y[0]), R.mul(x[1], y[2])), R.add(R.mul(x[0], y[1]), R.mul(x[1], y[3])),
            R.add(R.mul(x[2], y[0]), R.mul(x[3], y[2])), R.add(R.mul(x[2], y[1]), R.mul(x[3], y[3]))};
}

}  // namespace hmf::p1
