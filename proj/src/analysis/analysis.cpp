#include "hmf/analysis.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace hmf::analysis {

std::string to_string(CMVerdict v) {
    switch (v) {
        case CMVerdict::NotCM: return "not";
        case CMVerdict::Candidate: return "candidate";
        case CMVerdict::Untested: return "untested";
        case CMVerdict::Insufficient: return "insufficient";
    }
    return "untested";
}

std::string to_string(BaseChangeVerdict v) {
    switch (v) {
        case BaseChangeVerdict::NotApplicable: return "na";
        case BaseChangeVerdict::NotBaseChange: return "not";
        case BaseChangeVerdict::Stage1Only: return "stage1";
        case BaseChangeVerdict::Candidate: return "candidate";
        case BaseChangeVerdict::Matched: return "matched";
    }
    return "na";
}

CMVerdict parse_cm_verdict(const std::string& s) {
    for (auto v : {CMVerdict::NotCM, CMVerdict::Candidate, CMVerdict::Untested, CMVerdict::Insufficient})
        if (to_string(v) == s) return v;
    throw PreconditionError("unknown CM verdict '" + s + "'");
}

BaseChangeVerdict parse_base_change_verdict(const std::string& s) {
    for (auto v : {BaseChangeVerdict::NotApplicable, BaseChangeVerdict::NotBaseChange, BaseChangeVerdict::Stage1Only,
                   BaseChangeVerdict::Candidate, BaseChangeVerdict::Matched})
        if (to_string(v) == s) return v;
    throw PreconditionError("unknown base change verdict '" + s + "'");
}

const QVector* NewformRecord::eigenvalue(const std::string& prime_label) const {
    for (std::size_t k = 0; k < primes.size(); ++k)
        if (primes[k] == prime_label) return &eigenvalues[k];
    return nullptr;
}

namespace {

std::string ideal_code(const Ideal& I) {
    return I.norm().get_str() + "." + I.a.get_str() + "." + I.b.get_str() + "." + I.d.get_str();
}

}  // namespace

std::string NewformRecord::label() const {
    return field_label + "-" + ideal_code(disc) + "-" + ideal_code(level) + "-" + std::to_string(index);
}

bool record_less(const NewformRecord& a, const NewformRecord& b) {
    if (a.field_label != b.field_label) return a.field_label < b.field_label;
    if (a.disc != b.disc) return a.disc < b.disc;
    if (a.level != b.level) return a.level < b.level;
    return a.index < b.index;
}

HeckeField::HeckeField(IntPolynomial g) : g_(std::move(g)) {
    require(linalg::degree(g_) >= 1, "HeckeField: polynomial must have positive degree");
    d_ = static_cast<std::size_t>(linalg::degree(g_));
}

QVector HeckeField::from_rational(const Rational& q) const {
    QVector v(d_, Rational(0));
    v[0] = q;
    return v;
}

QVector HeckeField::add(const QVector& a, const QVector& b) const {
    QVector v(d_, Rational(0));
    for (std::size_t k = 0; k < d_; ++k) v[k] = a[k] + b[k];
    return v;
}

QVector HeckeField::sub(const QVector& a, const QVector& b) const {
    QVector v(d_, Rational(0));
    for (std::size_t k = 0; k < d_; ++k) v[k] = a[k] - b[k];
    return v;
}

QVector HeckeField::scale(const QVector& a, const Rational& q) const {
    QVector v = a;
    for (auto& x : v) x *= q;
    return v;
}

QVector HeckeField::mul(const QVector& a, const QVector& b) const {
    const auto r = linalg::divmod(linalg::mul(linalg::trim(a), linalg::trim(b)), linalg::to_q(g_)).second;
    QVector v(d_, Rational(0));
    for (std::size_t k = 0; k < r.size(); ++k) v[k] = r[k];
    return v;
}

bool HeckeField::is_rational(const QVector& a) const {
    for (std::size_t k = 1; k < a.size(); ++k)
        if (a[k] != 0) return false;
    return true;
}

namespace {

std::map<std::string, arith::PrimeIdeal> prime_table(const BaseField& F, long bound) {
    std::map<std::string, arith::PrimeIdeal> out;
    for (const auto& p : arith::primes_up_to(F, bound)) out.emplace(p.label(), p);
    return out;
}

long legendre(const Integer& a, const Integer& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

}  // namespace

Integer fundamental_discriminant(const Integer& n) {
    require(n != 0 && !is_perfect_square(n), "fundamental_discriminant: square input");
    const Integer s = squarefree_part(n);
    return mod_floor(s, Integer(4)) == 1 ? s : Integer(4 * s);
}

CMResult detect_cm(const NewformRecord& r, const BaseField& F) {
    require(r.eigenvalues.size() >= 10, "detect_cm: need at least 10 eigenvalues, have " +
                                            std::to_string(r.eigenvalues.size()));
    const auto table = prime_table(F, r.prime_bound);
    HeckeField E(r.heckefield);
    CMResult out;
    std::optional<Integer> first;
    std::vector<const arith::PrimeIdeal*> zero_primes;
    for (std::size_t k = 0; k < r.primes.size(); ++k) {
        const QVector& a = r.eigenvalues[k];
        if (!E.is_rational(a)) continue;
        const auto& p = table.at(r.primes[k]);
        if (a[0] == 0) {
            zero_primes.push_back(&p);
            continue;
        }
        const Rational delta_q = a[0] * a[0] - 4 * Rational(p.norm());
        verify(delta_q.get_den() == 1, "detect_cm: non-integral rational eigenvalue");
        const Integer delta = delta_q.get_num();
        if (delta == 0) continue;
        if (!first) {
            first = delta;
            continue;
        }
        if (!arith::square_class_equal(F, F.element(Rational(*first)), F.element(Rational(delta)))) {
            out.verdict = CMVerdict::NotCM;
            return out;
        }
    }
    if (!first) {
        out.verdict = CMVerdict::Untested;
        return out;
    }
    out.verdict = CMVerdict::Candidate;
    out.disc = fundamental_discriminant(*first);
    for (const auto* p : zero_primes) {
        // inert in F(sqrt delta): delta is a non-square in the residue field
        if (p->residue_degree != 1 || p->p == 2 || *first % p->p == 0) continue;
        if (legendre(mod_floor(*first, p->p), p->p) == -1) ++out.evidence;
    }
    return out;
}

BaseChangeResult detect_base_change(const NewformRecord& r, const BaseField& F, const std::vector<NewformRecord>* qdb) {
    BaseChangeResult out;
    if (F.degree() == 1) return out;
    const Ideal full_level = arith::multiply(F, r.level, r.disc);
    if (arith::conjugate(F, full_level) != full_level) {
        out.verdict = BaseChangeVerdict::NotBaseChange;
        return out;
    }
    const auto table = prime_table(F, r.prime_bound);
    std::map<Ideal, std::string> label_of;
    for (const auto& [label, p] : table) label_of.emplace(p.ideal, label);
    long checked = 0;
    for (std::size_t k = 0; k < r.primes.size(); ++k) {
        const auto& p = table.at(r.primes[k]);
        const Ideal conj = arith::conjugate(F, p.ideal);
        if (conj == p.ideal) continue;
        const QVector* other = r.eigenvalue(label_of.at(conj));
        if (!other) continue;
        ++checked;
        if (*other != r.eigenvalues[k]) {
            out.verdict = BaseChangeVerdict::NotBaseChange;
            out.evidence = checked;
            return out;
        }
    }
    out.evidence = checked;
    if (!qdb) {
        out.verdict = BaseChangeVerdict::Stage1Only;
        return out;
    }
    out.verdict = BaseChangeVerdict::Candidate;
    if (r.dim() != 1) return out;
    for (const auto& g : *qdb) {
        if (g.dim() != 1) continue;
        long matches = 0;
        bool ok = true;
        for (std::size_t k = 0; k < r.primes.size() && ok; ++k) {
            const auto& p = table.at(r.primes[k]);
            if (p.ramified) continue;
            const QVector* al = g.eigenvalue(p.p.get_str());
            if (!al) continue;
            const Rational& ap = r.eigenvalues[k][0];
            const Rational& agl = (*al)[0];
            const Rational expect = p.residue_degree == 1 ? agl : agl * agl - 2 * Rational(p.p);
            if (ap != expect) ok = false;
            ++matches;
        }
        if (ok && matches > 0) {
            out.verdict = BaseChangeVerdict::Matched;
            out.match = g.label();
            out.evidence = matches;
            return out;
        }
    }
    return out;
}

std::map<Ideal, QVector> ideal_coefficients(const NewformRecord& r, const BaseField& F, long bound) {
    HeckeField E(r.heckefield);
    const Ideal full_level = arith::multiply(F, r.level, r.disc);
    std::map<std::string, int> al_sign(r.al.begin(), r.al.end());
    // prime power coefficients, computed lazily
    std::map<std::pair<Ideal, int>, std::optional<QVector>> cache;
    auto prime_power = [&](const arith::PrimeIdeal& p, int k) -> std::optional<QVector> {
        auto key = std::make_pair(p.ideal, k);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        std::optional<QVector> value;
        const int v = arith::valuation(F, full_level, p);
        if (v == 0) {
            const QVector* ap = r.eigenvalue(p.label());
            require(ap != nullptr, "lfunction: eigenvalue at " + p.label() + " missing below the bound");
            QVector prev = E.from_rational(1), cur = *ap;
            for (int j = 1; j < k; ++j) {
                QVector next = E.sub(E.mul(*ap, cur), E.scale(prev, Rational(p.norm())));
                prev = std::move(cur);
                cur = std::move(next);
            }
            value = k == 0 ? E.from_rational(1) : cur;
        } else if (v == 1 && al_sign.count(p.label())) {
            // a_p = -w_p
            const Rational ap = -al_sign.at(p.label());
            Rational pw = 1;
            for (int j = 0; j < k; ++j) pw *= ap;
            value = E.from_rational(pw);
        }
        cache[key] = value;
        return value;
    };
    std::map<Ideal, QVector> out;
    for (long n = 1; n <= bound; ++n)
        for (const auto& m : arith::ideals_of_norm(F, n)) {
            QVector a = E.from_rational(1);
            bool ok = true;
            for (const auto& [p, k] : arith::factor_ideal(F, m)) {
                auto c = prime_power(p, k);
                if (!c) {
                    ok = false;
                    break;
                }
                a = E.mul(a, *c);
            }
            if (ok) out.emplace(m, a);
        }
    return out;
}

LFunctionData lfunction_coefficients(const NewformRecord& r, const BaseField& F, long bound) {
    require(bound <= r.prime_bound || bound <= 1, "lfunction_coefficients: bound exceeds the stored prime bound");
    LFunctionData out;
    const Integer dF = F.discriminant();
    out.conductor = dF * dF * arith::multiply(F, r.level, r.disc).norm();
    out.gamma_exponent = F.degree();
    HeckeField E(r.heckefield);
    const auto coeffs = ideal_coefficients(r, F, bound);
    out.coefficients.assign(static_cast<std::size_t>(bound) + 1, std::nullopt);
    for (long n = 1; n <= bound; ++n) {
        QVector sum = E.from_rational(0);
        bool ok = true;
        for (const auto& m : arith::ideals_of_norm(F, n)) {
            auto it = coeffs.find(m);
            if (it == coeffs.end()) {
                ok = false;
                break;
            }
            sum = E.add(sum, it->second);
        }
        if (ok)
            out.coefficients[n] = sum;
        else
            out.missing_norms.push_back(n);
    }
    return out;
}

HeckeFieldStats hecke_field_stats(const std::vector<NewformRecord>& records) {
    HeckeFieldStats s;
    for (const auto& r : records) {
        if (r.dim() != 2) continue;
        const Integer disc = fundamental_discriminant(linalg::quadratic_discriminant(r.heckefield));
        s.counts[{r.field_label, disc}] += 1;
        if (disc > 0) {
            ++s.real;
            auto it = s.max_real_disc.find(r.field_label);
            if (it == s.max_real_disc.end() || it->second < disc) s.max_real_disc[r.field_label] = disc;
        } else {
            ++s.imaginary;
        }
    }
    return s;
}

std::string HeckeFieldStats::csv() const {
    std::ostringstream os;
    os << "field_label,disc_E,count\n";
    for (const auto& [key, count] : counts) os << key.first << "," << key.second.get_str() << "," << count << "\n";
    return os.str();
}

std::string HeckeFieldStats::report() const {
    std::ostringstream os;
    long total = 0;
    for (const auto& [key, count] : counts) total += count;
    os << "quadratic Hecke fields: " << total << " (real " << real << ", imaginary " << imaginary << ")\n";
    for (const auto& [field, d] : max_real_disc) os << "  " << field << ": max real discriminant " << d.get_str() << "\n";
    return os.str();
}

}  // namespace hmf::analysis
