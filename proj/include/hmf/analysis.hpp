#pragma once

#include "hmf/arith/ideal.hpp"
#include "hmf/linalg/poly.hpp"

#include <map>
#include <optional>

namespace hmf::analysis {

using arith::BaseField;
using arith::Ideal;
using linalg::IntPolynomial;
using linalg::QVector;

enum class CMVerdict { NotCM, Candidate, Untested, Insufficient };
enum class BaseChangeVerdict { NotApplicable, NotBaseChange, Stage1Only, Candidate, Matched };

std::string to_string(CMVerdict v);
std::string to_string(BaseChangeVerdict v);
CMVerdict parse_cm_verdict(const std::string& s);
BaseChangeVerdict parse_base_change_verdict(const std::string& s);

struct NewformRecord {
    std::string field_label;
    Ideal disc;  // discriminant of the quaternion algebra
    Ideal level;  // level of the Brandt module; the form has level disc * level
    std::size_t index = 0;  // constituent index within the level
    IntPolynomial heckefield;
    // Labels of the primes p not dividing disc * level with Nm(p) <= bound,
    // in canonical order, and a_p in the power basis of the Hecke field.
    std::vector<std::string> primes;
    std::vector<QVector> eigenvalues;
    // Atkin-Lehner signs w_p at p^e || disc * level (classical normalization).
    std::vector<std::pair<std::string, int>> al;
    CMVerdict cm = CMVerdict::Untested;
    Integer cm_disc = 0;
    long cm_evidence = 0;
    BaseChangeVerdict bc = BaseChangeVerdict::NotApplicable;
    std::string bc_match;
    long bc_evidence = 0;
    long prime_bound = 0;
    std::string version;

    std::size_t dim() const { return heckefield.empty() ? 0 : heckefield.size() - 1; }
    const QVector* eigenvalue(const std::string& prime_label) const;
    // field-disc-level-index with ideals as norm.a.b.d, unique within a database
    std::string label() const;
    bool operator==(const NewformRecord&) const = default;
};

// Sort order of records in a database.
bool record_less(const NewformRecord& a, const NewformRecord& b);

// Arithmetic in E = Q[x]/(g), elements in the power basis.
class HeckeField {
public:
    explicit HeckeField(IntPolynomial g);
    std::size_t degree() const { return d_; }
    QVector from_rational(const Rational& q) const;
    QVector add(const QVector& a, const QVector& b) const;
    QVector sub(const QVector& a, const QVector& b) const;
    QVector mul(const QVector& a, const QVector& b) const;
    QVector scale(const QVector& a, const Rational& q) const;
    bool is_rational(const QVector& a) const;

private:
    IntPolynomial g_;
    std::size_t d_;
};

struct CMResult {
    CMVerdict verdict = CMVerdict::Untested;
    Integer disc = 0;   // fundamental discriminant of Q(sqrt(a_p^2 - 4 Nm p))
    long evidence = 0;  // a_p = 0 at primes inert in the candidate field
};

// Square classes of a_p^2 - 4 Nm(p) over the rational eigenvalues. Needs at
// least 10 eigenvalues (PreconditionError otherwise).
CMResult detect_cm(const NewformRecord& r, const BaseField& F);

struct BaseChangeResult {
    BaseChangeVerdict verdict = BaseChangeVerdict::NotApplicable;
    std::string match;  // label of the matched rational form
    long evidence = 0;
};

// Stage 1: sigma(N) = N and a_sigma(p) = a_p. Stage 2 (heuristic, only with
// qdb): a rational form g with a_p = a_l(g) at split p and
// a_p = a_l(g)^2 - 2l at inert p.
BaseChangeResult detect_base_change(const NewformRecord& r, const BaseField& F,
                                    const std::vector<NewformRecord>* qdb = nullptr);

struct LFunctionData {
    Integer conductor;
    int gamma_exponent = 1;
    // coefficients[n] for 1 <= n <= bound, summed over ideals of norm n;
    // empty when some ideal of that norm has no available coefficient.
    std::vector<std::optional<QVector>> coefficients;
    std::vector<long> missing_norms;
};

// Coefficients a_m for every integral ideal m with Nm(m) <= bound whose
// prime factors all have available data.
std::map<Ideal, QVector> ideal_coefficients(const NewformRecord& r, const BaseField& F, long bound);
LFunctionData lfunction_coefficients(const NewformRecord& r, const BaseField& F, long bound);

// Fundamental discriminant of Q(sqrt(n)), n not a square.
Integer fundamental_discriminant(const Integer& n);

struct HeckeFieldStats {
    std::map<std::pair<std::string, Integer>, long> counts;  // (field, disc E) -> count
    std::map<std::string, Integer> max_real_disc;
    long real = 0, imaginary = 0;
    std::string csv() const;
    std::string report() const;
};

HeckeFieldStats hecke_field_stats(const std::vector<NewformRecord>& records);

}  // namespace hmf::analysis
