#include "hmf/arith/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hmf::arith {

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    const Rational& a = c_[0];
    const Rational& b = c_[1];
    Rational na = a * o.c_[0] + b * o.c_[1] * s_;
    Rational nb = a * o.c_[1] + b * o.c_[0] + b * o.c_[1] * t_;
    c_[0] = std::move(na);
    c_[1] = std::move(nb);
    return *this;
}

FieldElement FieldElement::inverse() const {
    Rational n = norm();
    require(n != 0, "FieldElement::inverse: zero element");
    FieldElement c = conjugate();
    return c.with(c.a() / n, c.b() / n);
}

namespace {

// Sign of u + v*sqrt(delta) for delta > 0 not a square (or v = 0).
int sign_quadratic(const Rational& u, const Rational& v, long delta) {
    int su = sgn(u), sv = sgn(v);
    if (sv == 0 || delta == 0) return su;
    if (su == 0) return sv;
    if (su == sv) return su;
    // Opposite signs: compare u^2 with v^2 * delta.
    Rational lhs = u * u, rhs = v * v * delta;
    if (lhs > rhs) return su;
    return sv;  // never equal: delta is not a rational square
}

}  // namespace

int FieldElement::sign(int which) const {
    long delta = static_cast<long>(t_) * t_ + 4 * s_;
    Rational u = 2 * c_[0] + c_[1] * t_;
    Rational v = which == 0 ? c_[1] : Rational(-c_[1]);
    return sign_quadratic(u, v, delta);
}

double FieldElement::to_double(int which) const {
    double delta = static_cast<double>(t_) * t_ + 4.0 * static_cast<double>(s_);
    double root = (t_ + (which == 0 ? 1.0 : -1.0) * std::sqrt(delta)) / 2.0;
    return c_[0].get_d() + c_[1].get_d() * root;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) {
    if (x.b() == 0) return os << x.a();
    return os << "(" << x.a() << (x.b() >= 0 ? "+" : "") << x.b() << "w)";
}

FieldElement BaseField::omega() const {
    require(degree_ == 2, "BaseField::omega: rational field has no omega");
    return {0, 1, t_, s_};
}

FieldElement BaseField::element(Rational a, Rational b) const {
    require(degree_ == 2 || b == 0, "BaseField::element: nonzero omega coordinate over Q");
    a.canonicalize();
    b.canonicalize();
    return {std::move(a), std::move(b), t_, s_};
}

std::string BaseField::label() const {
    if (degree_ == 1) return "1.1.1.1";
    return "2.2." + std::to_string(disc_) + ".1";
}

namespace {

bool squarefree(long d) {
    if (d <= 1) return false;
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

// Smallest unit > 1 under embedding 0, by the continued search on v.
FieldElement search_fundamental_unit(const BaseField& F) {
    long d = F.radicand();
    if (d % 4 == 1) {
        for (long v = 1; v < 100000; ++v) {
            for (int sgn4 : {-4, 4}) {
                Integer u2 = Integer(d) * v * v + sgn4;
                if (u2 > 0 && is_perfect_square(u2)) {
                    Integer u = isqrt(u2);
                    // (u + v sqrt d)/2 with sqrt d = 2w - 1.
                    return F.element(Rational(u - v, 2), v);
                }
            }
        }
    } else {
        for (long y = 1; y < 100000; ++y) {
            for (int sgn1 : {-1, 1}) {
                Integer x2 = Integer(d) * y * y + sgn1;
                if (x2 > 0 && is_perfect_square(x2)) return F.element(Rational(isqrt(x2)), y);
            }
        }
    }
    throw VerificationError("fundamental unit search exhausted");
}

}  // namespace

BaseField make_field(long d) {
    BaseField F;
    if (d == 0) {
        F.unit_ = FieldElement(-1, 0, 0, 0);
        return F;
    }
    long radicand = d;
    if (!squarefree(d)) {
        bool is_disc = d % 4 == 0 && squarefree(d / 4) && (d / 4) % 4 != 1;
        require(is_disc, "make_field: " + std::to_string(d) +
                             " is neither squarefree nor a quadratic field discriminant");
        radicand = d / 4;
    }
    long disc = radicand % 4 == 1 ? radicand : 4 * radicand;
    require(std::find(kSupportedDiscriminants.begin(), kSupportedDiscriminants.end(), disc) !=
                kSupportedDiscriminants.end(),
            "make_field: discriminant " + std::to_string(disc) +
                " is not on the narrow-class-number-one allowlist");
    F.degree_ = 2;
    F.d_ = radicand;
    F.disc_ = disc;
    if (radicand % 4 == 1) {
        F.t_ = 1;
        F.s_ = (radicand - 1) / 4;
    } else {
        F.t_ = 0;
        F.s_ = radicand;
    }
    F.unit_ = search_fundamental_unit(F);
    const FieldElement& e = F.unit_;
    verify(e.is_integral() && (e.norm() == 1 || e.norm() == -1), "fundamental unit has norm != +-1");
    verify(e != F.one() && e != -F.one(), "fundamental unit is torsion");
    // Narrow class number one requires a unit of norm -1.
    verify(e.norm() == -1, "field has no unit of norm -1; narrow class number exceeds one");
    // Minimality: no unit strictly between 1 and e in embedding 0 with small coordinates.
    double ev = e.to_double(0);
    for (long a = -10; a <= 10; ++a)
        for (long b = -10; b <= 10; ++b) {
            FieldElement x = F.element(a, b);
            Rational n = x.norm();
            if (n != 1 && n != -1) continue;
            double xv = x.to_double(0);
            verify(!(xv > 1.0 + 1e-12 && xv < ev - 1e-12), "fundamental unit is not minimal");
        }
    return F;
}

FieldConfig parse_field_config(const std::string& text) {
    FieldConfig cfg;
    std::istringstream in(text);
    std::string line;
    bool have_d = false;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        std::size_t line_start = offset;
        offset += line.size() + 1;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw ParseError("field config: expected key = value", line_start);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        std::istringstream vs(value);
        if (key == "d") {
            if (!(vs >> cfg.d)) throw ParseError("field config: bad d", line_start);
            have_d = true;
        } else if (key == "allowlisted") {
            cfg.allowlisted = value == "true";
        } else if (key == "unit") {
            std::string a, b;
            if (!(vs >> a >> b)) throw ParseError("field config: unit needs two coordinates", line_start);
            cfg.unit = {Integer(a), Integer(b)};
        } else if (key == "algebra") {
            cfg.algebra_path = value;
        } else {
            throw ParseError("field config: unknown key '" + key + "'", line_start);
        }
    }
    if (!have_d) throw ParseError("field config: missing d", offset);
    return cfg;
}

FieldConfig read_field_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open field config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    FieldConfig cfg = parse_field_config(ss.str());
    if (!cfg.algebra_path.empty() && cfg.algebra_path.front() != '/') {
        auto slash = path.find_last_of('/');
        if (slash != std::string::npos) cfg.algebra_path = path.substr(0, slash + 1) + cfg.algebra_path;
    }
    return cfg;
}

BaseField field_from_config(const FieldConfig& cfg) {
    require(cfg.allowlisted, "field config: field is not marked allowlisted");
    BaseField F = make_field(cfg.d);
    FieldElement claimed = F.degree() == 1 ? F.from_int(-1)
                                           : F.element(Rational(cfg.unit[0]), Rational(cfg.unit[1]));
    verify(claimed == F.fundamental_unit(),
           "field config: fundamental unit " + claimed.str() + " disagrees with computed " +
               F.fundamental_unit().str());
    return F;
}

}  // namespace hmf::arith
