#pragma once

#include "hmf/common.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <string>

namespace hmf::arith {

// Element a + b*omega of F, where omega^2 = t*omega + s. Elements of Q carry
// t = s = 0 and b = 0. The (t, s) pair travels with the value so that the
// usual arithmetic operators work without a field handle.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(Rational a, Rational b, int t, long s)
        : c_{std::move(a), std::move(b)}, t_(t), s_(s) {}

    const Rational& a() const noexcept { return c_[0]; }
    const Rational& b() const noexcept { return c_[1]; }
    const Rational& operator[](int k) const noexcept { return c_[k]; }
    int t() const noexcept { return t_; }
    long s() const noexcept { return s_; }

    FieldElement with(Rational a, Rational b) const { return {std::move(a), std::move(b), t_, s_}; }
    FieldElement scalar(const Rational& q) const { return with(q, 0); }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0; }
    bool is_integral() const { return c_[0].get_den() == 1 && c_[1].get_den() == 1; }
    bool is_rational() const { return c_[1] == 0; }

    FieldElement conjugate() const { return with(c_[0] + c_[1] * t_, -c_[1]); }
    Rational norm() const { return c_[0] * c_[0] + c_[0] * c_[1] * t_ - c_[1] * c_[1] * s_; }
    Rational trace() const { return 2 * c_[0] + c_[1] * t_; }
    FieldElement inverse() const;

    // Exact sign of the image under the real embedding `which` (0 or 1).
    // Embedding 0 sends omega to its larger real root.
    int sign(int which) const;
    double to_double(int which) const;
    bool is_totally_positive() const { return sign(0) > 0 && sign(1) > 0; }

    // Common denominator of both coordinates.
    Integer denominator() const { return lcm(c_[0].get_den(), c_[1].get_den()); }

    FieldElement operator-() const { return with(-c_[0], -c_[1]); }
    FieldElement& operator+=(const FieldElement& o) { c_[0] += o.c_[0]; c_[1] += o.c_[1]; return *this; }
    FieldElement& operator-=(const FieldElement& o) { c_[0] -= o.c_[0]; c_[1] -= o.c_[1]; return *this; }
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }

    friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
    friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
    friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
    friend FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }
    friend bool operator==(const FieldElement& x, const FieldElement& y) {
        return x.c_[0] == y.c_[0] && x.c_[1] == y.c_[1];
    }
    friend bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }
    // Lexicographic on coordinates; used only for deterministic tie-breaks.
    friend bool lex_less(const FieldElement& x, const FieldElement& y) {
        if (x.c_[0] != y.c_[0]) return x.c_[0] < y.c_[0];
        return x.c_[1] < y.c_[1];
    }

    std::string str() const;

private:
    std::array<Rational, 2> c_{};
    int t_ = 0;
    long s_ = 0;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

// F = Q (degree 1) or a real quadratic field with narrow class number one.
class BaseField {
public:
    int degree() const noexcept { return degree_; }
    // Squarefree radicand; 0 for Q.
    long radicand() const noexcept { return d_; }
    long discriminant() const noexcept { return disc_; }
    int omega_t() const noexcept { return t_; }
    long omega_s() const noexcept { return s_; }
    const FieldElement& fundamental_unit() const { return unit_; }
    // Generator of the totally positive units (unit^2 when the unit has norm -1).
    FieldElement totally_positive_unit() const { return unit_ * unit_; }
    bool narrow_class_number_one() const noexcept { return true; }

    FieldElement zero() const { return {0, 0, t_, s_}; }
    FieldElement one() const { return {1, 0, t_, s_}; }
    FieldElement omega() const;
    FieldElement element(Rational a, Rational b = 0) const;
    FieldElement from_int(long a) const { return element(a, 0); }

    // "2.2.5.1"-style label.
    std::string label() const;

    bool operator==(const BaseField& o) const { return d_ == o.d_; }

private:
    friend BaseField make_field(long d);
    int degree_ = 1;
    long d_ = 0;
    long disc_ = 1;
    int t_ = 0;
    long s_ = 0;
    FieldElement unit_;
};

// Discriminants of the real quadratic fields this engine accepts.
inline constexpr std::array<long, 4> kSupportedDiscriminants{5, 8, 13, 17};

// d = 0 gives Q. Otherwise d may be the squarefree radicand or the field
// discriminant (so 2 and 8 both give Q(sqrt 2)).
BaseField make_field(long d);

// Reads a field configuration file and re-verifies everything it claims.
struct FieldConfig {
    long d = 0;
    bool allowlisted = false;
    std::array<Integer, 2> unit{};
    std::string algebra_path;  // optional, relative to the config file
};

FieldConfig parse_field_config(const std::string& text);
FieldConfig read_field_config(const std::string& path);
BaseField field_from_config(const FieldConfig& cfg);

}  // namespace hmf::arith
