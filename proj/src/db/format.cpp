#include "hmf/db.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hmf::db {

namespace {

void put_list(std::ostream& os, const std::vector<Integer>& v) {
    os << '[';
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k].get_str();
    os << ']';
}

void put_vector(std::ostream& os, const linalg::QVector& v) {
    os << '[';
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k].get_str();
    os << ']';
}

void put_ideal(std::ostream& os, const Ideal& I) {
    os << '[' << I.norm().get_str() << ',' << I.a.get_str() << ',' << I.b.get_str() << ',' << I.d.get_str() << ']';
}

bool plain_token(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c != ';' && c != '=' && c != '[' && c != ']' && c != ',' &&
                                                                 static_cast<unsigned char>(c) > 32 &&
                                                                 static_cast<unsigned char>(c) < 127; });
}

class Cursor {
public:
    explicit Cursor(const std::string& s) : s_(s) {}

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    void key(const char* name) {
        const std::string k(name);
        if (s_.compare(pos_, k.size(), k) != 0) fail("expected field '" + k + "'");
        pos_ += k.size();
        expect('=');
    }
    void sep() { expect(';'); }

    // Up to the next ';' (or end), without brackets.
    std::string token() {
        const std::size_t start = pos_;
        while (!done() && peek() != ';' && peek() != ',' && peek() != '[' && peek() != ']') ++pos_;
        return s_.substr(start, pos_ - start);
    }

    Integer integer() {
        const std::size_t start = pos_;
        if (peek() == '-') ++pos_;
        const std::size_t digits = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail("expected an integer");
        }
        const std::string t = s_.substr(start, pos_ - start);
        if (pos_ - digits > 1 && s_[digits] == '0') {
            pos_ = start;
            fail("leading zero in integer");
        }
        if (t == "-0") {
            pos_ = start;
            fail("negative zero");
        }
        return Integer(t);
    }

    long small() {
        const std::size_t start = pos_;
        const Integer v = integer();
        if (!v.fits_slong_p()) {
            pos_ = start;
            fail("integer out of range");
        }
        return v.get_si();
    }

    Rational rational() {
        const std::size_t start = pos_;
        const Integer num = integer();
        if (peek() != '/') return Rational(num);
        ++pos_;
        const std::size_t den_pos = pos_;
        const Integer den = integer();
        if (den <= 1) {
            pos_ = den_pos;
            fail("denominator must exceed 1");
        }
        Rational q(num, den);
        q.canonicalize();
        if (q.get_den() != den) {
            pos_ = start;
            fail("fraction not in lowest terms");
        }
        return q;
    }

    template <class F>
    void list(F&& item) {
        expect('[');
        if (peek() == ']') {
            ++pos_;
            return;
        }
        for (;;) {
            item();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(']');
            return;
        }
    }

    Ideal ideal() {
        const std::size_t start = pos_;
        std::vector<Integer> v;
        list([&] { v.push_back(integer()); });
        if (v.size() != 4) {
            pos_ = start;
            fail("an ideal is [norm,a,b,d]");
        }
        Ideal I{v[1], v[2], v[3]};
        if (I.a <= 0 || I.d <= 0 || I.b < 0 || I.b >= I.a || I.a % I.d != 0 || I.b % I.d != 0 || I.norm() != v[0]) {
            pos_ = start;
            fail("ideal not in Hermite normal form");
        }
        return I;
    }

    std::size_t pos() const { return pos_; }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const NewformRecord& r) {
    require(plain_token(r.field_label), "serialize: bad field label '" + r.field_label + "'");
    require(plain_token(r.version), "serialize: bad version '" + r.version + "'");
    require(r.bc_match.empty() || plain_token(r.bc_match), "serialize: bad base change match");
    require(r.primes.size() == r.eigenvalues.size(), "serialize: primes and eigenvalues differ in length");
    std::ostringstream os;
    os << "field=" << r.field_label << ";disc=";
    put_ideal(os, r.disc);
    os << ";level=";
    put_ideal(os, r.level);
    os << ";index=" << r.index << ";dim=" << r.dim() << ";heckefield=";
    put_list(os, r.heckefield);
    os << ";AL=[";
    for (std::size_t k = 0; k < r.al.size(); ++k) {
        require(plain_token(r.al[k].first) && (r.al[k].second == 1 || r.al[k].second == -1),
                "serialize: bad Atkin-Lehner entry");
        os << (k ? "," : "") << '[' << r.al[k].first << ',' << r.al[k].second << ']';
    }
    os << "];primes=[";
    for (std::size_t k = 0; k < r.primes.size(); ++k) {
        require(plain_token(r.primes[k]), "serialize: bad prime label");
        os << (k ? "," : "") << r.primes[k];
    }
    os << "];eigenvalues=[";
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
        require(r.eigenvalues[k].size() == r.dim(), "serialize: eigenvalue of the wrong degree");
        if (k) os << ',';
        put_vector(os, r.eigenvalues[k]);
    }
    os << "];cm=" << analysis::to_string(r.cm) << ";cm_disc=" << r.cm_disc.get_str() << ";cm_evidence=" << r.cm_evidence
       << ";bc=" << analysis::to_string(r.bc) << ";bc_match=" << r.bc_match << ";bc_evidence=" << r.bc_evidence
       << ";bound=" << r.prime_bound << ";version=" << r.version;
    return os.str();
}

NewformRecord parse_record(const std::string& line) {
    Cursor c(line);
    NewformRecord r;
    c.key("field");
    r.field_label = c.token();
    if (r.field_label.empty()) c.fail("empty field label");
    c.sep();
    c.key("disc");
    r.disc = c.ideal();
    c.sep();
    c.key("level");
    r.level = c.ideal();
    c.sep();
    c.key("index");
    const long index = c.small();
    if (index < 0) c.fail("negative index");
    r.index = static_cast<std::size_t>(index);
    c.sep();
    c.key("dim");
    const std::size_t dim_pos = c.pos();
    const long dim = c.small();
    c.sep();
    c.key("heckefield");
    c.list([&] { r.heckefield.push_back(c.integer()); });
    if (r.heckefield.size() < 2 || r.heckefield.back() == 0) c.fail("Hecke field polynomial must have positive degree");
    if (static_cast<long>(r.dim()) != dim) throw ParseError("dim does not match the Hecke field degree", dim_pos);
    c.sep();
    c.key("AL");
    c.list([&] {
        c.expect('[');
        std::string label = c.token();
        if (label.empty()) c.fail("empty prime label");
        c.expect(',');
        const long s = c.small();
        if (s != 1 && s != -1) c.fail("Atkin-Lehner sign must be 1 or -1");
        c.expect(']');
        r.al.emplace_back(std::move(label), static_cast<int>(s));
    });
    c.sep();
    c.key("primes");
    c.list([&] {
        std::string label = c.token();
        if (label.empty()) c.fail("empty prime label");
        r.primes.push_back(std::move(label));
    });
    c.sep();
    c.key("eigenvalues");
    c.list([&] {
        linalg::QVector v;
        const std::size_t start = c.pos();
        c.list([&] { v.push_back(c.rational()); });
        if (v.size() != r.dim()) throw ParseError("eigenvalue has the wrong number of coordinates", start);
        r.eigenvalues.push_back(std::move(v));
    });
    if (r.eigenvalues.size() != r.primes.size()) c.fail("eigenvalue count differs from the prime count");
    c.sep();
    c.key("cm");
    {
        const std::size_t at = c.pos();
        try {
            r.cm = analysis::parse_cm_verdict(c.token());
        } catch (const PreconditionError&) {
            throw ParseError("unknown CM verdict", at);
        }
    }
    c.sep();
    c.key("cm_disc");
    r.cm_disc = c.integer();
    c.sep();
    c.key("cm_evidence");
    r.cm_evidence = c.small();
    c.sep();
    c.key("bc");
    {
        const std::size_t at = c.pos();
        try {
            r.bc = analysis::parse_base_change_verdict(c.token());
        } catch (const PreconditionError&) {
            throw ParseError("unknown base change verdict", at);
        }
    }
    c.sep();
    c.key("bc_match");
    r.bc_match = c.token();
    c.sep();
    c.key("bc_evidence");
    r.bc_evidence = c.small();
    c.sep();
    c.key("bound");
    r.prime_bound = c.small();
    c.sep();
    c.key("version");
    r.version = c.token();
    if (!c.done()) c.fail("trailing characters");
    return r;
}

void write_database(std::ostream& os, const std::vector<NewformRecord>& records) {
    os << "# " << kVersion << " newform database, one record per line\n";
    for (const auto& r : records) os << serialize(r) << '\n';
}

std::vector<NewformRecord> read_database(std::istream& is) {
    std::vector<NewformRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(parse_record(line));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + std::string(e.what()), e.position());
        }
    }
    return out;
}

std::vector<NewformRecord> read_database_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open database " + path);
    return read_database(in);
}

void write_database_file(const std::string& path, const std::vector<NewformRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot write database " + path);
    write_database(out, records);
    out.flush();
    require(static_cast<bool>(out), "error writing database " + path);
}

namespace {

std::pair<Integer, Integer> parse_range(const std::string& key, const std::string& v) {
    auto number = [&](const std::string& t) {
        Integer n;
        if (t.empty() || n.set_str(t, 10) != 0) throw PreconditionError("filter " + key + ": bad number '" + t + "'");
        return n;
    };
    const auto dots = v.find("..");
    if (dots == std::string::npos) {
        const Integer n = number(v);
        return {n, n};
    }
    return {number(v.substr(0, dots)), number(v.substr(dots + 2))};
}

}  // namespace

Filter parse_filter(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw PreconditionError("filter '" + text + "' is not key=value");
    Filter f{text.substr(0, eq), text.substr(eq + 1)};
    static const std::vector<std::string> keys{"field", "disc", "norm", "dim", "cm", "bc"};
    if (std::find(keys.begin(), keys.end(), f.key) == keys.end())
        throw PreconditionError("unknown filter key '" + f.key + "' (known: field, disc, norm, dim, cm, bc)");
    if (f.key == "cm") analysis::parse_cm_verdict(f.value);
    if (f.key == "bc") analysis::parse_base_change_verdict(f.value);
    if (f.key == "norm" || f.key == "dim" || f.key == "disc") parse_range(f.key, f.value);
    return f;
}

std::vector<NewformRecord> query(const std::vector<NewformRecord>& records, const std::vector<Filter>& filters) {
    std::vector<Filter> checked;
    for (const auto& f : filters) checked.push_back(parse_filter(f.key + "=" + f.value));
    std::vector<NewformRecord> out;
    for (const auto& r : records) {
        bool keep = true;
        for (const auto& f : checked) {
            if (f.key == "field") {
                keep = r.field_label == f.value;
            } else if (f.key == "cm") {
                keep = r.cm == analysis::parse_cm_verdict(f.value);
            } else if (f.key == "bc") {
                keep = r.bc == analysis::parse_base_change_verdict(f.value);
            } else {
                const auto [lo, hi] = parse_range(f.key, f.value);
                const Integer x = f.key == "norm" ? r.level.norm() : f.key == "disc" ? r.disc.norm() : Integer(r.dim());
                keep = lo <= x && x <= hi;
            }
            if (!keep) break;
        }
        if (keep) out.push_back(r);
    }
    return out;
}

namespace {

std::string al_text(const NewformRecord& r) {
    std::string s;
    for (const auto& [label, sign] : r.al) s += (s.empty() ? "" : " ") + label + (sign > 0 ? "+" : "-");
    return s;
}

std::string first_eigenvalues(const NewformRecord& r, std::size_t count) {
    std::string s;
    for (std::size_t k = 0; k < r.primes.size() && k < count; ++k) {
        std::ostringstream os;
        put_vector(os, r.eigenvalues[k]);
        std::string v = os.str();
        if (r.dim() == 1) v = v.substr(1, v.size() - 2);
        s += (s.empty() ? "" : " ") + r.primes[k] + ":" + v;
    }
    return s;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

std::string format_table(const std::vector<NewformRecord>& records) {
    std::vector<std::vector<std::string>> rows{{"field", "disc", "level", "index", "dim", "hecke field", "AL", "cm", "bc",
                                                "eigenvalues"}};
    for (const auto& r : records)
        rows.push_back({r.field_label, r.disc.str(), r.level.str(), std::to_string(r.index), std::to_string(r.dim()),
                        linalg::to_string(r.heckefield), al_text(r), analysis::to_string(r.cm),
                        analysis::to_string(r.bc), first_eigenvalues(r, 5)});
    std::vector<std::size_t> width(rows[0].size(), 0);
    for (const auto& row : rows)
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
    std::ostringstream os;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t k = 0; k < row.size(); ++k) {
            line += row[k];
            if (k + 1 < row.size()) line += std::string(width[k] - row[k].size() + 2, ' ');
        }
        os << line << '\n';
    }
    return os.str();
}

std::string format_csv(const std::vector<NewformRecord>& records) {
    std::ostringstream os;
    os << "field,disc,level,level_norm,index,dim,heckefield,al,cm,cm_disc,bc,eigenvalues\n";
    for (const auto& r : records) {
        os << csv_cell(r.field_label) << ',' << csv_cell(r.disc.str()) << ',' << csv_cell(r.level.str()) << ','
           << r.level.norm().get_str() << ',' << r.index << ',' << r.dim() << ',' << csv_cell(linalg::to_string(r.heckefield))
           << ',' << csv_cell(al_text(r)) << ',' << analysis::to_string(r.cm) << ',' << r.cm_disc.get_str() << ','
           << analysis::to_string(r.bc) << ',' << csv_cell(first_eigenvalues(r, r.primes.size())) << '\n';
    }
    return os.str();
}

}  // namespace hmf::db
