#pragma once

#include "hmf/analysis.hpp"
#include "hmf/brandt.hpp"

#include <iosfwd>
#include <memory>

namespace hmf::db {

using analysis::NewformRecord;
using arith::BaseField;
using arith::Ideal;
using arith::PrimeIdeal;

inline constexpr const char* kVersion = "hmfdb-1.0";
// Hecke operators are always computed up to at least this norm, so the
// old/new split and the decomposition have enough primes to work with.
inline constexpr long kMinOperatorBound = 30;

// Everything computed once per field: the algebra, its maximal order and the
// right ideal classes.
struct FieldSetup {
    BaseField F;
    quat::LoadedAlgebra B;
    quat::IdealClassSet classes;
    std::string config_path;
};

// Reads a .field file; its `algebra` entry is resolved relative to it.
FieldSetup load_field_setup(const std::string& field_path);
FieldSetup load_algebra_setup(const std::string& algebra_path);

struct StageTimes {
    double module = 0, operators = 0, split = 0, oldnew = 0, decompose = 0;
    double total() const { return module + operators + split + oldnew + decompose; }
};

// One Brandt level after the full pipeline.
struct LevelData {
    Ideal level;
    std::size_t module_dim = 0, eisenstein_dim = 0, cusp_dim = 0, new_dim = 0;
    std::vector<Rational> weights;  // the form making every T_p self-adjoint on `full`
    std::vector<PrimeIdeal> hecke_primes;  // coprime to level * disc, in label order
    std::vector<std::pair<PrimeIdeal, int>> al_primes;  // p^e || level * disc
    linalg::HeckeSpace full, cusp, new_space;
    std::vector<linalg::HeckeConstituent> constituents;
    StageTimes times;
};

// Per-level pipeline over one field setup, memoized so that lower levels are
// computed once and reused by the old/new split.
class Pipeline {
public:
    Pipeline(const FieldSetup& setup, long prime_bound);
    const FieldSetup& setup() const { return *setup_; }
    long prime_bound() const { return bound_; }
    long operator_bound() const { return std::max(bound_, kMinOperatorBound); }

    // Throws PreconditionError if the level meets the discriminant.
    const LevelData& level(const Ideal& N);
    std::vector<NewformRecord> records(const Ideal& N);

private:
    std::shared_ptr<const FieldSetup> setup_;
    long bound_;
    std::map<Ideal, std::unique_ptr<LevelData>> cache_;
    std::shared_ptr<brandt::ElementCache> elements_;
    std::unique_ptr<LevelData> compute(const Ideal& N);
};

struct LevelReport {
    Ideal level;
    bool skipped = false;  // meets the discriminant
    std::size_t module_dim = 0, eisenstein_dim = 0, cusp_dim = 0, new_dim = 0, records = 0;
    StageTimes times;
};

struct BuildReport {
    std::string field_label;
    long min_norm = 0, max_norm = 0, prime_bound = 0;
    double precompute_seconds = 0;
    std::vector<LevelReport> levels;
    std::size_t record_count() const;
    std::string text(bool with_times = true) const;
};

// All levels with min_norm <= Nm(N) <= max_norm, both conjugates included.
std::vector<NewformRecord> build_database(const FieldSetup& setup, long min_norm, long max_norm, long prime_bound,
                                          BuildReport* report = nullptr);

std::string serialize(const NewformRecord& r);
// Throws ParseError with the offset of the offending character.
NewformRecord parse_record(const std::string& line);

// Lines starting with '#' are comments.
void write_database(std::ostream& os, const std::vector<NewformRecord>& records);
std::vector<NewformRecord> read_database(std::istream& is);
std::vector<NewformRecord> read_database_file(const std::string& path);
void write_database_file(const std::string& path, const std::vector<NewformRecord>& records);

// Conjunctive filters given as key=value with keys field, disc, norm, dim,
// cm, bc. norm and dim accept a range "a..b". Unknown keys are a
// PreconditionError.
struct Filter {
    std::string key, value;
};
Filter parse_filter(const std::string& text);
std::vector<NewformRecord> query(const std::vector<NewformRecord>& records, const std::vector<Filter>& filters);
std::string format_table(const std::vector<NewformRecord>& records);
std::string format_csv(const std::vector<NewformRecord>& records);

struct CrosscheckReport {
    long level = 0, p = 0, q = 0;
    std::size_t dim_p = 0, dim_q = 0;  // new dimensions on either side
    std::size_t constituents = 0;
    bool agree = false;
    std::vector<std::string> diffs;
    std::string text() const;
};

// Compares the newforms of level N computed from the algebras ramified at p
// and at q (p, q exactly dividing N). Algebras are loaded from
// `algebra_dir`/q_d<p>.alg.
CrosscheckReport crosscheck_pnew(const std::string& algebra_dir, long N, long p, long q, long prime_bound = 50);

struct SpotCheck {
    std::string record, prime;
    bool ok = false;
};

// Recomputes T_p for a random stored prime of `samples` random records and
// checks that the characteristic polynomial of the stored a_p divides that
// of T_p on the full Brandt module.
std::vector<SpotCheck> spot_check(const FieldSetup& setup, const std::vector<NewformRecord>& records,
                                  std::size_t samples, unsigned seed);

}  // namespace hmf::db
