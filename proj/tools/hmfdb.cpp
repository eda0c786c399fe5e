#include "hmf/db.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace hmf;

namespace {

constexpr int kUsage = 1;
constexpr int kVerification = 2;

std::string default_data_dir() {
    if (const char* env = std::getenv("HMF_DATA_DIR")) return env;
    return HMF_DEFAULT_DATA_DIR;
}

int run_build(const std::string& field, long min_norm, long max_norm, long bound, const std::string& out,
              bool quiet) {
    db::BuildReport report;
    auto t0 = std::chrono::steady_clock::now();
    const db::FieldSetup setup = db::load_field_setup(field);
    const double pre = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto records = db::build_database(setup, min_norm, max_norm, bound, &report);
    report.precompute_seconds = pre;
    db::write_database_file(out, records);
    if (!quiet) std::cerr << report.text();
    std::cout << "wrote " << records.size() << " records to " << out << "\n";
    return 0;
}

int run_query(const std::string& path, const std::vector<std::string>& filters, bool count, bool csv) {
    std::vector<db::Filter> fs;
    for (const auto& f : filters) fs.push_back(db::parse_filter(f));
    const auto hits = db::query(db::read_database_file(path), fs);
    if (count)
        std::cout << hits.size() << "\n";
    else
        std::cout << (csv ? db::format_csv(hits) : db::format_table(hits));
    return 0;
}

int run_crosscheck(const std::string& data_dir, long N, long p, long q, long bound) {
    const auto rep = db::crosscheck_pnew(data_dir + "/algebras", N, p, q, bound);
    std::cout << rep.text();
    return rep.agree ? 0 : kVerification;
}

int run_stats(const std::string& path, const std::string& histogram) {
    const auto records = db::read_database_file(path);
    const auto st = analysis::hecke_field_stats(records);
    std::map<std::string, std::map<std::size_t, long>> dims;
    for (const auto& r : records) dims[r.field_label][r.dim()] += 1;
    std::cout << "records: " << records.size() << "\n";
    for (const auto& [field, by_dim] : dims) {
        std::cout << field << " by Hecke field degree:";
        for (const auto& [d, n] : by_dim) std::cout << " " << d << ":" << n;
        std::cout << "\n";
    }
    std::cout << st.report();
    if (!histogram.empty()) {
        std::ofstream out(histogram);
        require(static_cast<bool>(out), "cannot write " + histogram);
        out << st.csv();
    }
    return 0;
}

int run_verify(const std::string& path, const std::string& field, std::size_t samples, unsigned seed) {
    const auto records = db::read_database_file(path);
    const auto setup = db::load_field_setup(field);
    int failures = 0;
    for (const auto& sc : db::spot_check(setup, records, samples, seed)) {
        std::cout << (sc.ok ? "ok   " : "FAIL ") << sc.record << " at " << sc.prime << "\n";
        if (!sc.ok) ++failures;
    }
    return failures ? kVerification : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hilbert modular forms via definite quaternion algebras"};
    app.require_subcommand(1);

    std::string field, out, dbfile, histogram, data_dir = default_data_dir();
    long min_norm = 1, max_norm = 1, bound = 50, level = 0, p = 0, q = 0;
    bool quiet = false, count = false, csv = false;
    std::vector<std::string> filters;
    std::size_t samples = 20;
    unsigned seed = 1;

    auto* build = app.add_subcommand("build", "compute newforms for a range of level norms");
    build->add_option("--field", field, "field configuration (.field)")->required()->check(CLI::ExistingFile);
    build->add_option("--min-norm", min_norm, "smallest level norm")->check(CLI::PositiveNumber);
    build->add_option("--max-norm", max_norm, "largest level norm")->required();
    build->add_option("--prime-bound", bound, "largest norm of a stored Hecke eigenvalue")->check(CLI::Range(2L, 100000L));
    build->add_option("--out", out, "output database")->required();
    build->add_flag("--quiet", quiet, "no run report");

    auto* query = app.add_subcommand("query", "filter a database (filters are key=value)");
    query->add_option("--db", dbfile, "database file")->required()->check(CLI::ExistingFile);
    query->add_option("filters", filters, "field=, disc=, norm=a..b, dim=a..b, cm=, bc=");
    query->add_flag("--count", count, "print the number of matches only");
    query->add_flag("--csv", csv, "CSV output");

    auto* cross = app.add_subcommand("crosscheck", "compare the computations with D=p and D=q over Q");
    cross->add_option("--level", level, "level N")->required()->check(CLI::PositiveNumber);
    cross->add_option("--p", p, "first prime exactly dividing N")->required();
    cross->add_option("--q", q, "second prime exactly dividing N")->required();
    cross->add_option("--prime-bound", bound, "compare eigenvalues up to this bound")->check(CLI::Range(2L, 100000L));
    cross->add_option("--data-dir", data_dir, "directory holding algebras/");

    auto* stats = app.add_subcommand("stats", "Hecke field statistics of a database");
    stats->add_option("--db", dbfile, "database file")->required()->check(CLI::ExistingFile);
    stats->add_option("--histogram-out", histogram, "CSV histogram of quadratic Hecke fields");

    auto* verify_cmd = app.add_subcommand("verify", "recompute random stored eigenvalues");
    verify_cmd->add_option("--db", dbfile, "database file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--field", field, "field configuration used to build it")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--samples", samples, "number of records to check");
    verify_cmd->add_option("--seed", seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*build) return run_build(field, min_norm, max_norm, bound, out, quiet);
        if (*query) return run_query(dbfile, filters, count, csv);
        if (*cross) return run_crosscheck(data_dir, level, p, q, bound);
        if (*stats) return run_stats(dbfile, histogram);
        if (*verify_cmd) return run_verify(dbfile, field, samples, seed);
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kVerification;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
