#include "hmf/db.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace hmf::db {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

FieldSetup setup_from(const BaseField& F, const std::string& algebra_path, const std::string& config_path) {
    const quat::AlgebraConfig cfg = quat::read_algebra_config(algebra_path);
    require(cfg.field_d == F.radicand() || (F.degree() == 2 && cfg.field_d == F.discriminant()),
            "algebra " + algebra_path + " is defined over a different field");
    FieldSetup s{F, quat::load_algebra_config(F, cfg), {}, config_path};
    s.classes = quat::right_ideal_classes(s.B);
    return s;
}

bool divides(const BaseField& F, const Ideal& a, const Ideal& b) { return arith::contains(F, a, b); }

}  // namespace

FieldSetup load_field_setup(const std::string& field_path) {
    const arith::FieldConfig cfg = arith::read_field_config(field_path);
    require(!cfg.algebra_path.empty(), "field configuration " + field_path + " names no algebra");
    const BaseField F = arith::field_from_config(cfg);
    return setup_from(F, cfg.algebra_path, field_path);
}

FieldSetup load_algebra_setup(const std::string& algebra_path) {
    const quat::AlgebraConfig cfg = quat::read_algebra_config(algebra_path);
    return setup_from(arith::make_field(cfg.field_d), algebra_path, algebra_path);
}

Pipeline::Pipeline(const FieldSetup& setup, long prime_bound)
    : setup_(std::make_shared<FieldSetup>(setup)), bound_(prime_bound),
      elements_(std::make_shared<brandt::ElementCache>()) {
    require(prime_bound >= 2, "Pipeline: prime bound must be at least 2");
}

const LevelData& Pipeline::level(const Ideal& N) {
    if (auto it = cache_.find(N); it != cache_.end()) return *it->second;
    auto data = compute(N);
    return *cache_.emplace(N, std::move(data)).first->second;
}

namespace {

// Number of ideal divisors.
std::size_t sigma0(const BaseField& F, const Ideal& M) {
    std::size_t n = 1;
    for (const auto& [p, e] : arith::factor_ideal(F, M)) n *= static_cast<std::size_t>(e + 1);
    return n;
}

}  // namespace

std::unique_ptr<LevelData> Pipeline::compute(const Ideal& N) {
    const BaseField& F = setup_->F;
    const Ideal& disc = setup_->B.discriminant;
    require(arith::add(F, N, disc).is_unit(), "level " + N.str() + " meets the discriminant " + disc.str());
    const Ideal ND = arith::multiply(F, N, disc);

    // lower levels first, so that their timings are not charged to this one
    std::map<Ideal, std::size_t> cusp_dims;
    for (const auto& d : arith::divisors(F, N))
        if (d != N) cusp_dims[d] = level(d).cusp_dim;

    auto L = std::make_unique<LevelData>();
    L->level = N;
    auto t0 = Clock::now();
    brandt::BrandtModule M(setup_->B, setup_->classes, N, elements_);
    L->module_dim = M.dim();
    L->weights = M.inner_product_weights();
    L->times.module = seconds_since(t0);

    t0 = Clock::now();
    long op_bound = operator_bound();
    for (;; op_bound *= 2) {
        L->hecke_primes.clear();
        for (const auto& p : arith::primes_up_to(F, op_bound))
            if (arith::add(F, ND, p.ideal).is_unit()) L->hecke_primes.push_back(p);
        if (L->hecke_primes.size() >= 6) break;
    }
    L->full.dim = M.dim();
    for (const auto& p : L->hecke_primes)
        L->full.add(brandt::hecke_label(p), linalg::to_rational(brandt::hecke_operator(M, p).matrix));
    L->al_primes = arith::factor_ideal(F, ND);
    for (const auto& [p, e] : L->al_primes)
        L->full.add(brandt::atkin_lehner_label(p), linalg::to_rational(brandt::atkin_lehner(M, p, e).matrix));
    L->times.operators = seconds_since(t0);

    t0 = Clock::now();
    auto split = brandt::eisenstein_and_cusp(L->full, L->hecke_primes);
    L->eisenstein_dim = split.eisenstein.size();
    L->cusp = std::move(split.cusp);
    L->cusp_dim = L->cusp.dim;
    L->times.split = seconds_since(t0);

    // new(M) = cusp(M) - sum over proper divisors M' of sigma0(M/M') new(M')
    t0 = Clock::now();
    cusp_dims[N] = L->cusp_dim;
    std::map<Ideal, long> new_dims;
    for (const auto& [d, c] : cusp_dims) {
        long v = static_cast<long>(c);
        for (const auto& [e, ne] : new_dims)
            if (divides(F, e, d)) v -= static_cast<long>(sigma0(F, arith::divide_exact(F, d, e))) * ne;
        verify(v >= 0, "level " + d.str() + ": negative predicted new dimension");
        new_dims[d] = v;
    }
    L->new_dim = static_cast<std::size_t>(new_dims.at(N));

    std::vector<std::string> t_labels;
    for (const auto& p : L->hecke_primes) t_labels.push_back(brandt::hecke_label(p));
    // each newform of level M' | N, M' != N, occurs sigma0(N/M') times
    std::vector<linalg::OldEigensystem> old;
    for (const auto& d : arith::divisors(F, N)) {
        if (d == N) continue;
        const std::size_t mult = sigma0(F, arith::divide_exact(F, N, d));
        for (const auto& c : level(d).constituents) old.push_back(linalg::old_eigensystem(c, t_labels, mult));
    }
    if (old.empty()) {
        verify(L->new_dim == L->cusp_dim, "level " + N.str() + ": no lower newforms but a nonzero old dimension");
        L->new_space = L->cusp;
    } else {
        auto on = linalg::old_new_split(L->cusp, old, L->cusp_dim - L->new_dim);
        L->new_space = std::move(on.new_space);
    }
    L->times.oldnew = seconds_since(t0);

    t0 = Clock::now();
    if (L->new_space.dim > 0) L->constituents = linalg::decompose(L->new_space, t_labels);
    std::size_t total = 0;
    for (auto& c : L->constituents) {
        linalg::eigensystem(c, L->new_space);
        total += c.dim();
        for (const auto& p : L->hecke_primes) {
            const auto& ap = c.eigenvalues.at(brandt::hecke_label(p));
            verify(linalg::conjugates_bounded(c.g, ap, Rational(4 * p.norm())),
                   "level " + N.str() + ": Ramanujan bound fails at " + p.label());
        }
        for (const auto& [p, e] : L->al_primes) {
            const auto& w = c.eigenvalues.at(brandt::atkin_lehner_label(p));
            const bool sign = (w[0] == 1 || w[0] == -1) &&
                              std::all_of(w.begin() + 1, w.end(), [](const Rational& x) { return x == 0; });
            verify(sign, "level " + N.str() + ": Atkin-Lehner eigenvalue at " + p.label() + " is not a sign");
        }
    }
    verify(total == L->new_dim, "level " + N.str() + ": constituent dimensions do not add up to the new dimension");
    L->times.decompose = seconds_since(t0);
    return L;
}

std::vector<NewformRecord> Pipeline::records(const Ideal& N) {
    const LevelData& L = level(N);
    const BaseField& F = setup_->F;
    const Ideal& disc = setup_->B.discriminant;
    std::vector<NewformRecord> out;
    for (std::size_t k = 0; k < L.constituents.size(); ++k) {
        const auto& c = L.constituents[k];
        NewformRecord r;
        r.field_label = F.label();
        r.disc = disc;
        r.level = N;
        r.index = k;
        // a rational Hecke field is stored as Q[x]/(x), whatever t was
        r.heckefield = c.g.size() == 2 ? linalg::IntPolynomial{0, 1} : c.g;
        r.prime_bound = bound_;
        r.version = kVersion;
        for (const auto& p : L.hecke_primes) {
            if (p.norm() > bound_) continue;
            r.primes.push_back(p.label());
            r.eigenvalues.push_back(c.eigenvalues.at(brandt::hecke_label(p)));
        }
        for (const auto& [p, e] : L.al_primes) {
            // W on the Brandt module at a ramified prime acts as -w_p
            const int w = static_cast<int>(c.eigenvalues.at(brandt::atkin_lehner_label(p))[0].get_num().get_si());
            const bool at_disc = !arith::add(F, disc, p.ideal).is_unit();
            r.al.emplace_back(p.label(), at_disc ? -w : w);
        }
        try {
            const auto cm = analysis::detect_cm(r, F);
            r.cm = cm.verdict;
            r.cm_disc = cm.disc;
            r.cm_evidence = cm.evidence;
        } catch (const PreconditionError&) {
            r.cm = analysis::CMVerdict::Insufficient;
        }
        const auto bc = analysis::detect_base_change(r, F);
        r.bc = bc.verdict;
        r.bc_match = bc.match;
        r.bc_evidence = bc.evidence;
        out.push_back(std::move(r));
    }
    return out;
}

std::size_t BuildReport::record_count() const {
    std::size_t n = 0;
    for (const auto& l : levels) n += l.records;
    return n;
}

std::string BuildReport::text(bool with_times) const {
    std::ostringstream os;
    os << "field " << field_label << ", norms " << min_norm << ".." << max_norm << ", prime bound " << prime_bound
       << "\n";
    if (with_times) os << "precomputation " << std::fixed << std::setprecision(3) << precompute_seconds << " s\n";
    os << "level            module  eis  cusp  new  records";
    if (with_times) os << "   module  operators  split  old/new  decompose";
    os << "\n";
    StageTimes sum;
    for (const auto& l : levels) {
        os << std::left << std::setw(16) << l.level.str() << std::right;
        if (l.skipped) {
            os << "  skipped (meets the discriminant)\n";
            continue;
        }
        os << std::setw(7) << l.module_dim << std::setw(5) << l.eisenstein_dim << std::setw(6) << l.cusp_dim
           << std::setw(5) << l.new_dim << std::setw(9) << l.records;
        if (with_times)
            os << std::fixed << std::setprecision(3) << std::setw(9) << l.times.module << std::setw(11)
               << l.times.operators << std::setw(7) << l.times.split << std::setw(9) << l.times.oldnew << std::setw(11)
               << l.times.decompose;
        os << "\n";
        sum.module += l.times.module;
        sum.operators += l.times.operators;
        sum.split += l.times.split;
        sum.oldnew += l.times.oldnew;
        sum.decompose += l.times.decompose;
    }
    os << "levels " << levels.size() << ", records " << record_count() << "\n";
    if (with_times)
        os << std::fixed << std::setprecision(3) << "stage totals: module " << sum.module << " s, operators "
           << sum.operators << " s, split " << sum.split << " s, old/new " << sum.oldnew << " s, decompose "
           << sum.decompose << " s\n";
    return os.str();
}

std::vector<NewformRecord> build_database(const FieldSetup& setup, long min_norm, long max_norm, long prime_bound,
                                          BuildReport* report) {
    require(min_norm >= 1, "build: minimum norm must be positive");
    const BaseField& F = setup.F;
    BuildReport rep;
    rep.field_label = F.label();
    rep.min_norm = min_norm;
    rep.max_norm = max_norm;
    rep.prime_bound = prime_bound;
    Pipeline pipe(setup, prime_bound);
    std::vector<NewformRecord> out;
    for (long n = min_norm; n <= max_norm; ++n)
        for (const auto& N : arith::ideals_of_norm(F, n)) {
            LevelReport lr;
            lr.level = N;
            if (!arith::add(F, N, setup.B.discriminant).is_unit()) {
                lr.skipped = true;
                rep.levels.push_back(lr);
                continue;
            }
            auto recs = pipe.records(N);
            const LevelData& L = pipe.level(N);
            lr.module_dim = L.module_dim;
            lr.eisenstein_dim = L.eisenstein_dim;
            lr.cusp_dim = L.cusp_dim;
            lr.new_dim = L.new_dim;
            lr.records = recs.size();
            lr.times = L.times;
            rep.levels.push_back(lr);
            for (auto& r : recs) out.push_back(std::move(r));
        }
    std::stable_sort(out.begin(), out.end(), analysis::record_less);
    if (report) *report = std::move(rep);
    return out;
}

namespace {

// Everything that must agree between the two sides, as text.
std::string signature(const NewformRecord& r) {
    std::ostringstream os;
    os << "dim " << r.dim() << ";";
    for (std::size_t k = 0; k < r.primes.size(); ++k)
        os << " a" << r.primes[k] << ": " << linalg::to_string(linalg::primitive_part(linalg::field_element_charpoly(r.heckefield, r.eigenvalues[k])))
           << ";";
    os << " AL";
    for (const auto& [label, sign] : r.al) os << " " << label << (sign > 0 ? "+" : "-");
    return os.str();
}

}  // namespace

CrosscheckReport crosscheck_pnew(const std::string& algebra_dir, long N, long p, long q, long prime_bound) {
    require(p != q, "crosscheck: p and q must be distinct");
    require(N > 0 && is_prime(p) && is_prime(q), "crosscheck: p and q must be prime");
    require(N % p == 0 && (N / p) % p != 0, "crosscheck: p must divide the level exactly once");
    require(N % q == 0 && (N / q) % q != 0, "crosscheck: q must divide the level exactly once");
    CrosscheckReport rep;
    rep.level = N;
    rep.p = p;
    rep.q = q;
    std::vector<std::string> sigs[2];
    std::size_t dims[2];
    const long D[2] = {p, q};
    for (int side = 0; side < 2; ++side) {
        const std::string path = algebra_dir + "/q_d" + std::to_string(D[side]) + ".alg";
        require(std::filesystem::exists(path), "crosscheck: no algebra configuration for D=" + std::to_string(D[side]) +
                                                   " (" + path + ")");
        const FieldSetup setup = load_algebra_setup(path);
        require(setup.F.degree() == 1, "crosscheck: " + path + " is not over Q");
        Pipeline pipe(setup, prime_bound);
        const Ideal M = arith::principal_ideal(setup.F, setup.F.from_int(N / D[side]));
        for (const auto& r : pipe.records(M)) sigs[side].push_back(signature(r));
        dims[side] = pipe.level(M).new_dim;
        std::sort(sigs[side].begin(), sigs[side].end());
    }
    rep.dim_p = dims[0];
    rep.dim_q = dims[1];
    rep.constituents = sigs[0].size();
    for (const auto& s : sigs[0])
        if (!std::binary_search(sigs[1].begin(), sigs[1].end(), s)) rep.diffs.push_back("only with D=" + std::to_string(p) + ": " + s);
    for (const auto& s : sigs[1])
        if (!std::binary_search(sigs[0].begin(), sigs[0].end(), s)) rep.diffs.push_back("only with D=" + std::to_string(q) + ": " + s);
    rep.agree = rep.diffs.empty() && dims[0] == dims[1];
    return rep;
}

std::string CrosscheckReport::text() const {
    std::ostringstream os;
    os << "level " << level << ": new dimension " << dim_p << " with D=" << p << ", " << dim_q << " with D=" << q
       << "; " << constituents << " constituent(s)\n";
    for (const auto& d : diffs) os << "  " << d << "\n";
    os << (agree ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::vector<SpotCheck> spot_check(const FieldSetup& setup, const std::vector<NewformRecord>& records,
                                  std::size_t samples, unsigned seed) {
    const BaseField& F = setup.F;
    std::vector<SpotCheck> out;
    if (records.empty()) return out;
    std::mt19937 rng(seed);
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t s = 0; s < samples; ++s) {
        // more samples than records: cycle through the shuffled order again
        const NewformRecord& r = records[order[s % order.size()]];
        require(r.field_label == F.label() && r.disc == setup.B.discriminant,
                "spot_check: record " + r.label() + " belongs to a different setup");
        SpotCheck sc{r.label(), "", false};
        if (r.primes.empty()) {
            out.push_back(sc);
            continue;
        }
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, r.primes.size() - 1)(rng);
        sc.prime = r.primes[k];
        PrimeIdeal p;
        bool found = false;
        for (const auto& cand : arith::primes_up_to(F, r.prime_bound))
            if (cand.label() == sc.prime) {
                p = cand;
                found = true;
            }
        require(found, "spot_check: unknown prime label " + sc.prime);
        brandt::BrandtModule M(setup.B, setup.classes, r.level);
        const auto T = linalg::charpoly(brandt::hecke_operator(M, p).matrix);
        const auto f = linalg::field_element_charpoly(r.heckefield, r.eigenvalues[k]);
        sc.ok = linalg::divmod(linalg::to_q(T), f).second.empty();
        out.push_back(sc);
    }
    return out;
}

}  // namespace hmf::db
