#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "critspace/bbw.hpp"
#include "critspace/critical.hpp"
#include "critspace/errors.hpp"
#include "critspace/format.hpp"
#include "critspace/polyarith.hpp"
#include "critspace/sweep.hpp"
#include "critspace/tensor_io.hpp"
#include "critspace/zsolver.hpp"

using namespace critspace;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInput = 2, kGuard = 3, kInconsistent = 4 };

struct Globals {
    std::vector<std::uint32_t> primes;
    std::vector<std::uint64_t> seeds;
    std::string output;

    const std::vector<std::uint32_t>& prime_list() const { return primes.empty() ? default_primes() : primes; }
    const std::vector<std::uint64_t>& seed_list() const { return seeds.empty() ? default_seeds() : seeds; }
    std::uint64_t first_seed() const { return seed_list().front(); }
};

/// Where a subcommand gets its tensor: a file, or random draws of a format.
struct TensorSource {
    std::string file;
    std::string format;
    bool random = false;

    void attach(CLI::App* sub)
    {
        sub->add_option("--tensor-file", file, "tensor JSON file {\"dims\", \"entries\"}");
        sub->add_option("--format", format, "format d1xd2x...xdk for random tensors");
        sub->add_flag("--random", random, "draw random tensors (one per --prime x --seed)");
    }

    bool from_file() const
    {
        if (!file.empty() && (random || !format.empty()))
            throw InputError("give either --tensor-file or --format/--random, not both");
        if (file.empty() && format.empty())
            throw InputError("a tensor is required: --tensor-file or --format");
        return !file.empty();
    }
};

Format parse_format(const std::string& s)
{
    try {
        return Format::parse(s);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

IntTensor random_int_tensor(const Format& f, std::uint64_t seed, std::uint32_t p)
{
    return IntTensor(f, random_tensor(f, seed, EntryDistribution::field(p)));
}

bool exactly_representable(const TensorFile& tf)
{
    for (auto v : tf.int_entries)
        if (std::llabs(v) > (std::int64_t{1} << 53))
            return false;
    return true;
}

void check_prime(std::uint32_t p)
{
    if (!is_prime(p))
        throw InputError(std::to_string(p) + " is not prime");
}

ordered_json vec_json(const Eigen::VectorXcd& v)
{
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back({v[i].real(), v[i].imag()});
    return out;
}

int run_cohomology(std::ostream& out, const std::optional<std::string>& format, std::optional<int> r,
                   std::optional<int> n, std::optional<int> forms_r, std::optional<long> twist, int q)
{
    if (format) {
        if (!r || n || forms_r || twist)
            throw InputError("h_E takes --format, --r and --q only");
        out << to_decimal(h_E(parse_format(*format), *r, q)) << '\n';
        return kOk;
    }
    if (!n || !forms_r || !twist || r)
        throw InputError("h_omega takes --n, --forms-r, --twist and --q");
    if (*n < 1)
        throw InputError("--n must be >= 1");
    out << to_decimal(h_omega(*n, *forms_r, *twist, q)) << '\n';
    return kOk;
}

int run_critical_dim(std::ostream& out, const Globals& g, const TensorSource& src, bool exact)
{
    if (src.from_file()) {
        const TensorFile tf = read_tensor_file(src.file);
        if (!tf.real) {
            out << critical_dim_of(tf.to_complex()) << '\n';
        } else if (!tf.integral || exact) {
            if (tf.integral && !exactly_representable(tf))
                throw InputError("integer entries beyond 2^53 need the modular mode");
            out << critical_dim_exact(tf.to_real()) << '\n';
        } else {
            // rank mod p never exceeds the rational rank, so keep the best prime
            const IntTensor t = tf.to_int();
            std::size_t best = SIZE_MAX;
            for (auto p : g.prime_list()) {
                check_prime(p);
                best = std::min(best, critical_dim(t, PrimeField(p)));
            }
            out << best << '\n';
        }
        return kOk;
    }
    const Format f = parse_format(src.format);
    const auto cols = static_cast<std::size_t>(f.entry_count());
    const auto res = generic_protocol(f, g.prime_list(), g.seed_list(), [](const IntTensor& t, PrimeField fld) {
        return rank(critical_equations(t, fld));
    });
    out << cols - res.value << '\n';
    return kOk;
}

ordered_json shape_json(const Format& f, const AlphaShape& s)
{
    ordered_json j;
    j["format"] = f.to_string();
    j["domain_dim"] = to_decimal(s.domain);
    j["codomain_dim"] = to_decimal(s.codomain);
    return j;
}

int run_alpha_rank(std::ostream& out, const Globals& g, const TensorSource& src, const AlphaGuard& guard)
{
    if (src.from_file()) {
        const TensorFile tf = read_tensor_file(src.file);
        if (!tf.real)
            throw InputError("alpha-rank needs a real tensor");
        const AlphaShape shape = alpha_shape(tf.format);
        check_alpha_guard(shape, guard);
        ordered_json j = shape_json(tf.format, shape);
        std::size_t r = 0;
        if (tf.integral) {
            for (auto p : g.prime_list()) {
                check_prime(p);
                r = std::max(r, rank(alpha_matrix(tf.to_int(), PrimeField(p))));
            }
            j["mode"] = "modular";
        } else {
            r = rank(alpha_matrix_q(tf.to_real()));
            j["mode"] = "rational";
        }
        j["alpha_rank"] = r;
        j["kernel_dim"] = shape.domain.get_ui() - r;
        out << j.dump() << '\n';
        return kOk;
    }
    const Format f = parse_format(src.format);
    const AlphaShape shape = alpha_shape(f);
    check_alpha_guard(shape, guard);
    const auto res = generic_protocol(f, g.prime_list(), g.seed_list(),
                                      [](const IntTensor& t, PrimeField fld) { return rank(alpha_matrix(t, fld)); });
    ordered_json j = shape_json(f, shape);
    j["mode"] = "generic";
    j["alpha_rank"] = res.value;
    j["kernel_dim"] = shape.domain.get_ui() - res.value;
    j["runs"] = res.runs;
    j["agreed"] = res.agreed;
    out << j.dump() << '\n';
    return kOk;
}

int run_koszul(std::ostream& out, const Globals& g, const TensorSource& src, int a, int b)
{
    std::vector<std::tuple<IntTensor, std::uint32_t, std::optional<std::uint64_t>>> cases;
    if (!src.file.empty() || !src.format.empty()) {
        if (src.from_file()) {
            const TensorFile tf = read_tensor_file(src.file);
            for (auto p : g.prime_list())
                cases.emplace_back(tf.to_int(), p, std::nullopt);
        } else {
            if (parse_format(src.format) != beyond_by_one({a, b}))
                throw InputError("--format must be (a+1)x(b+1)x(a+b+2)");
        }
    }
    if (cases.empty()) {
        const Format f = beyond_by_one({a, b});
        for (auto p : g.prime_list())
            for (auto s : g.seed_list())
                cases.emplace_back(random_int_tensor(f, s, p), p, s);
    }
    bool consistent = true;
    ordered_json runs = ordered_json::array();
    for (const auto& [t, p, seed] : cases) {
        check_prime(p);
        const PrimeField fld(p);
        const KoszulResult k = koszul_oracle(a, b, t, fld, g.first_seed());
        const std::size_t via_alpha = span_codim_via_alpha(t, fld);
        const bool ok = k.complex_homology == k.artinian && k.artinian == via_alpha;
        consistent = consistent && ok;
        ordered_json j;
        j["prime"] = p;
        if (seed)
            j["seed"] = *seed;
        j["complex_homology"] = k.complex_homology;
        j["artinian"] = k.artinian;
        j["alpha_kernel"] = via_alpha;
        j["agree"] = ok;
        runs.push_back(j);
    }
    ordered_json j;
    j["a"] = a;
    j["b"] = b;
    j["runs"] = runs;
    j["consistent"] = consistent;
    out << j.dump() << '\n';
    if (!consistent) {
        std::cerr << "error: koszul oracle modes disagree\n";
        return kInconsistent;
    }
    return kOk;
}

int run_solve(std::ostream& out, const Globals& g, const TensorSource& src, double tol, double max_paths,
              bool serial)
{
    ComplexTensor t;
    if (src.from_file())
        t = read_tensor_file(src.file).to_complex();
    else
        t = random_real_tensor(parse_format(src.format), g.first_seed());

    SolverOptions opt;
    opt.seed = g.first_seed();
    opt.tol = tol;
    opt.max_paths = max_paths;
    opt.parallel = !serial;
    const BigInt paths = start_path_count(t.format());
    if (paths > BigInt(static_cast<unsigned long>(max_paths)))
        throw GuardRefusal("start system has " + to_decimal(paths) + " paths, over --max-paths");
    const TupleSolveReport rep = solve_singular_tuples(t, opt);

    ordered_json j;
    j["format"] = t.format().to_string();
    j["expected_count"] = to_decimal(rep.expected_count);
    j["tuple_count"] = rep.tuples.size();
    j["complete"] = rep.complete;
    j["paths_tracked"] = rep.paths_tracked;
    j["paths_failed"] = rep.paths_failed;
    j["paths_diverged"] = rep.paths_diverged;
    j["seeds_used"] = rep.seeds_used;
    j["span_rank"] = rep.span_rank;
    j["critical_dim"] = rep.critical_dim;
    j["span_codim"] = rep.span_codim;
    ordered_json tuples = ordered_json::array();
    for (const auto& s : rep.tuples) {
        ordered_json tj;
        ordered_json xs = ordered_json::array();
        for (const auto& x : s.x)
            xs.push_back(vec_json(x));
        tj["x"] = xs;
        tj["residual"] = s.residual;
        tj["critical_residual"] = verify_in_critical(t, s);
        tj["multiple"] = s.multiple;
        tuples.push_back(tj);
    }
    j["tuples"] = tuples;
    out << j.dump() << '\n';
    return kOk;
}

int run_sweep(std::ostream& out, const Globals& g, SweepOptions opt, const std::string& report,
              const std::string& resume)
{
    opt.primes = g.prime_list();
    opt.seeds = g.seed_list();
    for (auto p : opt.primes)
        check_prime(p);
    std::vector<SweepRow> done;
    if (!resume.empty()) {
        std::ifstream in(resume);
        if (!in)
            throw InputError("cannot open resume file '" + resume + "'");
        done = read_jsonl(in);
    }
    const auto rows = sweep(opt, done);
    if (report == "csv")
        write_csv(out, rows);
    else
        write_jsonl(out, rows);
    return kOk;
}

int run_inequalities(std::ostream& out, int k, int bound)
{
    ordered_json j;
    j["k"] = k;
    j["bound"] = bound;
    ordered_json ex = ordered_json::array();
    for (const auto& t : exception_scan(k, bound)) {
        const auto d = dimension_inequality(t);
        ordered_json e;
        e["n"] = t;
        e["lhs"] = to_decimal(d.lhs);
        e["rhs"] = to_decimal(d.rhs);
        ex.push_back(e);
    }
    j["exceptions"] = ex;
    out << j.dump() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Critical spaces, ED degrees and alpha maps of tensors beyond boundary format"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--prime", g.primes, "prime for modular computations (repeatable)");
    app.add_option("--seed", g.seeds, "random seed (repeatable)");
    app.add_option("--output,-o", g.output, "write results here instead of stdout");

    std::function<int(std::ostream&)> action;

    auto* ed = app.add_subcommand("ed-degree", "ED degree of a format");
    std::string ed_format;
    ed->add_option("format", ed_format, "d1xd2x...xdk")->required();
    ed->callback([&] {
        action = [&](std::ostream& out) {
            out << to_decimal(ed_degree(parse_format(ed_format).ns())) << '\n';
            return kOk;
        };
    });

    auto* coh = app.add_subcommand("cohomology", "h^q of E^(r) on a format, or of Omega^r(twist) on P^n");
    std::optional<std::string> coh_format;
    std::optional<int> coh_r, coh_n, coh_forms_r;
    std::optional<long> coh_twist;
    int coh_q = 0;
    coh->add_option("--format", coh_format);
    coh->add_option("--r", coh_r);
    coh->add_option("--n", coh_n);
    coh->add_option("--forms-r", coh_forms_r);
    coh->add_option("--twist", coh_twist);
    coh->add_option("--q", coh_q)->required();
    coh->callback([&] {
        action = [&](std::ostream& out) {
            return run_cohomology(out, coh_format, coh_r, coh_n, coh_forms_r, coh_twist, coh_q);
        };
    });

    auto* crit = app.add_subcommand("critical-dim", "dimension of the critical space");
    TensorSource crit_src;
    bool crit_exact = false;
    crit_src.attach(crit);
    crit->add_flag("--exact", crit_exact, "rational arithmetic for integer tensor files");
    crit->callback([&] { action = [&](std::ostream& out) { return run_critical_dim(out, g, crit_src, crit_exact); }; });

    AlphaGuard guard;
    auto add_guard = [&](CLI::App* sub) {
        sub->add_option("--max-entries", guard.max_entries, "guard on rows x columns of alpha");
        sub->add_option("--max-work", guard.max_work, "guard on the elimination work estimate");
    };

    auto* alpha = app.add_subcommand("alpha-rank", "rank and kernel of alpha_T");
    TensorSource alpha_src;
    alpha_src.attach(alpha);
    add_guard(alpha);
    alpha->callback([&] { action = [&](std::ostream& out) { return run_alpha_rank(out, g, alpha_src, guard); }; });

    auto* kos = app.add_subcommand("koszul-oracle", "Koszul cross-check for (a+1, b+1, a+b+2)");
    TensorSource kos_src;
    int kos_a = 0, kos_b = 0;
    kos_src.attach(kos);
    kos->add_option("--a", kos_a)->required()->check(CLI::Range(2, 64));
    kos->add_option("--b", kos_b)->required()->check(CLI::Range(2, 64));
    kos->callback([&] { action = [&](std::ostream& out) { return run_koszul(out, g, kos_src, kos_a, kos_b); }; });

    auto* solve = app.add_subcommand("solve-tuples", "all singular vector tuples by homotopy continuation");
    TensorSource solve_src;
    double solve_tol = 1e-8, solve_max_paths = 1e5;
    bool solve_serial = false;
    solve->add_option("--tensor-file", solve_src.file);
    solve->add_option("--format", solve_src.format, "random real Gaussian tensor of this format");
    solve->add_option("--tol", solve_tol, "certification residual");
    solve->add_option("--max-paths", solve_max_paths);
    solve->add_flag("--serial", solve_serial, "track paths on one thread");
    solve->callback([&] {
        action = [&](std::ostream& out) { return run_solve(out, g, solve_src, solve_tol, solve_max_paths, solve_serial); };
    });

    auto* sw = app.add_subcommand("sweep", "alpha rank over all beyond-by-one formats");
    SweepOptions sweep_opt;
    std::string sweep_report = "jsonl", sweep_resume;
    bool sweep_serial = false;
    sw->add_option("--k", sweep_opt.k, "number of leading factors")->check(CLI::Range(2, 16));
    sw->add_option("--max-n", sweep_opt.max_n, "bound on the leading n_i")->check(CLI::Range(1, 64));
    sw->add_option("--report", sweep_report)->check(CLI::IsMember({"jsonl", "csv"}));
    sw->add_option("--resume", sweep_resume, "JSON-lines output of an earlier sweep");
    sw->add_flag("--serial", sweep_serial);
    add_guard(sw);
    sw->callback([&] {
        action = [&](std::ostream& out) {
            sweep_opt.guard = guard;
            sweep_opt.parallel = !sweep_serial;
            return run_sweep(out, g, sweep_opt, sweep_report, sweep_resume);
        };
    });

    auto* ineq = app.add_subcommand("check-inequalities", "tuples where the dimension inequality fails");
    int ineq_k = 2, ineq_bound = 40;
    ineq->add_option("--k", ineq_k)->check(CLI::Range(2, 16));
    ineq->add_option("--bound", ineq_bound)->check(CLI::Range(1, 1000));
    ineq->callback([&] { action = [&](std::ostream& out) { return run_inequalities(out, ineq_k, ineq_bound); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        std::unique_ptr<std::ofstream> file;
        if (!g.output.empty()) {
            file = std::make_unique<std::ofstream>(g.output);
            if (!*file)
                throw InputError("cannot open output file '" + g.output + "'");
        }
        std::ostream& out = file ? *file : std::cout;
        const int code = action(out);
        out.flush();
        return code;
    } catch (const GuardRefusal& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kGuard;
    } catch (const Inconsistency& e) {
        std::cerr << "inconsistency: " << e.what() << '\n';
        return kInconsistent;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
