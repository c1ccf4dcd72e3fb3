// Acceptance checks. `acceptance N` runs check N and prints one line
// "criterion N: PASS|FAIL <details>"; without arguments all checks run.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "critspace/bbw.hpp"
#include "critspace/critical.hpp"
#include "critspace/format.hpp"
#include "critspace/polyarith.hpp"
#include "critspace/sweep.hpp"
#include "critspace/zsolver.hpp"
#include "oracles.hpp"

using namespace critspace;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void fail(const std::string& why)
    {
        pass = false;
        failures.push_back(why);
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_runtime(Outcome& o, Clock::time_point t0, double limit)
{
    const double s = seconds_since(t0);
    o.detail << "runtime " << s << " s (limit " << limit << " s)";
    if (s >= limit)
        o.fail("runtime over limit");
}

IntTensor random_int(const Format& f, std::uint64_t seed, std::uint32_t p)
{
    return IntTensor(f, random_tensor(f, seed, EntryDistribution::field(p)));
}

// Distinct nonzero singular values of a random Gaussian m x n matrix.
std::size_t svd_count(int m, int n, std::uint64_t seed)
{
    const ComplexTensor t = random_real_tensor(Format({m, n}), seed);
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = t[static_cast<std::size_t>(i * n + j)].real();
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] <= 1e-10 * s[0])
            continue;
        if (i > 0 && std::abs(s[i] - s[i - 1]) <= 1e-10 * s[0])
            continue;
        ++count;
    }
    return count;
}

Outcome ed_degrees()
{
    Outcome o;
    const auto t0 = Clock::now();
    const std::pair<std::vector<int>, int> pinned[] = {{{1, 1}, 2}, {{2, 2}, 3}, {{1, 1, 1}, 6}};
    for (const auto& [n, v] : pinned) {
        if (ed_degree(n) != v)
            o.fail("pinned ED value");
        if (oracle::ed_oracle(n) != v)
            o.fail("oracle disagrees with pinned ED value");
    }
    int checked = 0;
    for (int m = 2; m <= 12; ++m)
        for (int n = 2; n <= 12; ++n) {
            const BigInt ed = ed_degree({m - 1, n - 1});
            if (ed != std::min(m, n))
                o.fail(std::to_string(m) + "x" + std::to_string(n) + " formula");
            if (ed != svd_count(m, n, static_cast<std::uint64_t>(100 * m + n)))
                o.fail(std::to_string(m) + "x" + std::to_string(n) + " SVD count");
            ++checked;
        }
    o.detail << checked << " matrix formats; ";
    check_runtime(o, t0, 1.0);
    return o;
}

void formats_up_to(std::size_t max_product, std::vector<int>& cur, int lo, std::int64_t prod,
                   std::vector<Format>& out)
{
    if (cur.size() >= 2)
        out.emplace_back(cur);
    for (int d = lo; prod * d <= static_cast<std::int64_t>(max_product); ++d) {
        cur.push_back(d);
        formats_up_to(max_product, cur, d, prod * d, out);
        cur.pop_back();
    }
}

Outcome critical_dimensions()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::vector<Format> formats;
    std::vector<int> cur;
    formats_up_to(500, cur, 2, 1, formats);
    std::size_t runs = 0;
    for (const auto& f : formats) {
        const std::int64_t expect = critical_dim_formula(f);
        for (auto p : default_primes())
            for (auto s : default_seeds()) {
                const auto got = critical_dim(random_int(f, s, p), PrimeField(p));
                ++runs;
                if (static_cast<std::int64_t>(got) != expect)
                    o.fail(f.to_string() + " got " + std::to_string(got) + " expected " + std::to_string(expect));
            }
    }
    o.detail << formats.size() << " formats, " << runs << " runs; ";
    check_runtime(o, t0, 60.0);
    return o;
}

Outcome defective_family()
{
    Outcome o;
    for (int n = 2; n <= 10; ++n) {
        const Format f({2, n, n + 2});
        for (auto p : default_primes())
            for (auto s : default_seeds())
                if (span_codim_via_alpha(random_int(f, s, p), PrimeField(p)) != static_cast<std::size_t>(n - 1))
                    o.fail(f.to_string());
    }
    o.detail << "n = 2..10, 4 runs each";
    return o;
}

Outcome max_rank_support()
{
    Outcome o;
    const auto t0 = Clock::now();
    const std::map<std::string, std::uint64_t> named = {{"3x3x6", 3},   {"3x4x7", 3},   {"3x5x8", 2},
                                                        {"2x2x2x5", 3}, {"2x2x3x6", 3}, {"2x2x4x7", 1}};
    std::size_t total = 0, verified = 0, refused = 0, errors = 0;
    std::vector<std::string> violations, disagreements;
    std::string largest_refused;
    std::set<std::string> named_seen;
    for (int k = 2; k <= 4; ++k) {
        SweepOptions opt;
        opt.k = k;
        opt.max_n = 5;
        for (const auto& row : sweep(opt)) {
            if (in_defective_family(row.format))
                continue;
            ++total;
            const std::string name = row.format.to_string();
            if (row.status == RowStatus::GuardRefused) {
                ++refused;
                largest_refused = name;
                continue;
            }
            if (row.status == RowStatus::Error) {
                ++errors;
                o.fail(name + " error: " + row.message);
                continue;
            }
            ++verified;
            if (row.status == RowStatus::Disagreement)
                disagreements.push_back(name);
            const std::uint64_t max_rank = std::min(row.domain_dim, row.codomain_dim);
            bool all_max = true;
            for (auto r : row.runs)
                all_max = all_max && r == max_rank;
            if (!all_max)
                violations.push_back(name);
            if (auto it = named.find(name); it != named.end()) {
                named_seen.insert(name);
                if (row.kernel_dim != it->second)
                    o.fail(name + " kernel " + std::to_string(row.kernel_dim.value_or(0)) + " expected " +
                           std::to_string(it->second));
            }
        }
    }
    for (const auto& [name, v] : named)
        if (!named_seen.count(name))
            o.fail(name + " not computed");
    o.detail << verified << "/" << total << " non-family formats computed";
    o.detail << ", conjecture violations: " << violations.size();
    for (const auto& v : violations)
        o.detail << " " << v;
    if (!disagreements.empty())
        o.detail << ", protocol disagreements: " << disagreements.size();
    o.detail << ", named kernels " << named_seen.size() << "/6 checked";
    if (refused > 0) {
        o.fail(std::to_string(refused) + " formats over the resource guard (largest " + largest_refused + ")");
        o.detail << ", coverage incomplete: " << refused << " formats refused by the guard";
    }
    if (errors > 0)
        o.detail << ", " << errors << " errors";
    o.detail << "; runtime " << seconds_since(t0) << " s";
    return o;
}

Outcome koszul()
{
    Outcome o;
    const auto t0 = Clock::now();
    const std::pair<int, int> cases[] = {{2, 2}, {2, 3}, {2, 4}, {3, 3}};
    for (const auto& [a, b] : cases) {
        const Format f = beyond_by_one({a, b});
        for (auto p : default_primes())
            for (auto s : default_seeds()) {
                const PrimeField fld(p);
                const IntTensor t = random_int(f, s, p);
                const auto k = koszul_oracle(a, b, t, fld, s);
                const auto via_alpha = span_codim_via_alpha(t, fld);
                if (k.complex_homology != k.artinian || k.artinian != via_alpha)
                    o.fail(f.to_string() + ": " + std::to_string(k.complex_homology) + "/" +
                           std::to_string(k.artinian) + "/" + std::to_string(via_alpha));
            }
    }
    o.detail << "4 cases x 4 runs; ";
    check_runtime(o, t0, 60.0);
    return o;
}

Outcome cohomology()
{
    Outcome o;
    for (int n = 1; n <= 6; ++n)
        for (int r = 0; r <= n; ++r)
            for (int t = -10; t <= 10; ++t)
                for (int q = 0; q <= n; ++q)
                    if (h_omega(n, r, t, q) != h_omega(n, n - r, -t, n - q))
                        o.fail("Serre duality n=" + std::to_string(n));

    // twist * lambda_1 + lambda_{r+1} is the weight of Omega^r(twist + r + 1)
    for (int n = 1; n <= 5; ++n)
        for (int r = 0; r <= n; ++r)
            for (long twist = -12; twist <= 12; ++twist) {
                Weight w;
                w.entries.assign(static_cast<std::size_t>(n + 1), 0);
                for (int i = 0; i <= r; ++i)
                    w.entries[static_cast<std::size_t>(i)] = 1;
                w.entries[0] += twist;
                const auto ans = bbw_resolve(w);
                for (int q = 0; q <= n; ++q) {
                    const BigInt expect = (!ans.singular && ans.index == q) ? ans.dim : BigInt(0);
                    if (h_omega(n, r, twist + r + 1, q) != expect)
                        o.fail("bbw vs Bott n=" + std::to_string(n));
                }
            }

    int formats = 0;
    for (int k = 2; k <= 4; ++k)
        for (const auto& lead : sorted_tuples(k, 8)) {
            int n = 0;
            for (int v : lead)
                n += v;
            if (n > 8)
                continue;
            ++formats;
            const Format f = beyond_by_one(lead);
            std::vector<int> ns = lead;
            ns.push_back(n + 1);
            for (int r = 2; r <= 2 * n + 1; ++r)
                for (int q = 0; q <= r; ++q)
                    if (h_E(f, r, q) != oracle::predicted(ns, r, q))
                        o.fail("h_E " + f.to_string() + " r=" + std::to_string(r) + " q=" + std::to_string(q));
        }
    for (int n = 2; n <= 10; ++n)
        if (h_E(Format({2, n, n + 2}), n + 1, n) != n - 1)
            o.fail("h^n(E^(n+1)) on 2x" + std::to_string(n) + "x" + std::to_string(n + 2));
    o.detail << "Serre n<=6, bbw n<=5, h_E on " << formats << " formats, family n<=10";
    return o;
}

Outcome solver()
{
    Outcome o;
    {
        const auto t0 = Clock::now();
        const ComplexTensor t = random_real_tensor(Format({2, 2, 2}), 1);
        const auto rep = solve_singular_tuples(t, SolverOptions{});
        bool certified = true;
        for (const auto& s : rep.tuples)
            certified = certified && s.residual < 1e-8 && verify_in_critical(t, s) < 1e-8;
        if (rep.tuples.size() != 6 || !certified || rep.span_codim != 0)
            o.fail("2x2x2: " + std::to_string(rep.tuples.size()) + " tuples, codim " +
                   std::to_string(rep.span_codim));
        const double s = seconds_since(t0);
        o.detail << "2x2x2 " << rep.tuples.size() << " tuples codim " << rep.span_codim << " in " << s << " s; ";
        if (s >= 60.0)
            o.fail("2x2x2 runtime");
    }
    {
        const auto t0 = Clock::now();
        const Format f({2, 2, 4});
        const ComplexTensor t = random_real_tensor(f, 1);
        const auto rep = solve_singular_tuples(t, SolverOptions{});
        double worst = 0.0;
        for (const auto& s : rep.tuples)
            worst = std::max({worst, s.residual, verify_in_critical(t, s)});
        std::vector<double> real(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            real[i] = t[i].real();
        const std::size_t alpha_kernel = span_codim_via_alpha_exact(RealTensor(f, real));
        if (rep.tuples.size() != ed_degree({1, 1, 3}))
            o.fail("2x2x4 tuple count " + std::to_string(rep.tuples.size()));
        if (!(worst < 1e-8))
            o.fail("2x2x4 residual");
        if (rep.span_codim != 1 || alpha_kernel != 1)
            o.fail("2x2x4 codim " + std::to_string(rep.span_codim) + ", alpha kernel " +
                   std::to_string(alpha_kernel));
        const double s = seconds_since(t0);
        o.detail << "2x2x4 " << rep.tuples.size() << " tuples, max residual " << worst << ", codim "
                 << rep.span_codim << ", alpha kernel " << alpha_kernel << " in " << s << " s";
        if (s >= 60.0)
            o.fail("2x2x4 runtime");
    }
    return o;
}

Outcome inequality_scan()
{
    Outcome o;
    using Set = std::set<std::vector<int>>;
    Set listed_k2{{2, 2}, {2, 3}, {2, 4}};
    for (int b = 2; b <= 40; ++b)
        listed_k2.insert({1, b});
    const Set listed_k3{{1, 1, 1}, {1, 1, 2}, {1, 1, 3}};

    const auto k2 = exception_scan(2, 40);
    const auto k3 = exception_scan(3, 10);
    const Set found_k2(k2.begin(), k2.end()), found_k3(k3.begin(), k3.end());

    Set extra, missing;
    for (const auto& t : found_k2)
        if (!listed_k2.count(t))
            extra.insert(t);
    for (const auto& t : listed_k2)
        if (!found_k2.count(t))
            missing.insert(t);
    if (!missing.empty())
        o.fail("listed k=2 cases not found by the scan");
    if (extra != Set{{1, 1}})
        o.fail("k=2 scan differs from the list beyond (1,1)");
    if (found_k3 != listed_k3)
        o.fail("k=3 scan differs from the list");
    const auto d = dimension_inequality({1, 1});
    o.detail << "k=2: " << found_k2.size() << " exceptions, k=3: " << found_k3.size() << " exceptions";
    if (extra.count({1, 1}))
        o.detail << "; discrepancy found: (1,1) fails the inequality (lhs " << to_decimal(d.lhs) << " > rhs "
                 << to_decimal(d.rhs) << ") although the list treats it as satisfied";
    return o;
}

const std::pair<const char*, std::function<Outcome()>> kCriteria[] = {
    {"ED degrees", ed_degrees},
    {"critical-space dimension", critical_dimensions},
    {"defective family", defective_family},
    {"max-rank support", max_rank_support},
    {"Koszul oracle", koszul},
    {"cohomology engine", cohomology},
    {"solver cross-check", solver},
    {"inequality scan", inequality_scan},
};

bool run(int i)
{
    const auto& [name, f] = kCriteria[i - 1];
    bool pass = false;
    std::string detail;
    try {
        Outcome o = f();
        pass = o.pass;
        detail = o.detail.str();
        if (!o.failures.empty()) {
            detail += " | " + std::to_string(o.failures.size()) + " failed check(s), first: " + o.failures.front();
        }
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d (%s): %s  %s\n", i, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    return pass;
}

}  // namespace

int main(int argc, char** argv)
{
    const int count = static_cast<int>(std::size(kCriteria));
    if (argc > 2) {
        std::fprintf(stderr, "usage: acceptance [1-%d]\n", count);
        return 2;
    }
    if (argc == 2) {
        const int i = std::atoi(argv[1]);
        if (i < 1 || i > count) {
            std::fprintf(stderr, "criterion must be in 1..%d\n", count);
            return 2;
        }
        return run(i) ? 0 : 1;
    }
    bool all = true;
    for (int i = 1; i <= count; ++i)
        all = run(i) && all;
    return all ? 0 : 1;
}
