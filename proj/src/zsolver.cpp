#include "critspace/zsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "critspace/critical.hpp"
#include "critspace/errors.hpp"
#include "critspace/polyarith.hpp"

namespace critspace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

// Portable draws: the standard distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    cplx gaussian()
    {
        const double u1 = 1.0 - uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        return cplx(r * std::cos(th), r * std::sin(th)) / std::sqrt(2.0);
    }
    cplx unit() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

private:
    std::mt19937_64 gen_;
};

MatrixXcd random_matrix(Rng& rng, int rows, int cols)
{
    MatrixXcd m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            m(r, c) = rng.gaussian();
    return m;
}

double sup_norm(const VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// G_e(y) = prod_j (a_{e,j} . y_j + b_{e,j})
struct StartSystem {
    std::vector<std::vector<VectorXcd>> a;
    std::vector<std::vector<cplx>> b;
    std::vector<int> ns, offsets;

    void evaluate(const VectorXcd& y, VectorXcd& g, MatrixXcd* jac) const
    {
        const std::size_t k = ns.size();
        const auto E = static_cast<Eigen::Index>(a.size());
        g.resize(E);
        if (jac)
            jac->setZero(E, E);
        std::vector<cplx> lin(k);
        for (Eigen::Index e = 0; e < E; ++e) {
            cplx prod = 1.0;
            for (std::size_t j = 0; j < k; ++j) {
                lin[j] = (a[e][j].transpose() * y.segment(offsets[j], ns[j]))(0) + b[e][j];
                prod *= lin[j];
            }
            g(e) = prod;
            if (!jac)
                continue;
            for (std::size_t j = 0; j < k; ++j) {
                cplx others = 1.0;
                for (std::size_t l = 0; l < k; ++l)
                    if (l != j)
                        others *= lin[l];
                for (int r = 0; r < ns[j]; ++r)
                    (*jac)(e, offsets[j] + r) = a[e][j](r) * others;
            }
        }
    }

    // One solution per assignment of equations to groups with group j
    // receiving exactly n_j equations.
    std::vector<VectorXcd> solutions() const
    {
        std::vector<VectorXcd> out;
        const std::size_t k = ns.size();
        const int E = static_cast<int>(a.size());
        std::vector<int> assign(static_cast<std::size_t>(E)), left(ns);
        auto solve = [&] {
            VectorXcd y(E);
            for (std::size_t j = 0; j < k; ++j) {
                MatrixXcd A(ns[j], ns[j]);
                VectorXcd rhs(ns[j]);
                int row = 0;
                for (int e = 0; e < E; ++e)
                    if (assign[static_cast<std::size_t>(e)] == static_cast<int>(j)) {
                        A.row(row) = a[static_cast<std::size_t>(e)][j].transpose();
                        rhs(row) = -b[static_cast<std::size_t>(e)][j];
                        ++row;
                    }
                y.segment(offsets[j], ns[j]) = A.partialPivLu().solve(rhs);
            }
            out.push_back(std::move(y));
        };
        auto rec = [&](auto&& self, int e) -> void {
            if (e == E) {
                solve();
                return;
            }
            for (std::size_t j = 0; j < k; ++j) {
                if (left[j] == 0)
                    continue;
                --left[j];
                assign[static_cast<std::size_t>(e)] = static_cast<int>(j);
                self(self, e + 1);
                ++left[j];
            }
        };
        rec(rec, 0);
        return out;
    }
};

StartSystem random_start(Rng& rng, const MinorSystem& sys)
{
    StartSystem s;
    s.ns = sys.group_sizes();
    for (int i = 0; i < sys.factors(); ++i)
        s.offsets.push_back(sys.offset(i));
    const int E = sys.equations();
    s.a.resize(static_cast<std::size_t>(E));
    s.b.resize(static_cast<std::size_t>(E));
    for (int e = 0; e < E; ++e)
        for (int n : s.ns) {
            VectorXcd v(n);
            for (int r = 0; r < n; ++r)
                v(r) = rng.gaussian();
            s.a[static_cast<std::size_t>(e)].push_back(v);
            s.b[static_cast<std::size_t>(e)].push_back(rng.gaussian());
        }
    return s;
}

enum class PathStatus { Finite, Diverged, Failed };

struct PathResult {
    PathStatus status = PathStatus::Failed;
    VectorXcd y;
    bool multiple = false;
};

constexpr double kDivergence = 1e8;

class Tracker {
public:
    Tracker(const MinorSystem& f, const StartSystem& g, cplx gamma) : f_(f), g_(g), gamma_(gamma) {}

    PathResult track(VectorXcd y) const
    {
        PathResult res;
        double t = 0.0, h = 0.02;
        int streak = 0;
        VectorXcd dy;
        while (t < 1.0) {
            h = std::min(h, 1.0 - t);
            if (!tangent(y, t, dy)) {
                res.status = sup_norm(y) > 1e4 ? PathStatus::Diverged : PathStatus::Failed;
                return res;
            }
            VectorXcd trial = y + h * dy;
            const double t1 = (1.0 - t < 1e-15) ? 1.0 : std::min(1.0, t + h);
            if (correct(trial, t1)) {
                y = std::move(trial);
                t = t1;
                if (++streak >= 3) {
                    h = std::min(2.0 * h, 0.1);
                    streak = 0;
                }
            } else {
                h *= 0.5;
                streak = 0;
                if (h < 1e-14) {
                    res.status = sup_norm(y) > 1e4 ? PathStatus::Diverged : PathStatus::Failed;
                    return res;
                }
            }
            if (sup_norm(y) > kDivergence) {
                res.status = PathStatus::Diverged;
                return res;
            }
        }
        // sharpen on the target system
        VectorXcd fv;
        MatrixXcd jac;
        for (int it = 0; it < 20; ++it) {
            f_.evaluate(y, fv, &jac);
            auto lu = jac.partialPivLu();
            const VectorXcd delta = lu.solve(fv);
            y -= delta;
            if (delta.norm() <= 1e-15 * (1.0 + y.norm()))
                break;
        }
        f_.evaluate(y, fv, &jac);
        Eigen::JacobiSVD<MatrixXcd> svd(jac);
        const auto& sv = svd.singularValues();
        res.multiple = sv.size() > 0 && sv(sv.size() - 1) < 1e-10 * sv(0);
        res.status = PathStatus::Finite;
        res.y = std::move(y);
        return res;
    }

private:
    void homotopy(const VectorXcd& y, double t, VectorXcd& h, MatrixXcd& hy, VectorXcd* ht) const
    {
        VectorXcd fv, gv;
        MatrixXcd fj, gj;
        f_.evaluate(y, fv, &fj);
        g_.evaluate(y, gv, &gj);
        h = (1.0 - t) * gamma_ * gv + t * fv;
        hy = (1.0 - t) * gamma_ * gj + t * fj;
        if (ht)
            *ht = fv - gamma_ * gv;
    }

    bool tangent(const VectorXcd& y, double t, VectorXcd& dy) const
    {
        VectorXcd h, ht;
        MatrixXcd hy;
        homotopy(y, t, h, hy, &ht);
        auto lu = hy.partialPivLu();
        if (!(std::abs(lu.determinant()) > 0.0))
            return false;
        dy = -lu.solve(ht);
        return dy.allFinite();
    }

    bool correct(VectorXcd& y, double t) const
    {
        VectorXcd h;
        MatrixXcd hy;
        double prev = 0.0;
        for (int it = 0; it < 4; ++it) {
            homotopy(y, t, h, hy, nullptr);
            const VectorXcd delta = hy.partialPivLu().solve(h);
            if (!delta.allFinite())
                return false;
            y -= delta;
            const double nd = delta.norm();
            if (nd <= 1e-9 * (1.0 + y.norm()))
                return true;
            if (it > 0 && nd > 0.5 * prev)
                return false;
            prev = nd;
        }
        return false;
    }

    const MinorSystem& f_;
    const StartSystem& g_;
    cplx gamma_;
};

// Gauss-Newton on the full minor system.
void refine_on_minors(const MinorSystem& sys, VectorXcd& y)
{
    VectorXcd r;
    MatrixXcd jac;
    for (int it = 0; it < 3; ++it) {
        sys.evaluate_minors(y, r, &jac);
        const VectorXcd delta = jac.colPivHouseholderQr().solve(r);
        if (!delta.allFinite())
            return;
        y -= delta;
        if (delta.norm() <= 1e-15 * (1.0 + y.norm()))
            return;
    }
}

BigInt factorial(long m)
{
    BigInt r = 1;
    for (long i = 2; i <= m; ++i)
        r *= i;
    return r;
}

}  // namespace

SingularTuple normalized(const SingularTuple& t)
{
    SingularTuple out = t;
    for (auto& v : out.x) {
        const double nv = v.norm();
        if (nv == 0.0)
            continue;
        v /= nv;
        for (Eigen::Index c = 0; c < v.size(); ++c)
            if (std::abs(v(c)) > 1e-6) {
                v *= std::conj(v(c)) / std::abs(v(c));
                v(c) = cplx(v(c).real(), 0.0);
                break;
            }
    }
    return out;
}

double tuple_distance(const SingularTuple& a, const SingularTuple& b)
{
    if (a.x.size() != b.x.size())
        throw std::invalid_argument("tuple_distance: different factor counts");
    double d = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        if (a.x[i].size() != b.x[i].size())
            throw std::invalid_argument("tuple_distance: different factor sizes");
        d = std::max(d, sup_norm(a.x[i] - b.x[i]));
    }
    return d;
}

MinorSystem::MinorSystem(ComplexTensor t, std::vector<MatrixXcd> charts)
    : t_(std::move(t)), m_(std::move(charts))
{
    const int k = t_.format().order();
    if (static_cast<int>(m_.size()) != k)
        throw std::invalid_argument("one chart per factor is required");
    for (int i = 0; i < k; ++i) {
        const int d = t_.format().dim(i);
        if (m_[static_cast<std::size_t>(i)].rows() != d || m_[static_cast<std::size_t>(i)].cols() != d)
            throw std::invalid_argument("chart size does not match its factor");
        minv_.push_back(m_[static_cast<std::size_t>(i)].inverse());
        ns_.push_back(d - 1);
        offsets_.push_back(total_);
        total_ += d - 1;
    }
}

std::vector<VectorXcd> MinorSystem::to_vectors(const VectorXcd& y) const
{
    std::vector<VectorXcd> x;
    for (std::size_t i = 0; i < ns_.size(); ++i) {
        VectorXcd h(ns_[i] + 1);
        h(0) = 1.0;
        h.tail(ns_[i]) = y.segment(offsets_[i], ns_[i]);
        x.push_back(minv_[i] * h);
    }
    return x;
}

void MinorSystem::pair_contractions(const std::vector<VectorXcd>& x,
                                    std::vector<std::vector<MatrixXcd>>& p) const
{
    const auto& dims = t_.format().dims();
    const std::size_t k = dims.size();
    p.assign(k, std::vector<MatrixXcd>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            p[i][j] = MatrixXcd::Zero(dims[i], dims[j]);
    std::vector<int> idx(k, 0);
    std::vector<cplx> xv(k);
    for (std::size_t lin = 0; lin < t_.size(); ++lin) {
        const cplx v = t_[lin];
        if (v != cplx(0.0)) {
            for (std::size_t l = 0; l < k; ++l)
                xv[l] = x[l](idx[l]);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j) {
                    cplx w = v;
                    for (std::size_t l = 0; l < k; ++l)
                        if (l != i && l != j)
                            w *= xv[l];
                    p[i][j](idx[i], idx[j]) += w;
                }
        }
        for (std::size_t l = k; l-- > 0;) {
            if (++idx[l] < dims[l])
                break;
            idx[l] = 0;
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            p[j][i] = p[i][j].transpose();
}

void MinorSystem::evaluate(const VectorXcd& y, VectorXcd& f, MatrixXcd* jac) const
{
    const auto x = to_vectors(y);
    std::vector<std::vector<MatrixXcd>> p;
    pair_contractions(x, p);
    const std::size_t k = ns_.size();
    f.resize(total_);
    if (jac)
        jac->setZero(total_, total_);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j0 = i == 0 ? 1 : 0;
        const VectorXcd w = m_[i] * (p[i][j0] * x[j0]);
        const int off = offsets_[i];
        for (int s = 1; s <= ns_[i]; ++s)
            f(off + s - 1) = w(s) - w(0) * y(off + s - 1);
        if (!jac)
            continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) {
                for (int s = 1; s <= ns_[i]; ++s)
                    (*jac)(off + s - 1, off + s - 1) = -w(0);
                continue;
            }
            const MatrixXcd q = m_[i] * p[i][j] * minv_[j];
            for (int s = 1; s <= ns_[i]; ++s)
                for (int r = 0; r < ns_[j]; ++r)
                    (*jac)(off + s - 1, offsets_[j] + r) = q(s, 1 + r) - q(0, 1 + r) * y(off + s - 1);
        }
    }
}

void MinorSystem::evaluate_minors(const VectorXcd& y, VectorXcd& res, MatrixXcd* jac) const
{
    const auto x = to_vectors(y);
    std::vector<std::vector<MatrixXcd>> p;
    pair_contractions(x, p);
    const std::size_t k = ns_.size();
    int rows = 0;
    for (int n : ns_)
        rows += (n + 1) * n / 2;
    res.resize(rows);
    if (jac)
        jac->setZero(rows, total_);
    int row = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j0 = i == 0 ? 1 : 0;
        const VectorXcd v = p[i][j0] * x[j0];
        const int d = ns_[i] + 1;
        std::vector<MatrixXcd> dv(k);
        if (jac)
            for (std::size_t j = 0; j < k; ++j)
                if (j != i)
                    dv[j] = p[i][j] * minv_[j];
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b, ++row) {
                res(row) = v(a) * x[i](b) - v(b) * x[i](a);
                if (!jac)
                    continue;
                for (std::size_t j = 0; j < k; ++j)
                    for (int r = 0; r < ns_[j]; ++r) {
                        cplx val;
                        if (j == i)
                            val = v(a) * minv_[i](b, 1 + r) - v(b) * minv_[i](a, 1 + r);
                        else
                            val = dv[j](a, 1 + r) * x[i](b) - dv[j](b, 1 + r) * x[i](a);
                        (*jac)(row, offsets_[j] + r) = val;
                    }
            }
    }
}

MinorSystem build_system(const ComplexTensor& t, std::uint64_t chart_seed)
{
    Rng rng(chart_seed);
    std::vector<MatrixXcd> charts;
    for (int d : t.format().dims())
        charts.push_back(random_matrix(rng, d, d));
    return MinorSystem(t, std::move(charts));
}

BigInt start_path_count(const Format& format)
{
    long total = 0;
    BigInt den = 1;
    for (int n : format.ns()) {
        total += n;
        den *= factorial(n);
    }
    return factorial(total) / den;
}

double minor_residual(const ComplexTensor& t, const std::vector<VectorXcd>& x)
{
    const std::size_t k = x.size();
    std::vector<VectorXcd> u;
    for (const auto& v : x)
        u.push_back(v / v.norm());
    const auto& dims = t.format().dims();
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        VectorXcd c = VectorXcd::Zero(dims[i]);
        std::vector<int> idx(k, 0);
        for (std::size_t lin = 0; lin < t.size(); ++lin) {
            cplx w = t[lin];
            for (std::size_t l = 0; l < k; ++l)
                if (l != i)
                    w *= u[l](idx[l]);
            c(idx[i]) += w;
            for (std::size_t l = k; l-- > 0;) {
                if (++idx[l] < dims[l])
                    break;
                idx[l] = 0;
            }
        }
        for (int a = 0; a < dims[i]; ++a)
            for (int b = a + 1; b < dims[i]; ++b)
                worst = std::max(worst, std::abs(c(a) * u[i](b) - c(b) * u[i](a)));
    }
    return worst;
}

TupleSolveReport solve_singular_tuples(const ComplexTensor& t, const SolverOptions& options)
{
    const Format& format = t.format();
    TupleSolveReport rep;
    rep.expected_count = ed_degree(format.ns());
    const BigInt paths = start_path_count(format);
    if (paths.get_d() > options.max_paths)
        throw GuardRefusal("solver needs " + to_decimal(paths) + " paths, above the limit of " +
                           std::to_string(static_cast<long long>(options.max_paths)));
    bool any_stable = false;
    for (int attempt = 0; attempt < std::max(1, options.max_seeds); ++attempt) {
        const std::uint64_t seed = options.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(attempt);
        Rng rng(seed);
        std::vector<MatrixXcd> charts;
        for (int d : format.dims())
            charts.push_back(random_matrix(rng, d, d));
        const MinorSystem sys(t, std::move(charts));
        const StartSystem start = random_start(rng, sys);
        const cplx gamma = rng.unit();
        const auto starts = start.solutions();
        const Tracker tracker(sys, start, gamma);

        std::vector<PathResult> results(starts.size());
        const auto count = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1) if (options.parallel)
        for (std::ptrdiff_t s = 0; s < count; ++s) {
            PathResult r = tracker.track(starts[static_cast<std::size_t>(s)]);
            if (r.status == PathStatus::Finite) {
                refine_on_minors(sys, r.y);
                const auto x = sys.to_vectors(r.y);
                if (!(minor_residual(t, x) < options.tol))
                    r.status = sup_norm(r.y) > 1e4 ? PathStatus::Diverged : PathStatus::Failed;
            }
            results[static_cast<std::size_t>(s)] = std::move(r);
        }

        std::size_t failed = 0;
        for (const auto& r : results) {
            ++rep.paths_tracked;
            if (r.status == PathStatus::Failed) {
                ++failed;
                continue;
            }
            if (r.status == PathStatus::Diverged) {
                ++rep.paths_diverged;
                continue;
            }
            SingularTuple tup;
            tup.x = sys.to_vectors(r.y);
            tup.multiple = r.multiple;
            tup = normalized(tup);
            tup.residual = minor_residual(t, tup.x);
            const bool seen = std::any_of(rep.tuples.begin(), rep.tuples.end(), [&](const SingularTuple& o) {
                return tuple_distance(o, tup) < options.dedup_tol;
            });
            if (!seen)
                rep.tuples.push_back(std::move(tup));
        }
        rep.paths_failed += failed;
        ++rep.seeds_used;
        if (static_cast<double>(failed) <= 0.2 * static_cast<double>(results.size()))
            any_stable = true;
        if (BigInt(static_cast<unsigned long>(rep.tuples.size())) >= rep.expected_count && any_stable)
            break;
    }
    if (!any_stable)
        throw TrackingUnstable();
    rep.complete = BigInt(static_cast<unsigned long>(rep.tuples.size())) == rep.expected_count;
    rep.critical_dim = critical_dim_of(t);
    if (!rep.tuples.empty()) {
        rep.span_rank = span_rank(rep.tuples);
        rep.span_codim = rep.critical_dim - std::min(rep.span_rank, rep.critical_dim);
    }
    return rep;
}

VectorXcd rank_one(const std::vector<VectorXcd>& x)
{
    VectorXcd out = VectorXcd::Ones(1);
    for (const auto& v : x) {
        VectorXcd next(out.size() * v.size());
        for (Eigen::Index i = 0; i < out.size(); ++i)
            next.segment(i * v.size(), v.size()) = out(i) * v;
        out = std::move(next);
    }
    return out;
}

double verify_in_critical(const ComplexTensor& t, const SingularTuple& tuple)
{
    std::vector<VectorXcd> u;
    for (const auto& v : tuple.x)
        u.push_back(v / v.norm());
    const VectorXcd z = rank_one(u);
    if (static_cast<std::size_t>(z.size()) != t.size())
        throw std::invalid_argument("tuple does not match the tensor format");
    const auto pat = critical_pattern(t.format());
    std::vector<cplx> rows(pat.rows, 0.0);
    for (const auto& e : pat.entries)
        rows[e.row] += (e.sign > 0 ? t[e.t_index] : -t[e.t_index]) * z(static_cast<Eigen::Index>(e.col));
    double worst = 0.0;
    for (const auto& v : rows)
        worst = std::max(worst, std::abs(v));
    return worst;
}

std::size_t numeric_rank(const MatrixXcd& m, double min_gap)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::BDCSVD<MatrixXcd> svd(m);
    const Eigen::VectorXd& s = svd.singularValues();
    const Eigen::Index r = s.size();
    if (s(0) == 0.0)
        return 0;
    // values below the floor are indistinguishable from zero
    const double floor = 1e-16 * s(0);
    auto clamp = [&](Eigen::Index i) { return i < r ? std::max(s(i), floor) : floor; };
    double best = -1.0;
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < r; ++i) {
        const double ratio = clamp(i) / clamp(i + 1);
        if (ratio > best) {
            best = ratio;
            at = static_cast<std::size_t>(i + 1);
        }
    }
    if (best < min_gap)
        throw IllConditioned();
    return at;
}

std::size_t span_rank(const std::vector<SingularTuple>& tuples)
{
    if (tuples.empty())
        return 0;
    const VectorXcd first = rank_one(tuples[0].x);
    MatrixXcd m(static_cast<Eigen::Index>(tuples.size()), first.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        std::vector<VectorXcd> u;
        for (const auto& v : tuples[i].x)
            u.push_back(v / v.norm());
        m.row(static_cast<Eigen::Index>(i)) = rank_one(u).transpose();
    }
    return numeric_rank(m);
}

std::size_t critical_dim_of(const ComplexTensor& t)
{
    const bool real = std::all_of(t.entries().begin(), t.entries().end(),
                                  [](const cplx& v) { return v.imag() == 0.0; });
    if (real) {
        std::vector<double> e;
        for (const auto& v : t.entries())
            e.push_back(v.real());
        return critical_dim_exact(RealTensor(t.format(), std::move(e)));
    }
    const auto pat = critical_pattern(t.format());
    MatrixXcd m = MatrixXcd::Zero(static_cast<Eigen::Index>(pat.rows), static_cast<Eigen::Index>(pat.cols));
    for (const auto& e : pat.entries)
        m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) +=
            e.sign > 0 ? t[e.t_index] : -t[e.t_index];
    return pat.cols - numeric_rank(m);
}

std::size_t span_codim_in_H(const ComplexTensor& t, const std::vector<SingularTuple>& tuples)
{
    const std::size_t cd = critical_dim_of(t);
    const std::size_t r = span_rank(tuples);
    if (r > cd)
        throw Inconsistency("span of the tuples exceeds the critical space");
    return cd - r;
}

ComplexTensor random_real_tensor(const Format& format, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<cplx> e(static_cast<std::size_t>(format.entry_count()));
    for (auto& v : e)
        v = cplx(std::sqrt(2.0) * rng.gaussian().real(), 0.0);
    return ComplexTensor(format, std::move(e));
}

}  // namespace critspace
