#include "critspace/critical.hpp"

#include <algorithm>
#include <stdexcept>

#include "critspace/errors.hpp"

namespace critspace {

namespace {

void monomials_rec(int vars, int var, int left, std::vector<int>& cur, std::vector<int>& out)
{
    if (var == vars - 1) {
        cur[static_cast<std::size_t>(var)] = left;
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (int e = left; e >= 0; --e) {
        cur[static_cast<std::size_t>(var)] = e;
        monomials_rec(vars, var + 1, left - e, cur, out);
    }
}

std::size_t pair_index(std::size_t d, std::size_t p, std::size_t q)
{
    return p * d - p * (p + 1) / 2 + (q - p - 1);
}

std::size_t to_size(const BigInt& v, const char* what)
{
    if (v > BigInt(static_cast<unsigned long>(SIZE_MAX / 2)))
        throw GuardRefusal(std::string(what) + " too large to index");
    return static_cast<std::size_t>(v.get_ui());
}

IntTensor canonical_beyond_by_one(const IntTensor& t)
{
    if (!is_beyond_by_one(t.format()))
        throw InputError("format " + t.format().to_string() + " is not beyond-by-one");
    return t.canonical();
}

std::vector<std::uint32_t> reduce_entries(const IntTensor& t, const PrimeField& f)
{
    std::vector<std::uint32_t> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out[i] = f.reduce(t[i]);
    return out;
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int degree) : vars_(vars), degree_(degree)
{
    if (vars < 1)
        throw std::invalid_argument("MonomialBasis needs at least one variable");
    if (degree < 0)
        return;
    std::vector<int> cur(static_cast<std::size_t>(vars), 0);
    monomials_rec(vars, 0, degree, cur, exps_);
    count_ = exps_.size() / static_cast<std::size_t>(vars);
    for (std::size_t i = 0; i < count_; ++i) {
        auto e = exponent(i);
        lookup_.emplace(std::vector<int>(e.begin(), e.end()), i);
    }
}

std::size_t MonomialBasis::index_of(std::span<const int> e) const
{
    auto it = lookup_.find(std::vector<int>(e.begin(), e.end()));
    return it == lookup_.end() ? npos : it->second;
}

CriticalPattern critical_pattern(const Format& format)
{
    CriticalPattern pat;
    const auto& dims = format.dims();
    const std::size_t k = dims.size();
    std::vector<std::size_t> offset(k, 0);
    for (std::size_t l = 0; l < k; ++l) {
        offset[l] = pat.rows;
        pat.rows += static_cast<std::size_t>(binom(dims[l], 2));
    }
    pat.cols = static_cast<std::size_t>(format.entry_count());
    const auto strides = strides_of(format);
    for (std::size_t col = 0; col < pat.cols; ++col) {
        const auto idx = multi_index(format, col);
        for (std::size_t l = 0; l < k; ++l) {
            const auto d = static_cast<std::size_t>(dims[l]);
            const auto j = static_cast<std::size_t>(idx[l]);
            const std::size_t base = col - j * strides[l];
            for (std::size_t other = 0; other < d; ++other) {
                if (other == j)
                    continue;
                const std::size_t t_index = base + other * strides[l];
                if (other < j)
                    pat.entries.push_back({offset[l] + pair_index(d, other, j), col, t_index, +1});
                else
                    pat.entries.push_back({offset[l] + pair_index(d, j, other), col, t_index, -1});
            }
        }
    }
    return pat;
}

FpMatrix critical_equations(const IntTensor& t, PrimeField field)
{
    const auto pat = critical_pattern(t.format());
    FpMatrix m(pat.rows, pat.cols, field);
    for (const auto& e : pat.entries) {
        const std::uint32_t v = field.reduce(t[e.t_index]);
        m(e.row, e.col) = field.add(m(e.row, e.col), e.sign > 0 ? v : field.neg(v));
    }
    return m;
}

QMatrix critical_equations_q(const RealTensor& t)
{
    const auto pat = critical_pattern(t.format());
    QMatrix m(pat.rows, pat.cols);
    for (const auto& e : pat.entries) {
        const mpq_class v(t[e.t_index]);
        if (e.sign > 0)
            m(e.row, e.col) += v;
        else
            m(e.row, e.col) -= v;
    }
    return m;
}

std::size_t critical_dim(const IntTensor& t, PrimeField field)
{
    const auto pat = critical_pattern(t.format());
    if (pat.rows < pat.cols) {
        const auto m = critical_equations(t, field);
        return m.cols() - rank(m);
    }
    // rows are sparse: stream them without a dense copy
    std::vector<std::size_t> start(pat.rows + 1, 0);
    for (const auto& e : pat.entries)
        ++start[e.row + 1];
    for (std::size_t r = 0; r < pat.rows; ++r)
        start[r + 1] += start[r];
    std::vector<std::size_t> index(pat.entries.size());
    std::vector<std::uint32_t> value(pat.entries.size());
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& e : pat.entries) {
        const std::uint32_t v = field.reduce(t[e.t_index]);
        index[fill[e.row]] = e.col;
        value[fill[e.row]++] = e.sign > 0 ? v : field.neg(v);
    }
    EchelonBasis basis(pat.cols, field);
    for (std::size_t r = 0; r < pat.rows && !basis.full(); ++r) {
        const std::size_t n = start[r + 1] - start[r];
        basis.insert_sparse(std::span(index).subspan(start[r], n), std::span(value).subspan(start[r], n));
    }
    return pat.cols - basis.rank();
}

std::size_t critical_dim_exact(const RealTensor& t)
{
    const auto m = critical_equations_q(t);
    return m.cols() - rank(m);
}

AlphaShape alpha_shape(const Format& format)
{
    if (!is_beyond_by_one(format))
        throw InputError("format " + format.to_string() + " is not beyond-by-one");
    const auto lead = beyond_by_one_leading(format);
    long n = 0;
    for (int v : lead)
        n += v;
    AlphaShape s{1, n + 2};
    for (int v : lead) {
        s.domain *= binom_big(n - 1, v);
        s.codomain *= binom_big(n - 2, v);
    }
    return s;
}

AlphaLayout::AlphaLayout(const Format& canonical_format)
{
    if (!is_beyond_by_one(canonical_format) || !(canonical_format.canonical().dims() == canonical_format.dims()))
        throw InputError("AlphaLayout needs a beyond-by-one format in canonical order");
    const auto shape = alpha_shape(canonical_format);
    domain_ = to_size(shape.domain, "alpha domain");
    codomain_ = to_size(shape.codomain, "alpha codomain");
    lead_ = beyond_by_one_leading(canonical_format);
    for (int v : lead_)
        n_ += v;
    last_dim_ = static_cast<std::size_t>(n_ + 2);
    const std::size_t k = lead_.size();
    const auto strides = strides_of(canonical_format);
    t_stride_.assign(strides.begin(), strides.begin() + static_cast<std::ptrdiff_t>(k));
    steps_.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        const int vars = lead_[j] + 1;
        dom_.emplace_back(vars, n_ - lead_[j] - 1);
        cod_.emplace_back(vars, n_ - lead_[j] - 2);
        const auto& dom = dom_.back();
        const auto& cod = cod_.back();
        steps_[j].resize(dom.size());
        std::vector<int> e;
        for (std::size_t m = 0; m < dom.size(); ++m) {
            auto ex = dom.exponent(m);
            for (int v = 0; v < vars; ++v) {
                if (ex[static_cast<std::size_t>(v)] == 0)
                    continue;
                e.assign(ex.begin(), ex.end());
                --e[static_cast<std::size_t>(v)];
                const std::size_t d = cod.index_of(e);
                if (d != MonomialBasis::npos)
                    steps_[j][m].push_back({v, ex[static_cast<std::size_t>(v)], d});
            }
        }
    }
}

bool alpha_within_guard(const AlphaShape& shape, const AlphaGuard& guard)
{
    const double d = shape.domain.get_d(), c = shape.codomain.get_d();
    const double lo = std::min(d, c), hi = std::max(d, c);
    return d * c <= guard.max_entries && lo * lo * hi <= guard.max_work;
}

void check_alpha_guard(const AlphaShape& shape, const AlphaGuard& guard)
{
    if (!alpha_within_guard(shape, guard))
        throw GuardRefusal("alpha matrix " + to_decimal(shape.codomain) + " x " + to_decimal(shape.domain) +
                           " exceeds the resource guard");
}

FpMatrix alpha_matrix(const IntTensor& t, PrimeField field)
{
    const IntTensor c = canonical_beyond_by_one(t);
    const AlphaLayout layout(c.format());
    const auto tr = reduce_entries(c, field);
    const std::size_t D = layout.domain_dim(), C = layout.codomain_dim();
    FpMatrix m(C, D, field);
    const std::size_t last = layout.last_dim();
#pragma omp parallel for schedule(dynamic, 16) if (C * D > (1u << 14))
    for (std::size_t col = 0; col < D; ++col) {
        layout.for_each_in_column(col, [&](std::size_t row_base, std::int64_t mult, std::size_t tb) {
            const std::uint32_t f = field.reduce(mult);
            for (std::size_t s = 0; s < last; ++s)
                m(row_base + s, col) = field.mul(f, tr[tb + s]);
        });
    }
    return m;
}

FpMatrix alpha_matrix_reference(const IntTensor& t, PrimeField field)
{
    const IntTensor c = canonical_beyond_by_one(t);
    const auto lead = beyond_by_one_leading(c.format());
    const std::size_t k = lead.size();
    int n = 0;
    for (int v : lead)
        n += v;
    std::vector<MonomialBasis> dom, cod;
    std::size_t D = 1, C = static_cast<std::size_t>(n + 2);
    for (int v : lead) {
        dom.emplace_back(v + 1, n - v - 1);
        cod.emplace_back(v + 1, n - v - 2);
        D *= dom.back().size();
        C *= cod.back().size();
    }
    FpMatrix m(C, D, field);
    if (C == 0)
        return m;
    std::vector<std::size_t> mono(k);
    std::vector<int> idx(k + 1);
    for (std::size_t col = 0; col < D; ++col) {
        std::size_t rest = col;
        for (std::size_t j = k; j-- > 0;) {
            mono[j] = rest % dom[j].size();
            rest /= dom[j].size();
        }
        // every multi-index (i_1..i_k), skipping those with a zero derivative
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            std::int64_t mult = 1;
            std::size_t row = 0;
            for (std::size_t j = 0; j < k && mult != 0; ++j) {
                auto e = dom[j].exponent(mono[j]);
                std::vector<int> ex(e.begin(), e.end());
                const int a = ex[static_cast<std::size_t>(idx[j])];
                mult *= a;
                if (a == 0)
                    break;
                --ex[static_cast<std::size_t>(idx[j])];
                row = row * cod[j].size() + cod[j].index_of(ex);
            }
            if (mult != 0)
                for (int s = 0; s < n + 2; ++s) {
                    idx[k] = s;
                    const std::uint32_t v = field.mul(field.reduce(mult), field.reduce(c.at(idx)));
                    const std::size_t r = row * static_cast<std::size_t>(n + 2) + static_cast<std::size_t>(s);
                    m(r, col) = field.add(m(r, col), v);
                }
            idx[k] = 0;
            std::size_t j = k;
            while (j-- > 0) {
                if (++idx[j] <= lead[j])
                    break;
                idx[j] = 0;
            }
            if (j == static_cast<std::size_t>(-1))
                break;
        }
    }
    return m;
}

QMatrix alpha_matrix_q(const RealTensor& t)
{
    if (!is_beyond_by_one(t.format()))
        throw InputError("format " + t.format().to_string() + " is not beyond-by-one");
    const RealTensor c = t.canonical();
    const AlphaLayout layout(c.format());
    QMatrix m(layout.codomain_dim(), layout.domain_dim());
    const std::size_t last = layout.last_dim();
    for (std::size_t col = 0; col < layout.domain_dim(); ++col)
        layout.for_each_in_column(col, [&](std::size_t row_base, std::int64_t mult, std::size_t tb) {
            for (std::size_t s = 0; s < last; ++s)
                m(row_base + s, col) = mpq_class(c[tb + s]) * static_cast<long>(mult);
        });
    return m;
}

std::size_t span_codim_via_alpha(const IntTensor& t, PrimeField field)
{
    const auto m = alpha_matrix(t, field);
    return m.cols() - rank(m);
}

std::size_t span_codim_via_alpha_exact(const RealTensor& t)
{
    const auto m = alpha_matrix_q(t);
    return m.cols() - rank(m);
}

ProtocolResult generic_protocol(const Format& format, const std::vector<std::uint32_t>& primes,
                                const std::vector<std::uint64_t>& seeds, const TensorStatistic& f)
{
    if (primes.empty() || seeds.empty())
        throw InputError("the generic-rank protocol needs at least one prime and one seed");
    ProtocolResult out;
    for (std::uint32_t p : primes) {
        const PrimeField field(p);
        for (std::uint64_t s : seeds) {
            IntTensor t(format, random_tensor(format, s, EntryDistribution::field(p)));
            out.runs.push_back(f(t, field));
        }
    }
    out.value = *std::max_element(out.runs.begin(), out.runs.end());
    out.agreed = std::all_of(out.runs.begin(), out.runs.end(), [&](std::size_t v) { return v == out.value; });
    return out;
}

KoszulResult koszul_oracle(int a, int b, const IntTensor& t, PrimeField field, std::uint64_t seed)
{
    if (a > b)
        std::swap(a, b);
    if (a < 2)
        throw InputError("koszul_oracle needs a, b >= 2");
    const IntTensor c = t.canonical();
    if (!(c.format().dims() == std::vector<int>{a + 1, b + 1, a + b + 2}))
        throw InputError("koszul_oracle expects a tensor of format " +
                         Format({a + 1, b + 1, a + b + 2}).to_string() + ", got " + t.format().to_string());
    const std::size_t da = static_cast<std::size_t>(a + 1), db = static_cast<std::size_t>(b + 1);
    const std::size_t m = static_cast<std::size_t>(a + b + 2), ab = da * db;
    const auto tr = reduce_entries(c, field);
    auto T = [&](std::size_t i, std::size_t j, std::size_t w) { return tr[(i * db + j) * m + w]; };

    FpMatrix tw(ab, m, field);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t w = 0; w < m; ++w)
                tw(i * db + j, w) = T(i, j, w);
    if (rank(tw) != m)
        throw DegenerateTensor();

    const MonomialBasis s2a(a + 1, 2), s2b(b + 1, 2);
    auto square_index = [](const MonomialBasis& basis, std::size_t vars) {
        std::vector<std::size_t> out(vars * vars);
        std::vector<int> e(vars);
        for (std::size_t x = 0; x < vars; ++x)
            for (std::size_t y = 0; y < vars; ++y) {
                std::fill(e.begin(), e.end(), 0);
                ++e[x];
                ++e[y];
                out[x * vars + y] = basis.index_of(e);
            }
        return out;
    };
    const auto pa = square_index(s2a, da), pb = square_index(s2b, db);
    const std::size_t r2 = s2a.size() * s2b.size();
    // u * (e_i (x) e_j) in S^2A (x) S^2B for u in A (x) B
    auto times_unit = [&](std::span<const std::uint32_t> u, std::size_t i, std::size_t j,
                          std::vector<std::uint32_t>& out) {
        std::fill(out.begin(), out.end(), 0);
        for (std::size_t x = 0; x < da; ++x)
            for (std::size_t y = 0; y < db; ++y) {
                const std::uint32_t v = u[x * db + y];
                if (v == 0)
                    continue;
                const std::size_t row = pa[x * da + i] * s2b.size() + pb[y * db + j];
                out[row] = field.add(out[row], v);
            }
    };

    KoszulResult res;
    {
        // Lambda^2 W -> W (x) A (x) B -> S^2A (x) S^2B
        FpMatrix right(r2, m * ab, field);
        std::vector<std::uint32_t> tcol(ab), prod(r2);
        for (std::size_t w = 0; w < m; ++w) {
            for (std::size_t x = 0; x < ab; ++x)
                tcol[x] = tw(x, w);
            for (std::size_t i = 0; i < da; ++i)
                for (std::size_t j = 0; j < db; ++j) {
                    times_unit(tcol, i, j, prod);
                    const std::size_t col = w * ab + i * db + j;
                    for (std::size_t r = 0; r < r2; ++r)
                        right(r, col) = prod[r];
                }
        }
        FpMatrix left(m * ab, m * (m - 1) / 2, field);
        std::size_t col = 0;
        for (std::size_t w1 = 0; w1 < m; ++w1)
            for (std::size_t w2 = w1 + 1; w2 < m; ++w2, ++col)
                for (std::size_t x = 0; x < ab; ++x) {
                    left(w1 * ab + x, col) = tw(x, w2);
                    left(w2 * ab + x, col) = field.neg(tw(x, w1));
                }
        const std::size_t ker_right = m * ab - rank(right);
        res.complex_homology = ker_right - rank(left);
    }
    {
        // hyperplane section H of dimension m-1 plus a complement z
        std::uint64_t s = seed;
        FpMatrix g(m, m, field);
        do {
            auto e = random_entries(m * m, s++, EntryDistribution::field(field.prime()));
            for (std::size_t x = 0; x < m * m; ++x)
                g(x / m, x % m) = static_cast<std::uint32_t>(e[x]);
        } while (rank(g) != m);
        auto image = [&](std::size_t row) {
            std::vector<std::uint32_t> u(ab, 0);
            for (std::size_t x = 0; x < ab; ++x) {
                std::uint32_t acc = 0;
                for (std::size_t w = 0; w < m; ++w)
                    acc = field.add(acc, field.mul(g(row, w), tw(x, w)));
                u[x] = acc;
            }
            return u;
        };
        EchelonBasis basis(r2, field);
        std::vector<std::uint32_t> prod(r2);
        for (std::size_t h = 0; h + 1 < m; ++h) {
            const auto u = image(h);
            for (std::size_t i = 0; i < da; ++i)
                for (std::size_t j = 0; j < db; ++j) {
                    times_unit(u, i, j, prod);
                    basis.insert(prod);
                }
        }
        const std::size_t rank_u = basis.rank();
        const auto z = image(m - 1);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < db; ++j) {
                times_unit(z, i, j, prod);
                basis.insert(prod);
            }
        const std::size_t image_dim = basis.rank() - rank_u;
        res.artinian = ab - (m - 1) - image_dim;
    }
    return res;
}

}  // namespace critspace
