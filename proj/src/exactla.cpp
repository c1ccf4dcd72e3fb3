#include "critspace/exactla.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace critspace {

namespace {

// below this many multiply-adds the OpenMP fork costs more than it saves
constexpr std::size_t kParallelWork = 1u << 15;

// y += f * x over F_p with Shoup's precomputed quotient; needs p < 2^31 and
// f < p. Branch-free so the loop vectorizes.
void axpy_mod(std::uint32_t* __restrict y, const std::uint32_t* __restrict x, std::size_t n, std::uint32_t f,
              std::uint32_t p)
{
    const std::uint64_t fs = (static_cast<std::uint64_t>(f) << 32) / p;
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t xj = x[j];
        const auto q = static_cast<std::uint32_t>((static_cast<std::uint64_t>(xj) * fs) >> 32);
        std::uint32_t r = xj * f - q * p;  // in [0, 2p)
        r = r >= p ? r - p : r;
        const std::uint32_t t = y[j] + r;
        y[j] = t >= p ? t - p : t;
    }
}

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t range)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % range;
}

}  // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic for all 64-bit n
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p)
{
    if (p <= 2 || p >= (1u << 31) || !is_prime(p))
        throw std::invalid_argument("field modulus must be a prime in (2, 2^31), got " + std::to_string(p));
    mu_ = std::numeric_limits<std::uint64_t>::max() / p;
}

std::uint32_t PrimeField::reduce(std::int64_t v) const
{
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0)
        r += p_;
    return static_cast<std::uint32_t>(r);
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const
{
    std::uint32_t r = 1;
    while (e) {
        if (e & 1)
            r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint32_t PrimeField::inv(std::uint32_t a) const
{
    if (a == 0)
        throw std::domain_error("inverse of zero in F_p");
    return pow(a, p_ - 2);
}

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, PrimeField field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, 0)
{
}

FpMatrix FpMatrix::identity(std::size_t n, PrimeField field)
{
    FpMatrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

FpMatrix FpMatrix::transpose() const
{
    FpMatrix t(cols_, rows_, field_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

std::vector<std::uint32_t> FpMatrix::apply(std::span<const std::uint32_t> v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("FpMatrix::apply: length mismatch");
    std::vector<std::uint32_t> out(rows_, 0);
    const std::uint64_t p2 = static_cast<std::uint64_t>(field_.prime()) * field_.prime();
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            acc += static_cast<std::uint64_t>((*this)(r, c)) * v[c];
            if (acc >= p2)
                acc -= p2;
        }
        out[r] = field_.reduce_wide(acc);
    }
    return out;
}

EchelonBasis::EchelonBasis(std::size_t length, PrimeField field)
    : length_(length), field_(field), free_(length), slot_of_(length), row_of_pivot_(length, kNone), acc_(length, 0)
{
    for (std::size_t j = 0; j < length; ++j)
        free_[j] = slot_of_[j] = j;
}

bool EchelonBasis::insert(std::span<const std::uint32_t> v)
{
    if (v.size() != length_)
        throw std::invalid_argument("EchelonBasis::insert: length mismatch");
    if (full())
        return false;
    const std::size_t nf = free_.size();
    for (std::size_t s = 0; s < nf; ++s)
        acc_[s] = v[free_[s]];
    active_.clear();
    for (std::size_t b = 0; b < rows_.size(); ++b)
        if (const std::uint32_t c = v[pivot_of_row_[b]]; c != 0)
            active_.emplace_back(b, c);
    return reduce_and_keep();
}

bool EchelonBasis::insert_sparse(std::span<const std::size_t> index, std::span<const std::uint32_t> value)
{
    if (index.size() != value.size())
        throw std::invalid_argument("EchelonBasis::insert_sparse: size mismatch");
    if (full())
        return false;
    std::fill(acc_.begin(), acc_.begin() + static_cast<std::ptrdiff_t>(free_.size()), 0u);
    active_.clear();
    for (std::size_t i = 0; i < index.size(); ++i) {
        const std::size_t j = index[i];
        if (j >= length_)
            throw std::invalid_argument("EchelonBasis::insert_sparse: index out of range");
        if (value[i] == 0)
            continue;
        if (slot_of_[j] != kNone)
            acc_[slot_of_[j]] = field_.add(acc_[slot_of_[j]], value[i]);
        else
            active_.emplace_back(row_of_pivot_[j], value[i]);
    }
    // a repeated pivot index contributes the sum of its values
    std::sort(active_.begin(), active_.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < active_.size(); ++i) {
        if (out > 0 && active_[out - 1].first == active_[i].first)
            active_[out - 1].second = field_.add(active_[out - 1].second, active_[i].second);
        else
            active_[out++] = active_[i];
    }
    active_.resize(out);
    return reduce_and_keep();
}

// acc_ holds v on the free columns and active_ the basis rows b with
// c = v[pivot(b)] != 0. Rows are reduced, so v - sum c * b vanishes on every
// pivot column and only the free part needs computing.
bool EchelonBasis::reduce_and_keep()
{
    const std::uint32_t p = field_.prime();
    const std::size_t nf = free_.size();
    std::uint32_t* acc = acc_.data();
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (nf + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static) if (active_.size() * nf >= kParallelWork)
    for (std::size_t ch = 0; ch < chunks; ++ch) {
        const std::size_t lo = ch * kChunk, n = std::min(nf, lo + kChunk) - lo;
        for (const auto& [b, c] : active_)
            if (c != 0)
                axpy_mod(acc + lo, rows_[b].data() + lo, n, p - c, p);
    }

    std::size_t lead = nf;
    for (std::size_t s = 0; s < nf; ++s)
        if (acc[s] != 0) {
            lead = s;
            break;
        }
    if (lead == nf)
        return false;

    std::vector<std::uint32_t> fresh(acc, acc + nf);
    const std::uint32_t scale = field_.inv(fresh[lead]);
    for (auto& x : fresh)
        if (x != 0)
            x = field_.mul(x, scale);

    // clear the new pivot from the existing rows, then drop its slot by
    // moving the last free column into it
    const std::size_t last = nf - 1;
    const std::size_t nrows = rows_.size();
#pragma omp parallel for schedule(static) if (nrows * nf >= kParallelWork)
    for (std::size_t b = 0; b < nrows; ++b) {
        std::vector<std::uint32_t>& row = rows_[b];
        if (const std::uint32_t c = row[lead]; c != 0)
            axpy_mod(row.data(), fresh.data(), nf, p - c, p);
        row[lead] = row[last];
        row.pop_back();
    }
    fresh[lead] = fresh[last];
    fresh.pop_back();

    const std::size_t col = free_[lead];
    slot_of_[col] = kNone;
    if (lead != last) {
        free_[lead] = free_[last];
        slot_of_[free_[lead]] = lead;
    }
    free_.pop_back();

    row_of_pivot_[col] = rows_.size();
    rows_.push_back(std::move(fresh));
    pivot_of_row_.push_back(col);
    return true;
}

std::vector<std::vector<std::uint32_t>> EchelonBasis::orthogonal_complement() const
{
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::size_t> cols(free_);
    std::sort(cols.begin(), cols.end());
    for (std::size_t f : cols) {
        const std::size_t s = slot_of_[f];
        std::vector<std::uint32_t> v(length_, 0);
        v[f] = 1;
        for (std::size_t b = 0; b < rows_.size(); ++b)
            v[pivot_of_row_[b]] = field_.neg(rows_[b][s]);
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

// Forward elimination on a copy; r^2 (R + C) / 2 multiply-adds for rank r.
std::size_t rank_dense(const FpMatrix& m)
{
    const std::size_t R = m.rows(), C = m.cols();
    const PrimeField& field = m.field();
    const std::uint32_t p = field.prime();
    std::vector<std::uint32_t> a(R * C);
    for (std::size_t r = 0; r < R; ++r) {
        auto row = m.row(r);
        std::copy(row.begin(), row.end(), a.begin() + static_cast<std::ptrdiff_t>(r * C));
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t piv = rank;
        while (piv < R && a[piv * C + c] == 0)
            ++piv;
        if (piv == R)
            continue;
        if (piv != rank)
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(piv * C + c),
                             a.begin() + static_cast<std::ptrdiff_t>(piv * C + C),
                             a.begin() + static_cast<std::ptrdiff_t>(rank * C + c));
        const std::uint32_t inv = field.inv(a[rank * C + c]);
        const std::uint32_t* prow = a.data() + rank * C;
        const std::size_t below = R - rank - 1, width = C - c - 1;
#pragma omp parallel for schedule(static) if (below * width >= kParallelWork)
        for (std::size_t r = rank + 1; r < R; ++r) {
            std::uint32_t* row = a.data() + r * C;
            const std::uint32_t v = row[c];
            if (v == 0)
                continue;
            axpy_mod(row + c + 1, prow + c + 1, width, field.neg(field.mul(v, inv)), p);
            row[c] = 0;
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::size_t rank(const FpMatrix& m)
{
    const std::size_t R = m.rows(), C = m.cols();
    if (R == 0 || C == 0)
        return 0;
    // very tall or wide matrices are mostly sparse here; streaming the long
    // side into a reduced basis keeps the work near rank^2 * short side
    if (std::max(R, C) <= 4 * std::min(R, C))
        return rank_dense(m);
    if (R >= C) {
        EchelonBasis basis(C, m.field());
        for (std::size_t r = 0; r < R && !basis.full(); ++r)
            basis.insert(m.row(r));
        return basis.rank();
    }
    EchelonBasis basis(R, m.field());
    std::vector<std::uint32_t> col(R);
    for (std::size_t c = 0; c < C && !basis.full(); ++c) {
        for (std::size_t r = 0; r < R; ++r)
            col[r] = m(r, c);
        basis.insert(col);
    }
    return basis.rank();
}

std::size_t rank_reference(const FpMatrix& m)
{
    const std::uint64_t p = m.field().prime();
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<std::uint64_t>> a(R, std::vector<std::uint64_t>(C));
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c)
            a[r][c] = m(r, c);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t piv = rank;
        while (piv < R && a[piv][c] == 0)
            ++piv;
        if (piv == R)
            continue;
        std::swap(a[piv], a[rank]);
        const std::uint64_t inv = m.field().inv(static_cast<std::uint32_t>(a[rank][c]));
        for (std::size_t j = c; j < C; ++j)
            a[rank][j] = a[rank][j] * inv % p;
        for (std::size_t r = rank + 1; r < R; ++r) {
            const std::uint64_t f = a[r][c];
            if (f == 0)
                continue;
            for (std::size_t j = c; j < C; ++j)
                a[r][j] = (a[r][j] + (p - f) * a[rank][j]) % p;
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<std::uint32_t>> kernel_basis(const FpMatrix& m)
{
    EchelonBasis basis(m.cols(), m.field());
    for (std::size_t r = 0; r < m.rows() && !basis.full(); ++r)
        basis.insert(m.row(r));
    return basis.orthogonal_complement();
}

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

QMatrix QMatrix::transpose() const
{
    QMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

std::vector<mpq_class> QMatrix::apply(const std::vector<mpq_class>& v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("QMatrix::apply: length mismatch");
    std::vector<mpq_class> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (sgn((*this)(r, c)) != 0)
                out[r] += (*this)(r, c) * v[c];
    return out;
}

FpMatrix QMatrix::reduce_mod(PrimeField field) const
{
    FpMatrix out(rows_, cols_, field);
    const unsigned long p = field.prime();
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const mpq_class& q = (*this)(r, c);
            const unsigned long num = mpz_fdiv_ui(q.get_num_mpz_t(), p);
            const unsigned long den = mpz_fdiv_ui(q.get_den_mpz_t(), p);
            if (den == 0)
                throw std::domain_error("denominator vanishes modulo p");
            out(r, c) = field.mul(static_cast<std::uint32_t>(num),
                                  field.inv(static_cast<std::uint32_t>(den)));
        }
    return out;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<mpq_class>>& a, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    const std::size_t R = a.size();
    for (std::size_t c = 0; c < cols && rank < R; ++c) {
        std::size_t piv = rank;
        while (piv < R && sgn(a[piv][c]) == 0)
            ++piv;
        if (piv == R)
            continue;
        std::swap(a[piv], a[rank]);
        const mpq_class inv = 1 / a[rank][c];
        for (std::size_t j = c; j < cols; ++j)
            a[rank][j] *= inv;
        for (std::size_t r = 0; r < R; ++r) {
            if (r == rank || sgn(a[r][c]) == 0)
                continue;
            const mpq_class f = a[r][c];
            for (std::size_t j = c; j < cols; ++j)
                if (sgn(a[rank][j]) != 0)
                    a[r][j] -= f * a[rank][j];
        }
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

std::vector<std::vector<mpq_class>> rows_of(const QMatrix& m)
{
    std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            a[r][c] = m(r, c);
    return a;
}

}  // namespace

std::size_t rank(const QMatrix& m)
{
    if (m.rows() > m.cols()) {
        auto a = rows_of(m.transpose());
        return rref(a, m.rows()).size();
    }
    auto a = rows_of(m);
    return rref(a, m.cols()).size();
}

std::vector<std::vector<mpq_class>> kernel_basis(const QMatrix& m)
{
    auto a = rows_of(m);
    const auto pivots = rref(a, m.cols());
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto c : pivots)
        is_pivot[c] = 1;
    std::vector<std::vector<mpq_class>> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        std::vector<mpq_class> v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -a[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::int64_t> random_entries(std::size_t count, std::uint64_t seed,
                                         const EntryDistribution& dist)
{
    std::mt19937_64 gen(seed);
    std::vector<std::int64_t> out(count);
    if (dist.kind == EntryKind::PrimeField) {
        if (dist.prime < 2)
            throw std::invalid_argument("random_entries: modulus must be >= 2");
        for (auto& x : out)
            x = static_cast<std::int64_t>(uniform_below(gen, dist.prime));
    } else {
        if (dist.bound < 0 || dist.bound > (std::int64_t{1} << 40))
            throw std::invalid_argument("random_entries: integer bound out of range");
        const std::uint64_t range = 2 * static_cast<std::uint64_t>(dist.bound) + 1;
        for (auto& x : out)
            x = static_cast<std::int64_t>(uniform_below(gen, range)) - dist.bound;
    }
    return out;
}

std::vector<std::int64_t> random_tensor(const Format& format, std::uint64_t seed,
                                        const EntryDistribution& dist)
{
    return random_entries(static_cast<std::size_t>(format.entry_count()), seed, dist);
}

}  // namespace critspace
