#include "critspace/format.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace critspace {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("64-bit overflow in format arithmetic");
    return out;
}

void sorted_tuples_rec(int k, int lo, int max_n, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int v = lo; v <= max_n; ++v) {
        cur.push_back(v);
        sorted_tuples_rec(k, v, max_n, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::int64_t binom(std::int64_t p, std::int64_t q)
{
    if (q < 0 || p < 0 || q > p)
        return 0;
    q = std::min(q, p - q);
    // exact at every step: result * (p - i) is divisible by (i + 1)
    __int128 result = 1;
    for (std::int64_t i = 0; i < q; ++i) {
        result = result * (p - i) / (i + 1);
        if (result > INT64_MAX)
            throw std::overflow_error("binomial exceeds 64 bits");
    }
    return static_cast<std::int64_t>(result);
}

BigInt binom_big(std::int64_t p, std::int64_t q)
{
    BigInt out;
    if (q < 0 || p < 0 || q > p)
        return out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(q));
    return out;
}

const char* to_string(FormatClass c)
{
    switch (c) {
    case FormatClass::SubBoundary: return "SubBoundary";
    case FormatClass::Boundary: return "Boundary";
    case FormatClass::BeyondBoundary: return "BeyondBoundary";
    }
    return "?";
}

Format::Format(std::vector<int> dims) : dims_(std::move(dims))
{
    if (dims_.size() < 2)
        throw std::invalid_argument("a format needs at least two factors");
    for (int d : dims_)
        if (d < 2)
            throw std::invalid_argument("every format entry must be >= 2");
}

Format Format::parse(std::string_view text)
{
    std::vector<int> dims;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('x', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view tok = text.substr(pos, end - pos);
        int value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
            throw std::invalid_argument("malformed format string '" + std::string(text) + "'");
        dims.push_back(value);
        pos = end + 1;
    }
    return Format(std::move(dims));
}

std::vector<int> Format::ns() const
{
    std::vector<int> out(dims_.size());
    std::transform(dims_.begin(), dims_.end(), out.begin(), [](int d) { return d - 1; });
    return out;
}

std::int64_t Format::entry_count() const
{
    std::int64_t p = 1;
    for (int d : dims_)
        p = checked_mul(p, d);
    return p;
}

Format Format::canonical() const
{
    std::vector<int> d = dims_;
    std::sort(d.begin(), d.end());
    return Format(std::move(d));
}

std::string Format::to_string() const
{
    std::string s;
    for (int d : canonical().dims_) {
        if (!s.empty())
            s += 'x';
        s += std::to_string(d);
    }
    return s;
}

bool operator==(const Format& a, const Format& b)
{
    return a.canonical().dims_ == b.canonical().dims_;
}

bool operator<(const Format& a, const Format& b)
{
    auto ca = a.canonical().dims_, cb = b.canonical().dims_;
    if (ca.size() != cb.size())
        return ca.size() < cb.size();
    return ca < cb;
}

FormatClass classify(const Format& format)
{
    const auto ns = format.ns();
    const long total = std::accumulate(ns.begin(), ns.end(), 0L);
    bool boundary = false;
    for (int ni : ns) {
        long rest = total - ni;
        if (ni > rest)
            return FormatClass::BeyondBoundary;
        if (ni == rest)
            boundary = true;
    }
    return boundary ? FormatClass::Boundary : FormatClass::SubBoundary;
}

Format beyond_by_one(const std::vector<int>& first)
{
    if (first.size() < 2)
        throw std::invalid_argument("beyond_by_one needs at least two leading factors");
    std::vector<int> dims;
    int n = 0;
    for (int ni : first) {
        if (ni < 1)
            throw std::invalid_argument("leading n_i must be >= 1");
        dims.push_back(ni + 1);
        n += ni;
    }
    dims.push_back(n + 2);
    return Format(std::move(dims));
}

bool is_beyond_by_one(const Format& format)
{
    auto ns = format.canonical().ns();
    if (ns.size() < 3)
        return false;
    int n = std::accumulate(ns.begin(), ns.end() - 1, 0);
    return ns.back() == n + 1;
}

std::vector<int> beyond_by_one_leading(const Format& format)
{
    if (!is_beyond_by_one(format))
        throw std::invalid_argument("format " + format.to_string() + " is not beyond-by-one");
    auto ns = format.canonical().ns();
    ns.pop_back();
    return ns;
}

std::int64_t critical_dim_formula(const Format& format)
{
    const auto dims = format.canonical().dims();
    const std::size_t k = dims.size();
    std::int64_t big_n = 1;
    for (std::size_t i = 0; i + 1 < k; ++i)
        big_n = checked_mul(big_n, dims[i]);
    std::int64_t sum_lead = 0;
    for (std::size_t i = 0; i + 1 < k; ++i)
        sum_lead += binom(dims[i], 2);
    const std::int64_t last = dims.back();

    auto first_branch = [&] {
        return checked_mul(big_n, last) - sum_lead - binom(last, 2);
    };
    auto second_branch = [&] { return binom(big_n + 1, 2) - sum_lead; };

    if (last < big_n)
        return first_branch();
    if (last > big_n)
        return second_branch();
    const std::int64_t a = first_branch(), b = second_branch();
    if (a != b)
        throw std::logic_error("critical dimension branches disagree at n_k+1 = N");
    return a;
}

DimensionInequality dimension_inequality(const std::vector<int>& first)
{
    const std::int64_t n = std::accumulate(first.begin(), first.end(), std::int64_t{0});
    DimensionInequality out;
    out.lhs = 1;
    out.rhs = static_cast<long>(n + 2);
    for (int nj : first) {
        out.lhs *= binom_big(n - 1, nj);
        out.rhs *= binom_big(n - 2, nj);
    }
    out.holds = out.lhs <= out.rhs;
    return out;
}

std::vector<std::vector<int>> sorted_tuples(int k, int max_n)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    if (k >= 1 && max_n >= 1)
        sorted_tuples_rec(k, 1, max_n, cur, out);
    return out;
}

std::vector<std::vector<int>> exception_scan(int k, int bound)
{
    if (k < 2 || bound < 1)
        throw std::invalid_argument("exception_scan needs k >= 2 and bound >= 1");
    std::vector<std::vector<int>> out;
    for (auto& t : sorted_tuples(k, bound))
        if (!dimension_inequality(t).holds)
            out.push_back(t);
    return out;
}

}  // namespace critspace
