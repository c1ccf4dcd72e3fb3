#include "critspace/bbw.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace critspace {

bool Weight::is_dominant() const
{
    for (std::size_t i = 0; i + 1 < entries.size(); ++i)
        if (entries[i] < entries[i + 1])
            return false;
    return true;
}

Weight Weight::normalized() const
{
    Weight w = *this;
    if (!w.entries.empty()) {
        const long last = w.entries.back();
        for (long& a : w.entries)
            a -= last;
    }
    return w;
}

std::string Weight::to_string() const
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < entries.size(); ++i)
        os << (i ? "," : "") << entries[i];
    os << ")";
    return os.str();
}

Weight omega_weight(int n, int r, long twist)
{
    if (n < 1 || r < 0 || r > n)
        throw std::invalid_argument("omega_weight needs n >= 1 and 0 <= r <= n");
    Weight w;
    w.entries.assign(static_cast<std::size_t>(n + 1), 0);
    for (int i = 0; i <= r; ++i)
        w.entries[static_cast<std::size_t>(i)] = 1;
    w.entries[0] += twist - r - 1;
    return w;
}

BigInt h_omega(int n, int r, long twist, int q)
{
    if (n < 1)
        throw std::invalid_argument("h_omega needs n >= 1");
    if (r < 0 || r > n || q < 0 || q > n)
        return 0;
    if (q == 0 && twist > r)
        return binom_big(twist + n - r, twist) * binom_big(twist - 1, r);
    if (q == r && twist == 0)
        return 1;
    if (q == n && twist < r - n)
        return binom_big(-twist + r, -twist) * binom_big(-twist - 1, n - r);
    return 0;
}

CohomologyAnswer bbw_resolve(const Weight& lambda)
{
    if (lambda.rank() < 2)
        throw std::invalid_argument("bbw_resolve needs a weight of length >= 2");
    std::vector<long> a = lambda.entries;
    int exchanges = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
            if (a[i] >= a[i + 1])
                continue;
            if (a[i + 1] == a[i] + 1)
                return CohomologyAnswer{};
            const long ai = a[i];
            a[i] = a[i + 1] - 1;
            a[i + 1] = ai + 1;
            ++exchanges;
            changed = true;
        }
    }
    CohomologyAnswer out;
    out.singular = false;
    out.index = exchanges;
    out.dominant = Weight{a}.normalized();
    out.dim = weyl_dim(out.dominant);
    return out;
}

BigInt weyl_dim(const Weight& dominant)
{
    if (!dominant.is_dominant())
        throw std::invalid_argument("weyl_dim needs a non-increasing weight");
    const auto& b = dominant.entries;
    BigInt num = 1, den = 1;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            num *= b[i] - b[j] + static_cast<long>(j - i);
            den *= static_cast<long>(j - i);
        }
    BigInt out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

namespace {

void h_E_rec(const std::vector<int>& ns, std::size_t i, int r_total, int r_left, int q_left,
             const BigInt& acc, BigInt& sum)
{
    if (i == ns.size()) {
        if (r_left == 0 && q_left == 0)
            sum += acc;
        return;
    }
    const int ni = ns[i];
    for (int ri = 0; ri <= std::min(ni, r_left); ++ri)
        for (int qi = 0; qi <= std::min(ni, q_left); ++qi) {
            BigInt h = h_omega(ni, ri, 2L * ri + 1 - r_total, qi);
            if (h == 0)
                continue;
            h_E_rec(ns, i + 1, r_total, r_left - ri, q_left - qi, acc * h, sum);
        }
}

}  // namespace

BigInt h_E(const Format& format, int r, int q)
{
    BigInt sum = 0;
    if (r < 0 || q < 0)
        return sum;
    h_E_rec(format.ns(), 0, r, r, q, BigInt(1), sum);
    return sum;
}

}  // namespace critspace
