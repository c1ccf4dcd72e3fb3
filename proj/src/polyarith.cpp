#include "critspace/polyarith.hpp"

#include <sstream>
#include <stdexcept>

namespace critspace {

namespace {

void require_same_arity(const SparsePoly& p, const SparsePoly& q)
{
    if (p.nvars() != q.nvars())
        throw std::invalid_argument("polynomials have different variable counts");
}

bool within(const Exponent& e, const Exponent& caps)
{
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > caps[i])
            return false;
    return true;
}

SparsePoly power_truncated(const SparsePoly& base, int exp, const Exponent& caps)
{
    SparsePoly out = SparsePoly::constant(base.nvars(), 1);
    for (int i = 0; i < exp; ++i)
        out = mul_truncated(out, base, caps);
    return out;
}

}  // namespace

SparsePoly SparsePoly::constant(std::size_t nvars, const BigInt& c)
{
    SparsePoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

SparsePoly SparsePoly::variable(std::size_t nvars, std::size_t index)
{
    if (index >= nvars)
        throw std::out_of_range("variable index out of range");
    SparsePoly p(nvars);
    Exponent e(nvars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

BigInt SparsePoly::coefficient(const Exponent& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
}

void SparsePoly::add_term(const Exponent& e, const BigInt& c)
{
    if (e.size() != nvars_)
        throw std::invalid_argument("exponent length does not match variable count");
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

SparsePoly SparsePoly::operator-() const
{
    SparsePoly out(nvars_);
    for (const auto& [e, c] : terms_)
        out.terms_.emplace(e, -c);
    return out;
}

std::string SparsePoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        first = false;
        BigInt mag = abs(c);
        bool unit = true;
        for (int x : e)
            unit = unit && x == 0;
        if (mag != 1 || unit)
            os << mag.get_str();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            os << "h" << (i + 1);
            if (e[i] > 1)
                os << "^" << e[i];
        }
    }
    return os.str();
}

SparsePoly add(const SparsePoly& p, const SparsePoly& q)
{
    require_same_arity(p, q);
    SparsePoly out = p;
    for (const auto& [e, c] : q.terms())
        out.add_term(e, c);
    return out;
}

SparsePoly mul_truncated(const SparsePoly& p, const SparsePoly& q, const Exponent& caps)
{
    require_same_arity(p, q);
    if (caps.size() != p.nvars())
        throw std::invalid_argument("caps length does not match variable count");
    SparsePoly out(p.nvars());
    Exponent e(p.nvars());
    for (const auto& [ep, cp] : p.terms()) {
        if (!within(ep, caps))
            continue;
        for (const auto& [eq, cq] : q.terms()) {
            bool keep = true;
            for (std::size_t i = 0; i < e.size() && keep; ++i) {
                e[i] = ep[i] + eq[i];
                keep = e[i] <= caps[i];
            }
            if (keep)
                out.add_term(e, cp * cq);
        }
    }
    return out;
}

SparsePoly fo_factor(std::size_t i, const std::vector<int>& n)
{
    const std::size_t k = n.size();
    if (i >= k)
        throw std::out_of_range("factor index out of range");
    // every term has total degree n_i, so these caps never truncate
    const Exponent caps(k, n[i]);
    SparsePoly hi = SparsePoly::variable(k, i);
    SparsePoly hhat(k);
    for (std::size_t l = 0; l < k; ++l)
        if (l != i)
            hhat = add(hhat, SparsePoly::variable(k, l));

    SparsePoly out(k);
    for (int j = 0; j <= n[i]; ++j)
        out = add(out, mul_truncated(power_truncated(hi, j, caps),
                                     power_truncated(hhat, n[i] - j, caps), caps));
    return out;
}

BigInt ed_degree(const std::vector<int>& n)
{
    if (n.empty())
        throw std::invalid_argument("ed_degree needs at least one factor");
    for (int x : n)
        if (x < 1)
            throw std::invalid_argument("ed_degree needs every n_j >= 1");
    const Exponent caps(n.begin(), n.end());
    SparsePoly product = SparsePoly::constant(n.size(), 1);
    for (std::size_t i = 0; i < n.size(); ++i)
        product = mul_truncated(product, fo_factor(i, n), caps);
    return product.coefficient(caps);
}

}  // namespace critspace
