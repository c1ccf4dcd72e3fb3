#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "critspace/bigint.hpp"

namespace critspace {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial with exact integer coefficients over a
/// fixed number of variables. Zero coefficients are never stored.
class SparsePoly {
public:
    explicit SparsePoly(std::size_t nvars = 0) : nvars_(nvars) {}

    static SparsePoly constant(std::size_t nvars, const BigInt& c);
    /// The single variable h_{index} (0-based).
    static SparsePoly variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const { return nvars_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponent, BigInt>& terms() const { return terms_; }

    BigInt coefficient(const Exponent& e) const;
    void add_term(const Exponent& e, const BigInt& c);

    SparsePoly operator-() const;
    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

    std::string to_string() const;

private:
    std::size_t nvars_;
    std::map<Exponent, BigInt> terms_;
};

SparsePoly add(const SparsePoly& p, const SparsePoly& q);

/// Exact product with every term exceeding `caps` in some coordinate dropped.
SparsePoly mul_truncated(const SparsePoly& p, const SparsePoly& q, const Exponent& caps);

/// The i-th Friedland-Ottaviani factor sum_{j=0}^{n_i} h_i^j hhat_i^{n_i-j},
/// hhat_i = sum_{l != i} h_l, fully expanded (0-based i).
SparsePoly fo_factor(std::size_t i, const std::vector<int>& n);

/// Number of singular vector tuples of a general tensor of format (n_j + 1)_j.
BigInt ed_degree(const std::vector<int>& n);

}  // namespace critspace
