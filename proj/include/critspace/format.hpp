#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "critspace/bigint.hpp"

namespace critspace {

/// Binomial coefficient with the convention binom(p, q) = 0 whenever
/// q < 0, p < 0 or q > p. Throws std::overflow_error past 64 bits.
std::int64_t binom(std::int64_t p, std::int64_t q);

enum class FormatClass { SubBoundary, Boundary, BeyondBoundary };

const char* to_string(FormatClass c);

/// A tensor format (n_1+1, ..., n_k+1). Stored as given; comparison and
/// printing go through the sorted canonical form.
class Format {
public:
    Format() = default;
    explicit Format(std::vector<int> dims);

    /// Parses "d1xd2x...xdk".
    static Format parse(std::string_view text);

    const std::vector<int>& dims() const { return dims_; }
    int order() const { return static_cast<int>(dims_.size()); }
    int dim(int i) const { return dims_[static_cast<std::size_t>(i)]; }
    /// n_i = dims[i] - 1
    int n(int i) const { return dims_[static_cast<std::size_t>(i)] - 1; }
    std::vector<int> ns() const;

    /// Product of the dims; throws std::overflow_error past 64 bits.
    std::int64_t entry_count() const;

    Format canonical() const;
    std::string to_string() const;

    friend bool operator==(const Format& a, const Format& b);
    friend bool operator<(const Format& a, const Format& b);

private:
    std::vector<int> dims_;
};

FormatClass classify(const Format& format);

/// (n_1+1, ..., n_k+1, n+2) with n = sum of the given n_i.
Format beyond_by_one(const std::vector<int>& first);

/// True when the last (largest) factor equals n+2 for n the sum of the others.
bool is_beyond_by_one(const Format& format);

/// Leading n_i of a beyond-by-one format, in canonical order.
std::vector<int> beyond_by_one_leading(const Format& format);

/// Dimension of the critical space of a general tensor of this format.
std::int64_t critical_dim_formula(const Format& format);

struct DimensionInequality {
    BigInt lhs;  // prod binom(n-1, n_j)
    BigInt rhs;  // (n+2) prod binom(n-2, n_j)
    bool holds = false;    // lhs <= rhs
};

DimensionInequality dimension_inequality(const std::vector<int>& first);

/// All non-decreasing tuples 1 <= n_1 <= ... <= n_k <= bound where the
/// inequality fails, in lexicographic order.
std::vector<std::vector<int>> exception_scan(int k, int bound);

/// Non-decreasing tuples 1 <= n_1 <= ... <= n_k <= max_n, lexicographic.
std::vector<std::vector<int>> sorted_tuples(int k, int max_n);

}  // namespace critspace
