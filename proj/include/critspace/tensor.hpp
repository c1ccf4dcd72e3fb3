#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "critspace/format.hpp"

namespace critspace {

/// Row-major offsets: entry (i_1, ..., i_k) lives at sum_j i_j * strides[j],
/// with the last index fastest.
std::vector<std::size_t> strides_of(const Format& format);

std::size_t linear_index(const Format& format, std::span<const int> idx);
std::vector<int> multi_index(const Format& format, std::size_t linear);

/// Permutation sorting the dims non-decreasingly (stable), so that
/// dims()[perm[i]] is the i-th canonical dim.
std::vector<int> canonical_order(const Format& format);

/// Dense tensor t_{i_1...i_k} in the row-major layout above.
template <class S>
class BasicTensor {
public:
    using value_type = S;

    BasicTensor() = default;
    BasicTensor(Format format, std::vector<S> entries)
        : format_(std::move(format)), entries_(std::move(entries))
    {
        if (static_cast<std::int64_t>(entries_.size()) != format_.entry_count())
            throw std::invalid_argument("tensor entry count does not match its format");
    }
    explicit BasicTensor(Format format)
        : format_(std::move(format)), entries_(static_cast<std::size_t>(format_.entry_count()))
    {
    }

    const Format& format() const { return format_; }
    const std::vector<S>& entries() const { return entries_; }
    std::vector<S>& entries() { return entries_; }
    std::size_t size() const { return entries_.size(); }

    const S& operator[](std::size_t i) const { return entries_[i]; }
    S& operator[](std::size_t i) { return entries_[i]; }
    const S& at(std::span<const int> idx) const { return entries_[linear_index(format_, idx)]; }
    S& at(std::span<const int> idx) { return entries_[linear_index(format_, idx)]; }

    /// Axis i of the result is axis perm[i] of this tensor.
    BasicTensor permuted(const std::vector<int>& perm) const
    {
        const std::size_t k = perm.size();
        if (k != static_cast<std::size_t>(format_.order()))
            throw std::invalid_argument("permutation length does not match tensor order");
        std::vector<int> dims(k);
        for (std::size_t i = 0; i < k; ++i)
            dims[i] = format_.dim(perm[i]);
        BasicTensor out{Format(dims)};
        const auto old_strides = strides_of(format_);
        std::vector<int> idx(k, 0);
        for (std::size_t lin = 0; lin < entries_.size(); ++lin) {
            std::size_t src = 0;
            for (std::size_t i = 0; i < k; ++i)
                src += static_cast<std::size_t>(idx[i]) * old_strides[static_cast<std::size_t>(perm[i])];
            out.entries_[lin] = entries_[src];
            for (std::size_t i = k; i-- > 0;) {
                if (++idx[i] < dims[i])
                    break;
                idx[i] = 0;
            }
        }
        return out;
    }

    /// Same tensor with the factors in canonical (sorted) order.
    BasicTensor canonical() const { return permuted(canonical_order(format_)); }

private:
    Format format_;
    std::vector<S> entries_;
};

using IntTensor = BasicTensor<std::int64_t>;
using RealTensor = BasicTensor<double>;
using ComplexTensor = BasicTensor<std::complex<double>>;

template <class To, class From>
BasicTensor<To> convert(const BasicTensor<From>& t)
{
    std::vector<To> e(t.entries().begin(), t.entries().end());
    return BasicTensor<To>(t.format(), std::move(e));
}

}  // namespace critspace
