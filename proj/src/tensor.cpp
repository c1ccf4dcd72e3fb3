#include "critspace/tensor.hpp"

#include <algorithm>

namespace critspace {

std::vector<std::size_t> strides_of(const Format& format)
{
    const std::size_t k = static_cast<std::size_t>(format.order());
    std::vector<std::size_t> s(k, 1);
    for (std::size_t i = k - 1; i-- > 0;)
        s[i] = s[i + 1] * static_cast<std::size_t>(format.dims()[i + 1]);
    return s;
}

std::size_t linear_index(const Format& format, std::span<const int> idx)
{
    if (idx.size() != static_cast<std::size_t>(format.order()))
        throw std::invalid_argument("index arity does not match tensor order");
    std::size_t lin = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= format.dims()[i])
            throw std::out_of_range("tensor index out of range");
        lin = lin * static_cast<std::size_t>(format.dims()[i]) + static_cast<std::size_t>(idx[i]);
    }
    return lin;
}

std::vector<int> multi_index(const Format& format, std::size_t linear)
{
    const std::size_t k = static_cast<std::size_t>(format.order());
    std::vector<int> idx(k);
    for (std::size_t i = k; i-- > 0;) {
        const auto d = static_cast<std::size_t>(format.dims()[i]);
        idx[i] = static_cast<int>(linear % d);
        linear /= d;
    }
    if (linear != 0)
        throw std::out_of_range("linear index out of range");
    return idx;
}

std::vector<int> canonical_order(const Format& format)
{
    std::vector<int> perm(static_cast<std::size_t>(format.order()));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return format.dim(a) < format.dim(b); });
    return perm;
}

}  // namespace critspace
