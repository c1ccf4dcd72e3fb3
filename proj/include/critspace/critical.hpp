#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "critspace/bigint.hpp"
#include "critspace/exactla.hpp"
#include "critspace/format.hpp"
#include "critspace/tensor.hpp"

namespace critspace {

/// Monomials of one degree in `vars` variables, in graded-lex order
/// (x_0^d first). Negative degree gives the empty basis.
class MonomialBasis {
public:
    MonomialBasis(int vars, int degree);

    int vars() const { return vars_; }
    int degree() const { return degree_; }
    std::size_t size() const { return count_; }
    std::span<const int> exponent(std::size_t i) const
    {
        return {exps_.data() + i * static_cast<std::size_t>(vars_), static_cast<std::size_t>(vars_)};
    }
    /// Index of an exponent vector of this degree; npos if absent.
    std::size_t index_of(std::span<const int> e) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    int vars_, degree_;
    std::size_t count_ = 0;
    std::vector<int> exps_;
    std::map<std::vector<int>, std::size_t> lookup_;
};

/// One nonzero slot of the critical-space equations: the coefficient at
/// (row, col) is sign * t[t_index].
struct CriticalEntry {
    std::size_t row, col, t_index;
    int sign;
};

/// Rows are (factor l, pair p < q) over all coordinates of factor l, in
/// that nesting order; columns follow the tensor linearization.
struct CriticalPattern {
    std::size_t rows = 0, cols = 0;
    std::vector<CriticalEntry> entries;
};

CriticalPattern critical_pattern(const Format& format);

template <class S, class Set>
void fill_critical(const BasicTensor<S>& t, Set&& set)
{
    for (const auto& e : critical_pattern(t.format()).entries)
        set(e.row, e.col, e.sign > 0 ? S(t[e.t_index]) : S(-t[e.t_index]));
}

FpMatrix critical_equations(const IntTensor& t, PrimeField field);
QMatrix critical_equations_q(const RealTensor& t);

/// Dimension of the critical space of t.
std::size_t critical_dim(const IntTensor& t, PrimeField field);
/// Exact over Q; doubles are converted without rounding.
std::size_t critical_dim_exact(const RealTensor& t);

struct AlphaShape {
    BigInt domain, codomain;  // column and row counts
};

/// Dimensions of the alpha map from binomials alone. Throws InputError if
/// the format is not beyond-by-one.
AlphaShape alpha_shape(const Format& format);

/// Index bookkeeping for the alpha map of a beyond-by-one format in
/// canonical order (leading factors, then the factor of size n + 2).
class AlphaLayout {
public:
    explicit AlphaLayout(const Format& canonical_format);

    std::size_t domain_dim() const { return domain_; }
    std::size_t codomain_dim() const { return codomain_; }
    int n() const { return n_; }
    const std::vector<int>& leading() const { return lead_; }

    /// Calls fn(row_base, multiplier, t_base) once per multi-index (i_1..i_k)
    /// contributing to column col; the entries are rows row_base + c with
    /// value multiplier * t[t_base + c], c = 0..n+1.
    template <class Fn>
    void for_each_in_column(std::size_t col, Fn&& fn) const
    {
        const std::size_t k = lead_.size();
        std::vector<std::size_t> mono(k);
        std::size_t rest = col;
        for (std::size_t j = k; j-- > 0;) {
            mono[j] = rest % dom_[j].size();
            rest /= dom_[j].size();
        }
        std::vector<std::size_t> pos(k, 0);
        std::vector<const std::vector<Step>*> steps(k);
        for (std::size_t j = 0; j < k; ++j) {
            steps[j] = &steps_[j][mono[j]];
            if (steps[j]->empty())
                return;
        }
        while (true) {
            std::size_t row = 0, tb = 0;
            std::int64_t mult = 1;
            for (std::size_t j = 0; j < k; ++j) {
                const Step& s = (*steps[j])[pos[j]];
                row = row * cod_[j].size() + s.divided;
                tb += static_cast<std::size_t>(s.var) * t_stride_[j];
                mult *= s.exponent;
            }
            fn(row * last_dim_, mult, tb);
            std::size_t j = k;
            while (j-- > 0) {
                if (++pos[j] < steps[j]->size())
                    break;
                pos[j] = 0;
            }
            if (j == static_cast<std::size_t>(-1))
                return;
        }
    }

    std::size_t last_dim() const { return last_dim_; }

private:
    struct Step {
        int var, exponent;
        std::size_t divided;
    };
    std::vector<int> lead_;
    int n_ = 0;
    std::size_t last_dim_ = 0, domain_ = 1, codomain_ = 1;
    std::vector<MonomialBasis> dom_, cod_;
    std::vector<std::vector<std::vector<Step>>> steps_;  // [factor][monomial]
    std::vector<std::size_t> t_stride_;
};

/// Work limits applied before building an alpha matrix.
struct AlphaGuard {
    double max_entries = 6.0e7;  // codomain * domain
    double max_work = 4.0e11;    // min^2 * max elimination estimate
};

/// Throws GuardRefusal when the shape exceeds the guard.
void check_alpha_guard(const AlphaShape& shape, const AlphaGuard& guard);
bool alpha_within_guard(const AlphaShape& shape, const AlphaGuard& guard);

/// The matrix of alpha_T: codomain x domain. The tensor may be given in any
/// factor order; it is brought to canonical order first.
FpMatrix alpha_matrix(const IntTensor& t, PrimeField field);
FpMatrix alpha_matrix_reference(const IntTensor& t, PrimeField field);
QMatrix alpha_matrix_q(const RealTensor& t);

/// dim ker alpha_T over F_p.
std::size_t span_codim_via_alpha(const IntTensor& t, PrimeField field);
/// dim ker alpha_T over Q.
std::size_t span_codim_via_alpha_exact(const RealTensor& t);

/// Runs f on one random tensor per (prime, seed) pair.
struct ProtocolResult {
    std::vector<std::size_t> runs;
    bool agreed = true;
    std::size_t value = 0;  // common value when agreed, else the maximum
};

using TensorStatistic = std::function<std::size_t(const IntTensor&, PrimeField)>;

ProtocolResult generic_protocol(const Format& format, const std::vector<std::uint32_t>& primes,
                                const std::vector<std::uint64_t>& seeds, const TensorStatistic& f);

inline const std::vector<std::uint32_t>& default_primes()
{
    static const std::vector<std::uint32_t> p{kDefaultPrime, kSecondPrime};
    return p;
}
inline const std::vector<std::uint64_t>& default_seeds()
{
    static const std::vector<std::uint64_t> s{1, 2};
    return s;
}

struct KoszulResult {
    std::size_t complex_homology = 0;  // middle homology of the 3-term complex
    std::size_t artinian = 0;          // kernel of multiplication by z
};

/// Both routes to the Koszul group for a tensor of format
/// (a+1, b+1, a+b+2), a, b >= 2. `seed` draws the hyperplane section.
/// Throws DegenerateTensor if W -> A (x) B is not injective.
KoszulResult koszul_oracle(int a, int b, const IntTensor& t, PrimeField field, std::uint64_t seed);

}  // namespace critspace
