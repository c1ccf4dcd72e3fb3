#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "critspace/format.hpp"

namespace critspace {

inline constexpr std::uint32_t kDefaultPrime = 2147483647u;  // 2^31 - 1
inline constexpr std::uint32_t kSecondPrime = 2147483629u;   // largest prime below it

/// Arithmetic in Z/p for a prime 2 < p < 2^31. Products of two reduced
/// elements fit below 2^62, which the lazy accumulation below relies on.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p = kDefaultPrime);

    std::uint32_t prime() const { return p_; }
    std::uint32_t reduce(std::int64_t v) const;
    /// x < 2^63
    std::uint32_t reduce_wide(std::uint64_t x) const
    {
        std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * mu_) >> 64);
        std::uint64_t r = x - q * p_;
        while (r >= p_)
            r -= p_;
        return static_cast<std::uint32_t>(r);
    }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return reduce_wide(static_cast<std::uint64_t>(a) * b);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
    std::uint32_t inv(std::uint32_t a) const;

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

private:
    std::uint32_t p_;
    std::uint64_t mu_;  // floor((2^64 - 1) / p)
};

bool is_prime(std::uint64_t n);

/// Dense row-major matrix over F_p.
class FpMatrix {
public:
    FpMatrix(std::size_t rows, std::size_t cols, PrimeField field = PrimeField());

    static FpMatrix identity(std::size_t n, PrimeField field = PrimeField());

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const PrimeField& field() const { return field_; }

    std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::int64_t v) { data_[r * cols_ + c] = field_.reduce(v); }

    std::span<const std::uint32_t> row(std::size_t r) const
    {
        return {data_.data() + r * cols_, cols_};
    }

    FpMatrix transpose() const;
    std::vector<std::uint32_t> apply(std::span<const std::uint32_t> v) const;

private:
    std::size_t rows_, cols_;
    PrimeField field_;
    std::vector<std::uint32_t> data_;
};

/// Reduced row echelon basis of a growing set of vectors over F_p. Each
/// stored row has a unit pivot and zeros in every other pivot column.
class EchelonBasis {
public:
    EchelonBasis(std::size_t length, PrimeField field);

    /// Reduces v against the basis; keeps it when independent.
    bool insert(std::span<const std::uint32_t> v);
    /// Same for the vector with entries value[i] at index[i] (repeats add up).
    bool insert_sparse(std::span<const std::size_t> index, std::span<const std::uint32_t> value);

    std::size_t rank() const { return rows_.size(); }
    std::size_t length() const { return length_; }
    bool full() const { return rows_.size() == length_; }

    /// Basis of the annihilator {x : b . x = 0 for all basis rows b}.
    std::vector<std::vector<std::uint32_t>> orthogonal_complement() const;

private:
    std::size_t length_;
    PrimeField field_;
    std::vector<std::vector<std::uint32_t>> rows_;
    std::vector<std::size_t> pivot_of_row_;
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    bool reduce_and_keep();

    // Rows are stored on the free (non-pivot) columns only, in the order of
    // free_; the pivot part is implicit.
    std::vector<std::size_t> free_;
    std::vector<std::size_t> slot_of_;  // column -> position in free_, or kNone
    std::vector<std::size_t> row_of_pivot_;  // column -> basis row, or kNone
    std::vector<std::uint32_t> acc_;
    std::vector<std::pair<std::size_t, std::uint32_t>> active_;
};

/// Rank via the echelon accumulator, streaming along the longer side and
/// stopping once the shorter side is exhausted. OpenMP-parallel inner loops.
std::size_t rank(const FpMatrix& m);

/// Plain serial Gaussian elimination; kept as the test oracle for rank().
std::size_t rank_reference(const FpMatrix& m);

/// Basis of the right kernel; size cols - rank.
std::vector<std::vector<std::uint32_t>> kernel_basis(const FpMatrix& m);

/// Dense row-major matrix over Q.
class QMatrix {
public:
    QMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const mpq_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    mpq_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    QMatrix transpose() const;
    std::vector<mpq_class> apply(const std::vector<mpq_class>& v) const;
    /// Entrywise reduction of an integer matrix; throws if a denominator
    /// vanishes mod p.
    FpMatrix reduce_mod(PrimeField field) const;

private:
    std::size_t rows_, cols_;
    std::vector<mpq_class> data_;
};

std::size_t rank(const QMatrix& m);
std::vector<std::vector<mpq_class>> kernel_basis(const QMatrix& m);

enum class EntryKind { PrimeField, Integers };

/// How random entries are drawn: uniform in [0, p) or uniform in [-B, B].
struct EntryDistribution {
    EntryKind kind = EntryKind::PrimeField;
    std::uint64_t prime = kDefaultPrime;
    std::int64_t bound = 0;

    static EntryDistribution field(std::uint64_t p) { return {EntryKind::PrimeField, p, 0}; }
    static EntryDistribution integers(std::int64_t b) { return {EntryKind::Integers, 0, b}; }
};

/// Deterministic i.i.d. uniform draws from mt19937_64 with rejection
/// sampling, so output is identical across standard libraries.
std::vector<std::int64_t> random_entries(std::size_t count, std::uint64_t seed,
                                         const EntryDistribution& dist);

std::vector<std::int64_t> random_tensor(const Format& format, std::uint64_t seed,
                                        const EntryDistribution& dist);

}  // namespace critspace
