#include <doctest.h>

#include <random>

#include "critspace/critical.hpp"
#include "critspace/errors.hpp"

using namespace critspace;

namespace {

IntTensor random_int(const Format& f, std::uint64_t seed, std::uint32_t p = kDefaultPrime)
{
    return IntTensor(f, random_tensor(f, seed, EntryDistribution::field(p)));
}

std::size_t generic_kernel(const Format& f, const TensorStatistic& rank_of, std::size_t cols)
{
    auto r = generic_protocol(f, default_primes(), default_seeds(), rank_of);
    CHECK(r.agreed);
    return cols - r.value;
}

}  // namespace

TEST_CASE("tensor layout")
{
    const Format f({2, 3, 4});
    CHECK(strides_of(f) == std::vector<std::size_t>{12, 4, 1});
    std::vector<int> idx{1, 2, 3};
    CHECK(linear_index(f, idx) == 23);
    CHECK(multi_index(f, 23) == idx);
    CHECK_THROWS(linear_index(f, std::vector<int>{2, 0, 0}));

    IntTensor t(Format({3, 2}), {0, 1, 2, 3, 4, 5});
    auto p = t.permuted({1, 0});
    CHECK(p.format().dims() == std::vector<int>{2, 3});
    CHECK(p.entries() == std::vector<std::int64_t>{0, 2, 4, 1, 3, 5});
    CHECK(p.canonical().entries() == p.entries());
    CHECK(t.canonical().entries() == p.entries());
    CHECK(canonical_order(Format({4, 2, 4, 3})) == std::vector<int>{1, 3, 0, 2});
}

TEST_CASE("permuting back and forth is the identity")
{
    std::mt19937 gen(2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> dims;
        const int k = 2 + static_cast<int>(gen() % 3);
        for (int i = 0; i < k; ++i)
            dims.push_back(2 + static_cast<int>(gen() % 3));
        auto t = random_int(Format(dims), gen());
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<int> inv(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
        auto back = t.permuted(perm).permuted(inv);
        CHECK(back.entries() == t.entries());
        CHECK(back.format().dims() == t.format().dims());
    }
}

TEST_CASE("monomial bases")
{
    MonomialBasis b(3, 2);
    CHECK(b.size() == 6);
    CHECK(std::vector<int>(b.exponent(0).begin(), b.exponent(0).end()) == std::vector<int>{2, 0, 0});
    CHECK(std::vector<int>(b.exponent(5).begin(), b.exponent(5).end()) == std::vector<int>{0, 0, 2});
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(b.index_of(b.exponent(i)) == i);
    CHECK(b.index_of(std::vector<int>{1, 1, 1}) == MonomialBasis::npos);
    CHECK(MonomialBasis(4, -1).size() == 0);
    CHECK(MonomialBasis(4, 0).size() == 1);
    for (int v = 1; v <= 5; ++v)
        for (int d = 0; d <= 6; ++d)
            CHECK(static_cast<std::int64_t>(MonomialBasis(v, d).size()) == binom(d + v - 1, v - 1));
}

TEST_CASE("critical equations shape and the tensor itself")
{
    std::mt19937 gen(9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> dims;
        const int k = 2 + static_cast<int>(gen() % 3);
        std::int64_t rows = 0;
        for (int i = 0; i < k; ++i) {
            dims.push_back(2 + static_cast<int>(gen() % 4));
            rows += binom(dims.back(), 2);
        }
        const Format f(dims);
        const PrimeField field;
        auto t = random_int(f, gen());
        auto m = critical_equations(t, field);
        CHECK(m.rows() == static_cast<std::size_t>(rows));
        CHECK(m.cols() == static_cast<std::size_t>(f.entry_count()));
        std::vector<std::uint32_t> flat(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            flat[i] = field.reduce(t[i]);
        for (auto v : m.apply(flat))
            CHECK(v == 0);
    }
}

TEST_CASE("critical space of a diagonal matrix")
{
    RealTensor d(Format({3, 3}), {1, 0, 0, 0, 2, 0, 0, 0, 3});
    auto q = critical_equations_q(d);
    auto ker = kernel_basis(q);
    REQUIRE(ker.size() == 3);
    // every kernel vector is supported on the diagonal
    for (const auto& v : ker)
        for (std::size_t i = 0; i < 9; ++i)
            if (i % 4 != 0)
                CHECK(v[i] == 0);
    CHECK(critical_dim_exact(d) == 3);
}

TEST_CASE("critical dimension of random tensors")
{
    auto stat = [](const IntTensor& t, PrimeField f) { return rank(critical_equations(t, f)); };
    for (auto dims : {std::vector<int>{2, 2, 2}, {2, 2, 4}, {3, 3, 6}, {2, 3}, {4, 4}, {2, 2, 2, 2}, {3, 4, 5}}) {
        const Format f(dims);
        CHECK_MESSAGE(generic_kernel(f, stat, static_cast<std::size_t>(f.entry_count())) ==
                          static_cast<std::size_t>(critical_dim_formula(f)),
                      f.to_string());
    }
    CHECK(critical_dim(random_int(Format({2, 2, 2}), 5), PrimeField()) == 5);
    CHECK(critical_dim(random_int(Format({2, 2, 4}), 5), PrimeField()) == 8);
    CHECK(critical_dim(random_int(Format({3, 3, 6}), 5), PrimeField()) == 33);
    for (int m = 2; m <= 6; ++m)
        CHECK(critical_dim(random_int(Format({m, m}), 3), PrimeField()) == static_cast<std::size_t>(m));
}

TEST_CASE("alpha shape")
{
    auto s = alpha_shape(Format({3, 3, 6}));
    CHECK(s.domain == 9);
    CHECK(s.codomain == 6);
    s = alpha_shape(Format({2, 2, 2, 5}));
    CHECK(s.domain == 8);
    CHECK(s.codomain == 5);
    s = alpha_shape(Format({2, 6, 8}));
    CHECK(s.domain == 5);
    CHECK(s.codomain == 0);
    CHECK_THROWS_AS(alpha_shape(Format({3, 3, 5})), InputError);
    CHECK_THROWS_AS(alpha_matrix(random_int(Format({3, 3, 5}), 1), PrimeField()), InputError);
}

TEST_CASE("alpha matrix dimensions follow the binomial counts")
{
    for (int k = 2; k <= 3; ++k)
        for (const auto& lead : sorted_tuples(k, 4)) {
            const Format f = beyond_by_one(lead);
            const auto shape = alpha_shape(f);
            if (shape.domain * shape.codomain > 200000)
                continue;
            auto m = alpha_matrix(random_int(f, 4), PrimeField());
            CHECK(BigInt(static_cast<unsigned long>(m.cols())) == shape.domain);
            CHECK(BigInt(static_cast<unsigned long>(m.rows())) == shape.codomain);
        }
}

TEST_CASE("parallel alpha build matches the serial reference")
{
    std::mt19937_64 gen(13);
    for (auto dims : {std::vector<int>{3, 3, 6}, {3, 4, 7}, {2, 2, 2, 5}, {2, 3, 3, 7}, {2, 5, 7}, {4, 4, 8}}) {
        const Format f(dims);
        auto t = random_int(f, gen());
        for (std::uint32_t p : {kDefaultPrime, 101u}) {
            auto a = alpha_matrix(t, PrimeField(p));
            auto b = alpha_matrix_reference(t, PrimeField(p));
            REQUIRE(a.rows() == b.rows());
            REQUIRE(a.cols() == b.cols());
            bool same = true;
            for (std::size_t r = 0; r < a.rows(); ++r)
                for (std::size_t c = 0; c < a.cols(); ++c)
                    same = same && a(r, c) == b(r, c);
            CHECK_MESSAGE(same, f.to_string());
        }
    }
}

TEST_CASE("alpha ignores the order the factors are given in")
{
    const Format f({3, 4, 7});
    auto t = random_int(f, 77);
    auto shuffled = t.permuted({2, 0, 1});
    auto a = alpha_matrix(t, PrimeField());
    auto b = alpha_matrix(shuffled, PrimeField());
    CHECK(a.rows() == b.rows());
    bool same = true;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            same = same && a(r, c) == b(r, c);
    CHECK(same);
}

TEST_CASE("alpha kernels on named formats")
{
    auto stat = [](const IntTensor& t, PrimeField f) { return rank(alpha_matrix(t, f)); };
    auto kernel = [&](const Format& f) {
        return generic_kernel(f, stat, static_cast<std::size_t>(alpha_shape(f).domain.get_ui()));
    };
    for (int n = 2; n <= 6; ++n)
        CHECK(kernel(Format({2, n, n + 2})) == static_cast<std::size_t>(n - 1));
    CHECK(kernel(Format({3, 3, 6})) == 3);
    CHECK(kernel(Format({3, 4, 7})) == 3);
    CHECK(kernel(Format({3, 5, 8})) == 2);
    CHECK(kernel(Format({4, 4, 8})) == 0);
    CHECK(kernel(Format({2, 2, 2, 5})) == 3);
    CHECK(kernel(Format({2, 2, 3, 6})) == 3);
    CHECK(span_codim_via_alpha(random_int(Format({2, 6, 8}), 1), PrimeField()) == 5);
}

TEST_CASE("alpha over the rationals")
{
    std::mt19937_64 gen(19);
    std::normal_distribution<double> nd;
    for (auto dims : {std::vector<int>{3, 3, 6}, {2, 2, 2, 5}, {2, 2, 4}}) {
        const Format f(dims);
        std::vector<double> e(static_cast<std::size_t>(f.entry_count()));
        for (auto& x : e)
            x = nd(gen);
        RealTensor t(f, e);
        const std::size_t expect = dims.size() == 3 && dims[0] == 2 ? 1 : 3;
        CHECK(span_codim_via_alpha_exact(t) == expect);
    }
}

TEST_CASE("alpha guard")
{
    AlphaGuard g;
    g.max_entries = 100;
    CHECK(alpha_within_guard(alpha_shape(Format({3, 3, 6})), g));
    CHECK_FALSE(alpha_within_guard(alpha_shape(Format({4, 4, 8})), g));
    CHECK_THROWS_AS(check_alpha_guard(alpha_shape(Format({4, 4, 8})), g), GuardRefusal);
}

TEST_CASE("generic protocol reports disagreement")
{
    int calls = 0;
    auto r = generic_protocol(Format({2, 2}), {kDefaultPrime}, {1, 2}, [&](const IntTensor&, PrimeField) {
        return static_cast<std::size_t>(++calls);
    });
    CHECK_FALSE(r.agreed);
    CHECK(r.value == 2);
    CHECK(r.runs.size() == 2);
    CHECK_THROWS(generic_protocol(Format({2, 2}), {}, {1}, [](const IntTensor&, PrimeField) { return 0u; }));
}

TEST_CASE("koszul oracle")
{
    const PrimeField field;
    struct Case {
        int a, b;
        std::size_t expect;
    };
    for (auto c : {Case{2, 2, 3}, Case{2, 3, 3}, Case{2, 4, 2}, Case{3, 3, 0}}) {
        const Format f({c.a + 1, c.b + 1, c.a + c.b + 2});
        auto t = random_int(f, 10);
        auto r = koszul_oracle(c.a, c.b, t, field, 99);
        CHECK(r.complex_homology == c.expect);
        CHECK(r.artinian == c.expect);
        CHECK(span_codim_via_alpha(t, field) == c.expect);
    }
}

TEST_CASE("koszul oracle rejects bad input")
{
    const PrimeField field;
    auto t = random_int(Format({3, 3, 6}), 3);
    CHECK_THROWS_AS(koszul_oracle(2, 3, t, field, 1), InputError);
    CHECK_THROWS_AS(koszul_oracle(1, 3, random_int(Format({2, 4, 6}), 1), field, 1), InputError);
    // W -> A (x) B with a repeated column is not injective
    IntTensor d = t;
    for (std::size_t x = 0; x < 9; ++x)
        d[x * 6 + 5] = d[x * 6 + 4];
    CHECK_THROWS_AS(koszul_oracle(2, 2, d, field, 1), DegenerateTensor);
}
